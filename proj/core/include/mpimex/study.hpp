#pragma once

#include <optional>

#include "mpimex/integrator.hpp"
#include "mpimex/problems/registry.hpp"

namespace mpimex {

// A fixed-horizon convergence study: integrate the problem at each step size,
// measure the error against the exact solution (when the problem has one) or
// a fine-step self-reference, and report observed slopes between consecutive
// step sizes.
struct ConvergenceConfig {
  SchemeId scheme = SchemeId::imex2;
  PredictorKind kind = PredictorKind::weak_jacobi;
  std::vector<double> dts;  // strictly decreasing
  SchemeId ref_scheme = SchemeId::imex4;
  PredictorKind ref_kind = PredictorKind::strong_gs;
  double ref_dt = 0.0;  // self-reference step; 0 = exact if available, else dts.back()/8
  int threads = 0;      // workers across dt points
  NewtonConfig newton;
};

struct ConvergenceRow {
  double dt = 0.0;
  double error = 0.0;  // +inf when the run diverged
  double slope = std::numeric_limits<double>::quiet_NaN();  // vs previous row
  bool diverged = false;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::vector<std::optional<PartitionedState>> finals;  // per dt; empty if diverged
  std::optional<PartitionedState> reference;            // final reference state
  double terminal_slope() const;                        // slope of the last row
};

ConvergenceResult convergence_study(const ProblemInstance& prob, const ConvergenceConfig& cfg);

// inf-norm error on the configured subsystem (or the whole state).
double state_error(const ProblemInstance& prob, const PartitionedState& u, const PartitionedState& ref);

}  // namespace mpimex
