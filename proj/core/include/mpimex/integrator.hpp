#pragma once

#include <optional>
#include <vector>

#include "mpimex/predictor.hpp"
#include "mpimex/system.hpp"
#include "mpimex/tableau.hpp"

namespace mpimex {

struct NewtonConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int max_iter = 50;
};

struct StepStats {
  int newton_iters_total = 0;
  int newton_iters_max = 0;        // max over (stage, subsystem)
  double explicit_norm_max = 0.0;  // max inf-norm of any explicit stage vector
};

// Per-step storage for the stage sweep: implicit/explicit velocity stages per
// (stage, subsystem), the running stage approximation, the Gauss-Seidel
// validity mask, and the first-subsystem coupling history used by the
// stage-variant predictor.
class StageWorkspace {
 public:
  StageWorkspace(const CoupledOdeSystem& sys, const ImexTableau& tableau, const PartitionedState& u_prev,
                 double t, double dt);

  const CoupledOdeSystem& sys;
  const ImexTableau& tableau;
  PartitionedState u_prev;
  double t = 0.0;
  double dt = 0.0;

  std::vector<PartitionedState> k_impl;    // one per stage
  std::vector<PartitionedState> k_expl;    // one per stage
  std::vector<PartitionedState> u_stages;  // completed stage approximations
  PartitionedState u_stage;                // stage being assembled
  std::vector<char> valid;
  std::vector<Vector> coupling_history;    // c^1 at completed stages

  double implicit_stage_time(int j) const { return t + tableau.c[j] * dt; }
  double explicit_stage_time(int j) const { return t + tableau.c_hat[j] * dt; }

  // u_prev^i + sum_{q<j} (a_hat[j][q] k_expl[q] + a[j][q] k_impl[q]); the
  // a[j][j] k_impl[j] term is the Newton unknown and is excluded.
  Vector stage_base(int i, int j) const;

  // Cached dense mass matrices, probed from the mass action on demand.
  const DenseMatrix& mass_dense(int i);

 private:
  std::vector<std::optional<DenseMatrix>> mass_cache_;
};

// Implicit solve of stage j for subsystem i using the given predictor;
// returns k and records it (and the updated stage state) in the workspace.
// Stage 0 has a zero implicit diagonal and is a direct evaluation.
Vector solve_implicit_stage(int i, int j, PredictorKind kind, StageWorkspace& ws, const NewtonConfig& newton,
                            int* iters_out = nullptr);

// Phase 2 of stage j: evaluate every subsystem's explicit correction at the
// completed stage state and record the stage in the workspace history.
// Requires all implicit solves of stage j to have finished.
void complete_stage_explicit(int j, PredictorKind kind, StageWorkspace& ws, StepStats* stats = nullptr);

// One step with all subsystems solved simultaneously (exact coupling inside
// the implicit part, so the explicit correction vanishes identically).
PartitionedState step_monolithic(const CoupledOdeSystem& sys, const ImexTableau& tableau,
                                 const PartitionedState& u_prev, double t, double dt,
                                 const NewtonConfig& newton = {}, StepStats* stats = nullptr);

// One predictor-partitioned step: per stage, phase 1 solves every subsystem's
// implicit stage (concurrently for Jacobi kinds when threads > 1, sequentially
// in subsystem order for Gauss-Seidel kinds), then phase 2 evaluates the
// explicit corrections at the completed stage state. kind == exact is routed
// to step_monolithic.
PartitionedState step_partitioned(const CoupledOdeSystem& sys, const ImexTableau& tableau, PredictorKind kind,
                                  const PartitionedState& u_prev, double t, double dt,
                                  const NewtonConfig& newton = {}, StepStats* stats = nullptr,
                                  int threads = 0);

struct Trajectory {
  std::vector<double> times;             // times[0] = t0
  std::vector<PartitionedState> states;  // states[0] = u0
  std::vector<int> newton_iters;         // per completed step
  bool diverged = false;
  int steps() const { return static_cast<int>(times.size()) - 1; }
  const PartitionedState& final_state() const { return states.back(); }
};

struct IntegrateOptions {
  NewtonConfig newton;
  int threads = 0;
  double divergence_threshold = 1e12;
};

// Fixed-step integration over [t0, t1]; (t1-t0)/dt must be an integer to
// rounding error. A state whose inf-norm exceeds the divergence threshold
// halts the run with the diverged flag set and the partial trajectory kept.
Trajectory integrate(const CoupledOdeSystem& sys, const ImexTableau& tableau, PredictorKind kind,
                     const PartitionedState& u0, double t0, double t1, double dt,
                     const IntegrateOptions& opts = {});

}  // namespace mpimex
