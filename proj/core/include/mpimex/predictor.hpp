#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mpimex/system.hpp"
#include "mpimex/tableau.hpp"

namespace mpimex {

// Which predictor maps stage data and previous-step data to the predicted
// coupling term. Weak kinds are constant in the subsystem's own state; Jacobi
// kinds are constant in every other subsystem's state; Gauss-Seidel kinds see
// the already-solved stage prefix.
enum class PredictorKind { weak_jacobi, strong_jacobi, weak_gs, strong_gs, stage_variant, exact };

PredictorKind predictor_from_string(std::string_view s);
std::string to_string(PredictorKind k);

bool is_strong(PredictorKind k);
bool is_gauss_seidel(PredictorKind k);

// Data available to a predictor at one stage: the previous accepted solution,
// the current stage approximations with a validity mask (which subsystems have
// completed their implicit solve at this stage), and, for the stage-variant
// predictor, the true couplings recorded at earlier stages of this step.
struct PredictorContext {
  const PartitionedState* u_prev = nullptr;
  const PartitionedState* u_stage = nullptr;
  std::vector<char> valid;  // per subsystem; Gauss-Seidel sweeps keep a prefix valid
  const std::vector<Vector>* stage_coupling_history = nullptr;
};

// Predicted coupling c~^i for subsystem i. For strong kinds u_stage->part(i)
// is the live unknown of the ongoing implicit solve. stage_variant is not
// dispatched here; it has its own entry point below.
Vector predict(PredictorKind kind, int i, const PredictorContext& ctx, const CoupledOdeSystem& sys,
               double t);

// Stage-variant predictor of the fluid-structure literature: a weighted
// combination of the true first-subsystem couplings recorded at stages
// 0..j-1, with weights (a_hat[j][k] - a[j][k]) / a[j][j]. j is the zero-based
// stage index and must be >= 1 (the first stage is explicit).
Vector stage_variant_predict(int j, const ImexTableau& tableau, const std::vector<Vector>& history);

// True when, for every subsystem i >= 2 (one-based), the coupling evaluated
// with the already-solved stage prefix 1..i-1 and previous-step data for the
// rest reproduces the true coupling at the full stage state to 1e-14. When
// this holds, a single predictor for subsystem 1 decouples the whole system.
bool strong_gs_exactness_check(const CoupledOdeSystem& sys, const PredictorContext& ctx, double t);
bool strong_gs_exactness_check(const CoupledOdeSystem& sys, const PredictorContext& ctx, double t, int i);

}  // namespace mpimex
