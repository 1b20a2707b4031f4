#include "mpimex/predictor.hpp"

#include <cmath>

#include "mpimex/errors.hpp"

namespace mpimex {

PredictorKind predictor_from_string(std::string_view s) {
  if (s == "weak-jacobi") return PredictorKind::weak_jacobi;
  if (s == "strong-jacobi") return PredictorKind::strong_jacobi;
  if (s == "weak-gs") return PredictorKind::weak_gs;
  if (s == "strong-gs") return PredictorKind::strong_gs;
  if (s == "stage-variant") return PredictorKind::stage_variant;
  if (s == "exact") return PredictorKind::exact;
  throw RejectedInput("unknown predictor kind: " + std::string(s));
}

std::string to_string(PredictorKind k) {
  switch (k) {
    case PredictorKind::weak_jacobi: return "weak-jacobi";
    case PredictorKind::strong_jacobi: return "strong-jacobi";
    case PredictorKind::weak_gs: return "weak-gs";
    case PredictorKind::strong_gs: return "strong-gs";
    case PredictorKind::stage_variant: return "stage-variant";
    case PredictorKind::exact: return "exact";
  }
  return "?";
}

bool is_strong(PredictorKind k) {
  return k == PredictorKind::strong_jacobi || k == PredictorKind::strong_gs || k == PredictorKind::exact;
}

bool is_gauss_seidel(PredictorKind k) {
  return k == PredictorKind::weak_gs || k == PredictorKind::strong_gs || k == PredictorKind::stage_variant;
}

namespace {

void check_ctx(const PredictorContext& ctx, const CoupledOdeSystem& sys) {
  if (!ctx.u_prev || !ctx.u_stage) throw ContractViolation("predict: context missing states");
  if (ctx.u_prev->dims() != sys.dims() || ctx.u_stage->dims() != sys.dims())
    throw RejectedInput("predict: context states do not match system");
}

void require_prefix(const PredictorContext& ctx, int i) {
  for (int q = 0; q < i; ++q)
    if (static_cast<int>(ctx.valid.size()) <= q || !ctx.valid[q])
      throw ContractViolation("predict: Gauss-Seidel prefix 1.." + std::to_string(i) +
                              " not valid at subsystem " + std::to_string(q + 1));
}

}  // namespace

Vector predict(PredictorKind kind, int i, const PredictorContext& ctx, const CoupledOdeSystem& sys,
               double t) {
  check_ctx(ctx, sys);
  const int m = sys.count();
  if (i < 0 || i >= m) throw RejectedInput("predict: subsystem index out of range");
  if (kind == PredictorKind::stage_variant)
    throw ContractViolation("stage-variant predictor is stage-dependent; use stage_variant_predict");

  PartitionedState arg = *ctx.u_prev;
  switch (kind) {
    case PredictorKind::weak_jacobi:
      break;
    case PredictorKind::strong_jacobi:
      arg.set_part(i, ctx.u_stage->part(i));
      break;
    case PredictorKind::weak_gs:
      require_prefix(ctx, i);
      for (int q = 0; q < i; ++q) arg.set_part(q, ctx.u_stage->part(q));
      break;
    case PredictorKind::strong_gs:
      require_prefix(ctx, i);
      for (int q = 0; q <= i; ++q) arg.set_part(q, ctx.u_stage->part(q));
      break;
    case PredictorKind::exact:
      arg = *ctx.u_stage;
      break;
    default:
      break;
  }
  return sys.coupling(i, arg, t);
}

Vector stage_variant_predict(int j, const ImexTableau& tableau, const std::vector<Vector>& history) {
  if (j < 1) throw ContractViolation("stage_variant_predict: first stage is explicit, no predictor");
  if (static_cast<int>(history.size()) < j)
    throw ContractViolation("stage_variant_predict: history incomplete for stage " + std::to_string(j));
  const double diag = tableau.a(j, j);
  if (diag == 0.0) throw ContractViolation("stage_variant_predict: zero implicit diagonal");
  Vector out(history[0].size(), 0.0);
  for (int k = 0; k < j; ++k) {
    const double w = (tableau.a_hat(j, k) - tableau.a(j, k)) / diag;
    axpy(w, history[k], out);
  }
  return out;
}

bool strong_gs_exactness_check(const CoupledOdeSystem& sys, const PredictorContext& ctx, double t, int i) {
  check_ctx(ctx, sys);
  if (i < 1) throw RejectedInput("strong_gs_exactness_check: index must be >= 2 (one-based)");
  // Exactness of the single-predictor reduction requires c^i to ignore every
  // state from subsystem i onward, so the solved prefix alone reproduces it.
  PartitionedState arg = *ctx.u_prev;
  for (int q = 0; q < i; ++q) arg.set_part(q, ctx.u_stage->part(q));
  Vector predicted = sys.coupling(i, arg, t);
  Vector truth = sys.coupling(i, *ctx.u_stage, t);
  double scale = 1.0 + norm_inf(truth);
  for (size_t k = 0; k < truth.size(); ++k)
    if (std::abs(predicted[k] - truth[k]) > 1e-14 * scale) return false;
  return true;
}

bool strong_gs_exactness_check(const CoupledOdeSystem& sys, const PredictorContext& ctx, double t) {
  for (int i = 1; i < sys.count(); ++i)
    if (!strong_gs_exactness_check(sys, ctx, t, i)) return false;
  return true;
}

}  // namespace mpimex
