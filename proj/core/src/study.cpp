#include "mpimex/study.hpp"

#include <cmath>

#include "mpimex/errors.hpp"
#include "mpimex/parallel.hpp"

namespace mpimex {

double ConvergenceResult::terminal_slope() const {
  return rows.empty() ? std::numeric_limits<double>::quiet_NaN() : rows.back().slope;
}

double state_error(const ProblemInstance& prob, const PartitionedState& u, const PartitionedState& ref) {
  if (prob.error_subsystem >= 0) {
    auto a = u.part(prob.error_subsystem);
    auto b = ref.part(prob.error_subsystem);
    double e = 0.0;
    for (size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
    return e;
  }
  double e = 0.0;
  for (size_t k = 0; k < u.flat().size(); ++k) e = std::max(e, std::abs(u.flat()[k] - ref.flat()[k]));
  return e;
}

ConvergenceResult convergence_study(const ProblemInstance& prob, const ConvergenceConfig& cfg) {
  if (cfg.dts.empty()) throw RejectedInput("convergence_study: empty dt list");
  for (size_t k = 1; k < cfg.dts.size(); ++k)
    if (!(cfg.dts[k] < cfg.dts[k - 1]))
      throw RejectedInput("convergence_study: dt list must be strictly decreasing");

  ConvergenceResult res;
  const ImexTableau tableau = builtin_tableau(cfg.scheme);

  // Reference: exact when available and no explicit self-reference requested.
  if (prob.exact && cfg.ref_dt == 0.0) {
    Vector ue = prob.exact(prob.t1);
    res.reference = PartitionedState(prob.sys.dims(), std::move(ue));
  } else {
    double rdt = cfg.ref_dt;
    if (rdt == 0.0) rdt = prob.default_reference_dt != 0.0 ? prob.default_reference_dt : cfg.dts.back() / 8.0;
    Trajectory ref = integrate(prob.sys, builtin_tableau(cfg.ref_scheme), cfg.ref_kind, prob.u0, prob.t0,
                               prob.t1, rdt, {cfg.newton, 0, 1e12});
    if (ref.diverged) throw NumericFailure("convergence_study: reference run diverged");
    res.reference = ref.final_state();
  }

  const int nd = static_cast<int>(cfg.dts.size());
  res.rows.resize(nd);
  res.finals.resize(nd);
  parallel_for(nd, cfg.threads, [&](int k) {
    ConvergenceRow& row = res.rows[k];
    row.dt = cfg.dts[k];
    Trajectory traj =
        integrate(prob.sys, tableau, cfg.kind, prob.u0, prob.t0, prob.t1, cfg.dts[k], {cfg.newton, 0, 1e12});
    if (traj.diverged) {
      row.diverged = true;
      row.error = std::numeric_limits<double>::infinity();
    } else {
      res.finals[k] = traj.final_state();
      row.error = state_error(prob, *res.finals[k], *res.reference);
    }
  });
  for (int k = 1; k < nd; ++k) {
    const double e0 = res.rows[k - 1].error, e1 = res.rows[k].error;
    if (std::isfinite(e0) && std::isfinite(e1) && e0 > 0.0 && e1 > 0.0)
      res.rows[k].slope = std::log(e0 / e1) / std::log(cfg.dts[k - 1] / cfg.dts[k]);
  }
  return res;
}

}  // namespace mpimex
