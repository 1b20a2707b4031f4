#include "mpimex/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "mpimex/errors.hpp"
#include "mpimex/parallel.hpp"

namespace mpimex {

StageWorkspace::StageWorkspace(const CoupledOdeSystem& sys_, const ImexTableau& tableau_,
                               const PartitionedState& u_prev_, double t_, double dt_)
    : sys(sys_), tableau(tableau_), u_prev(u_prev_), t(t_), dt(dt_), u_stage(sys_.dims()) {
  if (u_prev.dims() != sys.dims()) throw RejectedInput("step: state dimensions do not match system");
  if (!(dt > 0.0)) throw RejectedInput("step: dt must be positive");
  k_impl.assign(tableau.stages, sys.zero_state());
  k_expl.assign(tableau.stages, sys.zero_state());
  valid.assign(sys.count(), 0);
  mass_cache_.resize(sys.count());
}

Vector StageWorkspace::stage_base(int i, int j) const {
  Vector x = u_prev.part_copy(i);
  for (int q = 0; q < j; ++q) {
    axpy(tableau.a_hat(j, q), k_expl[q].part(i), x);
    axpy(tableau.a(j, q), k_impl[q].part(i), x);
  }
  return x;
}

const DenseMatrix& StageWorkspace::mass_dense(int i) {
  if (!mass_cache_[i]) {
    const int n = sys.subsystems[i].dim;
    DenseMatrix m(n, n);
    Vector e(n, 0.0);
    for (int j = 0; j < n; ++j) {
      e[j] = 1.0;
      Vector col = sys.subsystems[i].apply_mass(e);
      e[j] = 0.0;
      for (int r = 0; r < n; ++r) m(r, j) = col[r];
    }
    mass_cache_[i] = std::move(m);
  }
  return *mass_cache_[i];
}

namespace {

double fd_step(double u) {
  static const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  return sqrt_eps * (1.0 + std::abs(u));
}

// Colored central-difference probe of g into the band of `out`.
void banded_fd(const std::function<Vector(const Vector&)>& g, const Vector& u, BandedMatrix& out) {
  const int n = static_cast<int>(u.size());
  const int bw = out.bandwidth();
  const int ncolors = std::min(n, 2 * bw + 1);
  Vector up = u, um = u;
  for (int color = 0; color < ncolors; ++color) {
    for (int j = color; j < n; j += ncolors) {
      const double h = fd_step(u[j]);
      up[j] = u[j] + h;
      um[j] = u[j] - h;
    }
    Vector gp = g(up);
    Vector gm = g(um);
    for (int j = color; j < n; j += ncolors) {
      const double h = fd_step(u[j]);
      up[j] = u[j];
      um[j] = u[j];
      const int lo = std::max(0, j - bw);
      const int hi = std::min(n - 1, j + bw);
      for (int i = lo; i <= hi; ++i) out.at(i, j) = (gp[i] - gm[i]) / (2.0 * h);
    }
  }
}

// Banded mass probe: colored application of the mass action to sums of basis
// vectors (exact for a linear operator confined to the band).
void banded_mass(const Subsystem& sub, BandedMatrix& out) {
  const int n = sub.dim;
  const int bw = out.bandwidth();
  const int ncolors = std::min(n, 2 * bw + 1);
  Vector e(n, 0.0);
  for (int color = 0; color < ncolors; ++color) {
    for (int j = color; j < n; j += ncolors) e[j] = 1.0;
    Vector col = sub.apply_mass(e);
    for (int j = color; j < n; j += ncolors) {
      e[j] = 0.0;
      const int lo = std::max(0, j - bw);
      const int hi = std::min(n - 1, j + bw);
      for (int i = lo; i <= hi; ++i) out.at(i, j) = col[i];
    }
  }
}

struct NewtonScratch {
  std::optional<BandedMatrix> mass_band;
};

// Newton solve of F(k) = M k - dt r(base + a_jj k, cpred(.), t) = 0 for one
// subsystem. `prediction` must re-evaluate the predicted coupling at the
// current live stage state for strong kinds and may return a cached value for
// weak kinds. Throws NewtonFailure on stagnation.
Vector newton_stage_solve(int i, int j, StageWorkspace& ws, bool strong, const NewtonConfig& cfg,
                          const std::function<Vector()>& prediction,
                          const std::function<DenseMatrix()>& coupling_self_jac,
                          const std::function<PartitionedState()>& arg_state, int* iters_out,
                          NewtonScratch& scratch) {
  const Subsystem& sub = ws.sys.subsystems[i];
  const double ajj = ws.tableau.a(j, j);
  const double tj = ws.implicit_stage_time(j);
  const double dt = ws.dt;
  const Vector base = ws.stage_base(i, j);
  const int n = sub.dim;

  Vector k(n, 0.0);
  Vector x = base;

  auto set_live = [&](const Vector& kk) {
    x = base;
    axpy(ajj, kk, x);
    ws.u_stage.set_part(i, x);
  };
  auto residual = [&](const Vector& kk, Vector* c_out) -> Vector {
    set_live(kk);
    Vector c = prediction();
    Vector r = sub.velocity(x, c, tj);
    Vector f = sub.apply_mass(kk);
    axpy(-dt, r, f);
    if (c_out) *c_out = std::move(c);
    return f;
  };

  Vector cpred;
  Vector f = residual(k, &cpred);
  const double f0 = norm_inf(f);
  double fn = f0;
  int iters = 0;
  const bool banded = sub.bandwidth >= 0;

  while (fn > cfg.rel_tol * f0 + cfg.abs_tol) {
    if (iters >= cfg.max_iter)
      throw NewtonFailure("Newton stagnated: subsystem " + std::to_string(i + 1) + ", stage " +
                              std::to_string(j + 1) + ", residual " + std::to_string(fn),
                          i, j, fn);
    if (banded) {
      BandedMatrix jac(n, sub.bandwidth);
      const bool filled =
          ws.sys.stage_jacobian_band && ws.sys.stage_jacobian_band(i, arg_state(), cpred, tj, strong, jac);
      if (!filled) {
        banded_fd(
            [&](const Vector& u) {
              ws.u_stage.set_part(i, u);
              Vector c = strong ? prediction() : cpred;
              return sub.velocity(u, c, tj);
            },
            x, jac);
        ws.u_stage.set_part(i, x);
      }
      jac.scale(-dt * ajj);
      if (!scratch.mass_band) {
        BandedMatrix mb(n, sub.bandwidth);
        banded_mass(sub, mb);
        scratch.mass_band = std::move(mb);
      }
      jac.add_scaled(*scratch.mass_band, 1.0);
      jac.factor();
      Vector step = f;
      jac.solve_in_place(step);
      axpy(-1.0, step, k);
    } else {
      DenseMatrix jg;
      if (sub.jac_velocity_u) {
        jg = sub.jac_velocity_u(x, cpred, tj);
      } else {
        jg = fd_jacobian([&](const Vector& u) { return sub.velocity(u, cpred, tj); }, x);
      }
      if (strong) {
        DenseMatrix jc = sub.jac_velocity_c
                             ? sub.jac_velocity_c(x, cpred, tj)
                             : fd_jacobian([&](const Vector& c) { return sub.velocity(x, c, tj); }, cpred);
        DenseMatrix dc = coupling_self_jac();
        DenseMatrix prod = jc * dc;
        for (int r = 0; r < n; ++r)
          for (int cidx = 0; cidx < n; ++cidx) jg(r, cidx) += prod(r, cidx);
      }
      DenseMatrix jac = ws.mass_dense(i);
      for (int r = 0; r < n; ++r)
        for (int cidx = 0; cidx < n; ++cidx) jac(r, cidx) -= dt * ajj * jg(r, cidx);
      Vector step = lu_solve(jac, f);
      axpy(-1.0, step, k);
    }
    ++iters;
    f = residual(k, &cpred);
    fn = norm_inf(f);
    if (!std::isfinite(fn))
      throw NewtonFailure("Newton produced non-finite residual: subsystem " + std::to_string(i + 1) +
                              ", stage " + std::to_string(j + 1),
                          i, j, fn);
  }
  set_live(k);
  if (iters_out) *iters_out = iters;
  return k;
}

}  // namespace

Vector solve_implicit_stage(int i, int j, PredictorKind kind, StageWorkspace& ws, const NewtonConfig& newton,
                            int* iters_out) {
  const CoupledOdeSystem& sys = ws.sys;
  const Subsystem& sub = sys.subsystems[i];
  const double ajj = ws.tableau.a(j, j);
  const double tj = ws.implicit_stage_time(j);
  if (kind == PredictorKind::exact)
    throw ContractViolation("solve_implicit_stage: exact predictor is handled by step_monolithic");

  PredictorContext ctx;
  ctx.u_prev = &ws.u_prev;
  ctx.u_stage = &ws.u_stage;
  // Jacobi solves may run concurrently; they never consult the mask, so only
  // the sequential Gauss-Seidel path snapshots it.
  if (is_gauss_seidel(kind)) ctx.valid = ws.valid;

  const bool variant_weak = (kind == PredictorKind::stage_variant && i == 0);
  const PredictorKind eff =
      (kind == PredictorKind::stage_variant && i > 0) ? PredictorKind::strong_gs : kind;
  const bool strong = !variant_weak && is_strong(eff);

  auto prediction = [&]() -> Vector {
    if (variant_weak) {
      if (j == 0) return sys.coupling(0, ws.u_prev, tj);
      return stage_variant_predict(j, ws.tableau, ws.coupling_history);
    }
    return predict(eff, i, ctx, sys, tj);
  };
  auto arg_state = [&]() -> PartitionedState {
    // predictor argument: previous-step data, the solved Gauss-Seidel prefix,
    // and the live stage unknown in slot i
    PartitionedState arg = ws.u_prev;
    if (is_gauss_seidel(eff))
      for (int q = 0; q < i; ++q) arg.set_part(q, ws.u_stage.part(q));
    arg.set_part(i, ws.u_stage.part(i));
    return arg;
  };
  auto coupling_self_jac = [&]() -> DenseMatrix {
    PartitionedState arg = arg_state();
    if (sys.jac_coupling) return sys.jac_coupling(i, i, arg, tj);
    Vector ui = arg.part_copy(i);
    return fd_jacobian(
        [&](const Vector& u) {
          arg.set_part(i, u);
          return sys.coupling(i, arg, tj);
        },
        ui);
  };

  Vector k;
  int iters = 0;
  if (ajj == 0.0) {
    Vector base = ws.stage_base(i, j);
    ws.u_stage.set_part(i, base);
    Vector c = prediction();
    Vector r = sub.velocity(base, c, tj);
    k = sub.solve_mass(r);
    for (double& v : k) v *= ws.dt;
  } else {
    NewtonScratch scratch;
    k = newton_stage_solve(i, j, ws, strong, newton, prediction, coupling_self_jac, arg_state, &iters,
                           scratch);
  }
  ws.k_impl[j].set_part(i, k);
  ws.valid[i] = 1;
  if (iters_out) *iters_out = iters;
  return k;
}

void complete_stage_explicit(int j, PredictorKind kind, StageWorkspace& ws, StepStats* stats) {
  const CoupledOdeSystem& sys = ws.sys;
  const double te = ws.explicit_stage_time(j);
  PredictorContext ctx;
  ctx.u_prev = &ws.u_prev;
  ctx.u_stage = &ws.u_stage;
  ctx.valid = ws.valid;
  for (int i = 0; i < sys.count(); ++i) {
    const Subsystem& sub = sys.subsystems[i];
    Vector c_true = sys.coupling(i, ws.u_stage, te);
    Vector c_pred;
    if (kind == PredictorKind::stage_variant && i == 0) {
      c_pred = (j == 0) ? sys.coupling(0, ws.u_prev, te)
                        : stage_variant_predict(j, ws.tableau, ws.coupling_history);
    } else if (kind == PredictorKind::exact) {
      c_pred = sys.coupling(i, ws.u_stage, te);
    } else {
      const PredictorKind eff =
          (kind == PredictorKind::stage_variant) ? PredictorKind::strong_gs : kind;
      c_pred = predict(eff, i, ctx, sys, te);
    }
    Vector x = ws.u_stage.part_copy(i);
    Vector f = sub.velocity(x, c_true, te);
    Vector f2 = sub.velocity(x, c_pred, te);
    axpy(-1.0, f2, f);
    Vector ke = sub.solve_mass(f);
    for (double& v : ke) v *= ws.dt;
    if (stats) stats->explicit_norm_max = std::max(stats->explicit_norm_max, norm_inf(ke));
    ws.k_expl[j].set_part(i, ke);
  }
  ws.u_stages.push_back(ws.u_stage);
  ws.coupling_history.push_back(sys.coupling(0, ws.u_stage, ws.implicit_stage_time(j)));
}

namespace {

PartitionedState combine_step(const StageWorkspace& ws) {
  PartitionedState u = ws.u_prev;
  for (int q = 0; q < ws.tableau.stages; ++q) {
    axpy(ws.tableau.b_hat[q], ws.k_expl[q].flat(), u.flat());
    axpy(ws.tableau.b[q], ws.k_impl[q].flat(), u.flat());
  }
  return u;
}

}  // namespace

PartitionedState step_partitioned(const CoupledOdeSystem& sys, const ImexTableau& tableau, PredictorKind kind,
                                  const PartitionedState& u_prev, double t, double dt,
                                  const NewtonConfig& newton, StepStats* stats, int threads) {
  if (kind == PredictorKind::exact) return step_monolithic(sys, tableau, u_prev, t, dt, newton, stats);
  StageWorkspace ws(sys, tableau, u_prev, t, dt);
  const int m = sys.count();
  const bool jacobi = !is_gauss_seidel(kind);
  std::vector<int> iters(m, 0);
  for (int j = 0; j < tableau.stages; ++j) {
    std::fill(ws.valid.begin(), ws.valid.end(), 0);
    if (jacobi) {
      parallel_for(m, threads, [&](int i) { solve_implicit_stage(i, j, kind, ws, newton, &iters[i]); });
    } else {
      for (int i = 0; i < m; ++i) solve_implicit_stage(i, j, kind, ws, newton, &iters[i]);
    }
    if (stats) {
      for (int i = 0; i < m; ++i) {
        stats->newton_iters_total += iters[i];
        stats->newton_iters_max = std::max(stats->newton_iters_max, iters[i]);
      }
    }
    complete_stage_explicit(j, kind, ws, stats);
  }
  return combine_step(ws);
}

PartitionedState step_monolithic(const CoupledOdeSystem& sys, const ImexTableau& tableau,
                                 const PartitionedState& u_prev, double t, double dt,
                                 const NewtonConfig& newton, StepStats* stats) {
  StageWorkspace ws(sys, tableau, u_prev, t, dt);
  const int m = sys.count();
  const int ntot = sys.total_dim();

  bool analytic = static_cast<bool>(sys.jac_coupling);
  for (const auto& sub : sys.subsystems)
    if (!sub.jac_velocity_u || !sub.jac_velocity_c) analytic = false;

  auto apply_mass_all = [&](const PartitionedState& v) {
    PartitionedState out(sys.dims());
    for (int i = 0; i < m; ++i) out.set_part(i, sys.subsystems[i].apply_mass(v.part(i)));
    return out;
  };
  auto total_mass_dense = [&]() {
    DenseMatrix mm(ntot, ntot);
    int off = 0;
    for (int i = 0; i < m; ++i) {
      const DenseMatrix& mi = ws.mass_dense(i);
      for (int r = 0; r < mi.rows; ++r)
        for (int c = 0; c < mi.cols; ++c) mm(off + r, off + c) = mi(r, c);
      off += mi.rows;
    }
    return mm;
  };

  for (int j = 0; j < tableau.stages; ++j) {
    const double ajj = tableau.a(j, j);
    const double tj = ws.implicit_stage_time(j);
    PartitionedState base(sys.dims());
    for (int i = 0; i < m; ++i) base.set_part(i, ws.stage_base(i, j));

    if (ajj == 0.0) {
      PartitionedState r = monolithic_velocity(sys, base, tj);
      for (int i = 0; i < m; ++i) {
        Vector ki = sys.subsystems[i].solve_mass(r.part(i));
        for (double& v : ki) v *= dt;
        ws.k_impl[j].set_part(i, ki);
      }
      ws.u_stage = base;
    } else {
      PartitionedState k(sys.dims());
      auto residual = [&](const PartitionedState& kk) {
        PartitionedState x = base;
        axpy(ajj, kk.flat(), x.flat());
        ws.u_stage = x;
        PartitionedState r = monolithic_velocity(sys, x, tj);
        PartitionedState f = apply_mass_all(kk);
        axpy(-dt, r.flat(), f.flat());
        return f;
      };
      PartitionedState f = residual(k);
      const double f0 = f.norm_inf();
      double fn = f0;
      int iters = 0;
      while (fn > newton.rel_tol * f0 + newton.abs_tol) {
        if (iters >= newton.max_iter)
          throw NewtonFailure("monolithic Newton stagnated at stage " + std::to_string(j + 1), -1, j, fn);
        DenseMatrix dg(ntot, ntot);
        if (analytic) {
          const auto& x = ws.u_stage;
          std::vector<int> off(m + 1, 0);
          for (int i = 0; i < m; ++i) off[i + 1] = off[i] + sys.subsystems[i].dim;
          for (int i = 0; i < m; ++i) {
            Vector c = sys.coupling(i, x, tj);
            DenseMatrix ju = sys.subsystems[i].jac_velocity_u(x.part(i), c, tj);
            for (int r = 0; r < ju.rows; ++r)
              for (int cc = 0; cc < ju.cols; ++cc) dg(off[i] + r, off[i] + cc) += ju(r, cc);
            DenseMatrix jc = sys.subsystems[i].jac_velocity_c(x.part(i), c, tj);
            for (int q = 0; q < m; ++q) {
              DenseMatrix dcq = sys.jac_coupling(i, q, x, tj);
              DenseMatrix prod = jc * dcq;
              for (int r = 0; r < prod.rows; ++r)
                for (int cc = 0; cc < prod.cols; ++cc) dg(off[i] + r, off[q] + cc) += prod(r, cc);
            }
          }
        } else {
          const PartitionedState x = ws.u_stage;
          dg = fd_jacobian(
              [&](const Vector& v) {
                PartitionedState s(sys.dims(), v);
                return monolithic_velocity(sys, s, tj).flat();
              },
              x.flat());
        }
        DenseMatrix jac = total_mass_dense();
        for (int r = 0; r < ntot; ++r)
          for (int c = 0; c < ntot; ++c) jac(r, c) -= dt * ajj * dg(r, c);
        Vector step = lu_solve(jac, f.flat());
        axpy(-1.0, step, k.flat());
        ++iters;
        f = residual(k);
        fn = f.norm_inf();
        if (!std::isfinite(fn))
          throw NewtonFailure("monolithic Newton produced non-finite residual", -1, j, fn);
      }
      if (stats) {
        stats->newton_iters_total += iters;
        stats->newton_iters_max = std::max(stats->newton_iters_max, iters);
      }
      ws.k_impl[j] = k;
      PartitionedState x = base;
      axpy(ajj, k.flat(), x.flat());
      ws.u_stage = x;
    }
    std::fill(ws.valid.begin(), ws.valid.end(), 1);
    complete_stage_explicit(j, PredictorKind::exact, ws, stats);
  }
  return combine_step(ws);
}

Trajectory integrate(const CoupledOdeSystem& sys, const ImexTableau& tableau, PredictorKind kind,
                     const PartitionedState& u0, double t0, double t1, double dt,
                     const IntegrateOptions& opts) {
  if (!(dt > 0.0)) throw RejectedInput("integrate: dt must be positive");
  if (t1 < t0) throw RejectedInput("integrate: t1 < t0");
  const double x = (t1 - t0) / dt;
  const long long n = std::llround(x);
  if (std::abs(x - static_cast<double>(n)) >
      4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
    throw RejectedInput("integrate: (t1-t0)/dt is not an integer; partial final steps are not taken");

  Trajectory traj;
  traj.times.push_back(t0);
  traj.states.push_back(u0);
  PartitionedState u = u0;
  for (long long step = 0; step < n; ++step) {
    const double t = t0 + static_cast<double>(step) * dt;
    StepStats stats;
    try {
      u = step_partitioned(sys, tableau, kind, u, t, dt, opts.newton, &stats, opts.threads);
    } catch (const NewtonFailure& e) {
      throw StepFailure("step " + std::to_string(step + 1) + " failed: " + e.what(),
                        static_cast<int>(step), e.subsystem, e.stage, e.residual);
    }
    traj.times.push_back(t0 + static_cast<double>(step + 1) * dt);
    traj.states.push_back(u);
    traj.newton_iters.push_back(stats.newton_iters_total);
    const double nrm = u.norm_inf();
    if (!std::isfinite(nrm) || nrm > opts.divergence_threshold) {
      traj.diverged = true;
      break;
    }
  }
  return traj;
}

}  // namespace mpimex
