#include "mpimex/stability.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "mpimex/errors.hpp"
#include "mpimex/parallel.hpp"
#include "mpimex/problems/model2.hpp"

namespace mpimex {

DenseMatrix probe_update_matrix(const CoupledOdeSystem& sys, const ImexTableau& tableau, PredictorKind kind,
                                double dt, const NewtonConfig& newton) {
  const int n = sys.total_dim();
  if (n > 64) throw RejectedInput("probe_update_matrix: system too large for dense probing");

  // homogeneity: r(0, c(0,t), t) = 0
  PartitionedState zero(sys.dims());
  PartitionedState r0 = monolithic_velocity(sys, zero, 0.0);
  if (r0.norm_inf() > 1e-14)
    throw ContractViolation("probe_update_matrix: system is not linear homogeneous (r(0) != 0)");

  auto one_step = [&](const Vector& v) {
    PartitionedState u(sys.dims(), v);
    return step_partitioned(sys, tableau, kind, u, 0.0, dt, newton).flat();
  };

  DenseMatrix c(n, n);
  Vector e(n, 0.0);
  for (int k = 0; k < n; ++k) {
    e[k] = 1.0;
    Vector col = one_step(e);
    e[k] = 0.0;
    for (int i = 0; i < n; ++i) c(i, k) = col[i];
  }

  // linearity: step(2u) = 2 step(u) on a deterministic probe vector
  Vector u(n);
  for (int i = 0; i < n; ++i) u[i] = 0.5 + 0.25 * std::cos(1.0 + i);
  Vector su = one_step(u);
  Vector u2 = u;
  for (double& x : u2) x *= 2.0;
  Vector su2 = one_step(u2);
  double dev = 0.0, scale = 1.0;
  for (int i = 0; i < n; ++i) {
    dev = std::max(dev, std::abs(su2[i] - 2.0 * su[i]));
    scale = std::max(scale, std::abs(su2[i]));
  }
  if (dev > 1e-10 * scale)
    throw ContractViolation("probe_update_matrix: step map is not linear (step(2u) != 2 step(u))");
  return c;
}

StabilityReport stability_report(const CoupledOdeSystem& sys, const ImexTableau& tableau, PredictorKind kind,
                                 double dt, const NewtonConfig& newton) {
  StabilityReport rep;
  rep.update_matrix = probe_update_matrix(sys, tableau, kind, dt, newton);
  rep.eigenvalues = eigenvalues(rep.update_matrix);
  rep.rho = 0.0;
  for (const auto& z : rep.eigenvalues) rep.rho = std::max(rep.rho, std::abs(z));
  rep.stable = rep.rho <= 1.0 + 1e-12;
  int near_unit = 0;
  for (size_t a = 0; a < rep.eigenvalues.size(); ++a) {
    if (std::abs(std::abs(rep.eigenvalues[a]) - 1.0) > 1e-9) continue;
    for (size_t b = a + 1; b < rep.eigenvalues.size(); ++b)
      if (std::abs(rep.eigenvalues[a] - rep.eigenvalues[b]) < 1e-6) ++near_unit;
  }
  rep.unit_modulus_cluster_warning = near_unit > 0;
  return rep;
}

Complex nonunit_eigenvalue(const DenseMatrix& c2x2) {
  if (c2x2.rows != 2 || c2x2.cols != 2) throw RejectedInput("nonunit_eigenvalue: expected a 2x2 matrix");
  auto ev = eigenvalues(c2x2);
  return std::abs(ev[0] - 1.0) >= std::abs(ev[1] - 1.0) ? ev[0] : ev[1];
}

namespace {
void require_nonzero(double d, const char* what) {
  if (d == 0.0 || !std::isfinite(1.0 / d)) throw SingularParameter(std::string("zero denominator in ") + what);
}
}  // namespace

double closed_form_factor_imex1(PredictorKind kind, double dt, double l1, double l2, double alpha) {
  switch (kind) {
    case PredictorKind::weak_jacobi: {
      const double den = (1.0 - (1.0 - alpha) * dt * l2) * (1.0 - (1.0 - alpha) * dt * l1);
      require_nonzero(den, "weak Jacobi factor");
      return ((1.0 + alpha * dt * l1) * (1.0 + alpha * dt * l2) - dt * dt * l1 * l2) / den;
    }
    case PredictorKind::strong_jacobi: {
      const double den = (1.0 - dt * l1) * (1.0 - dt * l2);
      require_nonzero(den, "strong Jacobi factor");
      return (1.0 - dt * dt * l1 * l2) / den;
    }
    case PredictorKind::weak_gs: {
      const double den = (1.0 - (1.0 - alpha) * dt * l1) * (1.0 - (1.0 - alpha) * dt * l2);
      require_nonzero(den, "weak Gauss-Seidel factor");
      return ((1.0 + alpha * dt * l1) * (1.0 + alpha * dt * l2)) / den;
    }
    case PredictorKind::strong_gs: {
      const double den = (1.0 - dt * l1) * (1.0 - dt * l2);
      require_nonzero(den, "strong Gauss-Seidel factor");
      return 1.0 / den;
    }
    default:
      throw RejectedInput("closed_form_factor_imex1: no closed form for this predictor kind");
  }
}

double closed_form_factor_imex2_strong_gs(double dt, double l1, double l2) {
  const double d1 = 1.0 - 0.5 * dt * l1;
  const double d2 = 1.0 - 0.5 * dt * l2;
  require_nonzero(d1 * d2, "trapezoidal strong Gauss-Seidel factor");
  return (1.0 + 0.5 * dt * l1) / d1 * ((1.0 + 0.5 * dt * l2) / d2);
}

namespace {

// Numerator coefficient tables of the strong Gauss-Seidel amplification
// factor for the 4-stage third-order and 6-stage fourth-order pairs. Entries
// (2,2) of the third-order table and (1,1) of the fourth-order table are
// re-derived from update-matrix traces to full precision; the stability tests
// cross-check every entry against the numeric probe.
DenseMatrix make_p3() {
  DenseMatrix p(4, 4);
  const double t[4][4] = {
      {1.0, -0.307599564300000, -0.237660691030414, 0.0},
      {-0.307599564300000, 0.0946174918786356, 0.0731043252393467, 0.0},
      {-0.237660691030414, 0.0731043252393467, 0.108276773257432, -0.0138993203184737},
      {0.0, 0.0, -0.0138993202982233, 0.00685679356380471}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) p(i, j) = t[i][j];
  return p;
}

DenseMatrix make_p4() {
  DenseMatrix p(6, 6);
  const double t[6][6] = {
      {1.0, -0.25, -0.125, 0.0104166666865151, 0.00911458332517619, 0.0},
      {-0.25, 0.0625, 0.03125, -0.00260416668514596, -0.00407734171291718, 0.0},
      {-0.125, 0.03125, 0.015625, 0.00606937261393480, -0.00389797283406001, 1.71399137262393e-4},
      {0.0104166666865151, -0.00260416668792851, 0.00606937262572686, -0.00535453941337523,
       0.00164424787309041, -8.30991742855789e-5},
      {0.00911458332517619, -0.00407734171177262, -0.00389797283635686, 0.00164424787343589,
       -8.99044034172063e-5, 7.55399650866135e-6},
      {0.0, 0.0, 1.71399137131092e-4, -8.30991742950535e-5, 7.55399650329534e-6, 9.53674314457072e-7}};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) p(i, j) = t[i][j];
  return p;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

const DenseMatrix& ark_p_table(int order) {
  static const DenseMatrix p3 = make_p3();
  static const DenseMatrix p4 = make_p4();
  if (order == 3) return p3;
  if (order == 4) return p4;
  throw RejectedInput("ark_p_table: order must be 3 or 4");
}

double ark_q_coefficient(int order, int i, int j) {
  const double a = (order == 3) ? 0.4358665216 : 0.25;
  const int d = (order == 3) ? 3 : 5;
  if (order != 3 && order != 4) throw RejectedInput("ark_q_coefficient: order must be 3 or 4");
  if (i < 0 || j < 0 || i > d || j > d) return 0.0;
  return binom(d, i) * binom(d, j) * std::pow(-a, i) * std::pow(-a, j);
}

double ark_ratio(int order, double x1, double x2) {
  const DenseMatrix& p = ark_p_table(order);
  const double a = (order == 3) ? 0.4358665216 : 0.25;
  const int d = (order == 3) ? 3 : 5;
  const double q = std::pow(1.0 - a * x1, d) * std::pow(1.0 - a * x2, d);
  require_nonzero(q, "ark_ratio denominator");
  double num = 0.0;
  double xi = 1.0;
  for (int i = 0; i < p.rows; ++i) {
    double xj = 1.0;
    for (int j = 0; j < p.cols; ++j) {
      num += p(i, j) * xi * xj;
      xj *= x2;
    }
    xi *= x1;
  }
  return std::abs(num / q);
}

double reduced_decoupled_factor(double dt, double l1, double l2) {
  const double den = 1.0 - dt * l1;
  require_nonzero(den, "reduced decoupled factor");
  return std::abs((1.0 + dt * l2) / den);
}

std::vector<StabilityScanRow> scan_stability(SchemeId scheme, PredictorKind kind,
                                             const std::vector<double>& dts,
                                             const std::vector<double>& lambda1s,
                                             const std::vector<double>& lambda2s,
                                             const std::vector<double>& alphas, int threads) {
  const ImexTableau tableau = builtin_tableau(scheme);
  const size_t total = dts.size() * lambda1s.size() * lambda2s.size() * alphas.size();
  std::vector<StabilityScanRow> rows(total);
  auto point = [&](int idx) {
    size_t rem = idx;
    const size_t na = alphas.size(), n2 = lambda2s.size(), n1 = lambda1s.size();
    const double alpha = alphas[rem % na];
    rem /= na;
    const double l2 = lambda2s[rem % n2];
    rem /= n2;
    const double l1 = lambda1s[rem % n1];
    rem /= n1;
    const double dt = dts[rem];
    StabilityScanRow& row = rows[idx];
    row.dt = dt;
    row.lambda1 = l1;
    row.lambda2 = l2;
    row.alpha = alpha;
    try {
      Model2Problem prob{l1, l2, alpha};
      StabilityReport rep = stability_report(prob.system(), tableau, kind, dt);
      row.rho = rep.rho;
      row.stable = rep.stable;
    } catch (const Error& e) {
      row.rho = std::numeric_limits<double>::quiet_NaN();
      row.stable = false;
      row.error = e.what();
    }
  };
  parallel_for(static_cast<int>(total), threads, point);
  return rows;
}

DenseMatrix random_diag_dominant_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> uni01(0.0, 1.0);
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) a(i, j) = uni(rng);
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += std::abs(a(i, j));
    a(i, i) = -(off + uni01(rng));
  }
  return a;
}

CoupledOdeSystem coupled_system_from_matrix(const DenseMatrix& a) {
  if (a.rows != a.cols) throw RejectedInput("coupled_system_from_matrix: matrix not square");
  const int n = a.rows;
  CoupledOdeSystem sys;
  sys.name = "matrix" + std::to_string(n);
  sys.structure = CouplingStructure::full;
  auto mat = std::make_shared<DenseMatrix>(a);
  for (int i = 0; i < n; ++i) {
    Subsystem s;
    s.dim = 1;
    s.cdim = 1;
    s.name = "row" + std::to_string(i + 1);
    const double aii = a(i, i);
    s.velocity = [aii](std::span<const double> u, std::span<const double> c, double) {
      return Vector{aii * u[0] + c[0]};
    };
    s.jac_velocity_u = [aii](std::span<const double>, std::span<const double>, double) {
      DenseMatrix j(1, 1);
      j(0, 0) = aii;
      return j;
    };
    s.jac_velocity_c = [](std::span<const double>, std::span<const double>, double) {
      DenseMatrix j(1, 1);
      j(0, 0) = 1.0;
      return j;
    };
    sys.subsystems.push_back(std::move(s));
  }
  sys.coupling = [mat, n](int i, const PartitionedState& u, double) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) s += (*mat)(i, j) * u.part(j)[0];
    return Vector{s};
  };
  sys.jac_coupling = [mat](int i, int j, const PartitionedState&, double) {
    DenseMatrix d(1, 1);
    d(0, 0) = (i == j) ? 0.0 : (*mat)(i, j);
    return d;
  };
  return sys;
}

DiagDominantSummary diag_dominant_theorem_check(int n, int count, const std::vector<double>& dts,
                                                std::uint64_t seed) {
  if (n > 16) throw RejectedInput("diag_dominant_theorem_check: n must be <= 16");
  DiagDominantSummary summary;
  const ImexTableau tab1 = builtin_tableau(SchemeId::imex1);
  for (int inst = 0; inst < count; ++inst) {
    DenseMatrix a = random_diag_dominant_matrix(n, seed + static_cast<std::uint64_t>(inst));
    CoupledOdeSystem sys = coupled_system_from_matrix(a);
    for (double dt : dts) {
      for (PredictorKind kind : {PredictorKind::weak_jacobi, PredictorKind::strong_jacobi,
                                 PredictorKind::weak_gs, PredictorKind::strong_gs}) {
        DiagDominantRow row;
        row.n = n;
        row.instance = inst;
        row.dt = dt;
        row.kind = kind;
        row.rho = spectral_radius(probe_update_matrix(sys, tab1, kind, dt));
        row.pass = row.rho <= 1.0 + 1e-10;
        summary.max_rho = std::max(summary.max_rho, row.rho);
        if (!row.pass) ++summary.failures;
        summary.rows.push_back(row);
      }
    }
  }
  return summary;
}

}  // namespace mpimex
