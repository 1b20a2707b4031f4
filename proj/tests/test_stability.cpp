#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mpimex/errors.hpp"
#include "mpimex/problems/model2.hpp"
#include "mpimex/stability.hpp"

using namespace mpimex;

namespace {

CoupledOdeSystem scalar_decay(double lambda) {
  CoupledOdeSystem sys;
  Subsystem s;
  s.dim = 1;
  s.cdim = 1;
  const double l = lambda;
  s.velocity = [l](std::span<const double> u, std::span<const double> c, double) {
    return Vector{l * u[0] + c[0]};
  };
  sys.subsystems.push_back(std::move(s));
  sys.coupling = [](int, const PartitionedState&, double) { return Vector{0.0}; };
  return sys;
}

constexpr PredictorKind kFourKinds[] = {PredictorKind::weak_jacobi, PredictorKind::strong_jacobi,
                                        PredictorKind::weak_gs, PredictorKind::strong_gs};

}  // namespace

TEST_CASE("probe tends to the identity as dt -> 0") {
  Model2Problem prob{-1.0, -2.0, 0.4};
  auto sys = prob.system();
  const double dt = 1e-3;
  DenseMatrix c = probe_update_matrix(sys, builtin_tableau(SchemeId::imex2), PredictorKind::weak_jacobi, dt);
  DenseMatrix diff = c;
  for (int i = 0; i < 2; ++i) diff(i, i) -= 1.0;
  CHECK(norm_inf(diff) < 5.0 * dt);
  CHECK(norm_inf(diff) > 0.1 * dt);
}

TEST_CASE("uncoupled scalar reduces to backward Euler for every kind") {
  auto sys = scalar_decay(-2.0);
  const double dt = 0.7;
  for (PredictorKind kind : kFourKinds) {
    DenseMatrix c = probe_update_matrix(sys, builtin_tableau(SchemeId::imex1), kind, dt);
    CHECK(c(0, 0) == doctest::Approx(1.0 / (1.0 + 2.0 * dt)).epsilon(1e-13));
  }
}

TEST_CASE("probe rejects nonlinear systems") {
  CoupledOdeSystem sys;
  Subsystem s;
  s.dim = 1;
  s.cdim = 1;
  s.velocity = [](std::span<const double> u, std::span<const double> c, double) {
    return Vector{-u[0] * u[0] + c[0]};
  };
  sys.subsystems.push_back(std::move(s));
  sys.coupling = [](int, const PartitionedState&, double) { return Vector{0.0}; };
  CHECK_THROWS_AS(probe_update_matrix(sys, builtin_tableau(SchemeId::imex1), PredictorKind::weak_jacobi, 0.5),
                  ContractViolation);
}

TEST_CASE("closed-form first-order factors at the tabulated spot checks") {
  CHECK(closed_form_factor_imex1(PredictorKind::strong_gs, 1.0, -1.0, -1.0, 0.0) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(closed_form_factor_imex1(PredictorKind::weak_jacobi, 1.0, -1.0, -1.0, 0.0) ==
        doctest::Approx(0.0).epsilon(1e-15));
  for (PredictorKind kind : kFourKinds)
    CHECK(closed_form_factor_imex1(kind, 1e-9, -1.0, -2.0, 0.7) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(closed_form_factor_imex1(PredictorKind::weak_jacobi, 1.0, 1.0, -1.0, 0.0),
                  SingularParameter);
}

TEST_CASE("probed imex1 eigenvalues are {1, closed-form factor}") {
  Model2Problem prob{-3.0, -0.5, 0.8};
  DenseMatrix c =
      probe_update_matrix(prob.system(), builtin_tableau(SchemeId::imex1), PredictorKind::weak_jacobi, 0.4);
  auto ev = eigenvalues(c);
  Complex mu = nonunit_eigenvalue(c);
  bool has_unit = std::abs(ev[0] - 1.0) < 1e-10 || std::abs(ev[1] - 1.0) < 1e-10;
  CHECK(has_unit);
  const double want = closed_form_factor_imex1(PredictorKind::weak_jacobi, 0.4, -3.0, -0.5, 0.8);
  CHECK(std::abs(mu) == doctest::Approx(std::abs(want)).epsilon(1e-10));
}

TEST_CASE("closed-form and probed factors agree for all four kinds on random tuples") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> udt(0.01, 10.0), ul(-10.0, -0.01), ua(-2.0, 2.0);
  const ImexTableau tab = builtin_tableau(SchemeId::imex1);
  for (int trial = 0; trial < 100; ++trial) {
    const double dt = udt(rng), l1 = ul(rng), l2 = ul(rng), al = ua(rng);
    Model2Problem prob{l1, l2, al};
    auto sys = prob.system();
    for (PredictorKind kind : kFourKinds) {
      Complex mu = nonunit_eigenvalue(probe_update_matrix(sys, tab, kind, dt));
      const double want = closed_form_factor_imex1(kind, dt, l1, l2, al);
      CHECK(std::abs(std::abs(mu) - std::abs(want)) <= 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("every probed model-problem update matrix keeps the unit eigenvalue") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> udt(0.05, 5.0), ul(-6.0, -0.05), ua(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    Model2Problem prob{ul(rng), ul(rng), ua(rng)};
    auto sys = prob.system();
    for (SchemeId id : {SchemeId::imex1, SchemeId::imex2, SchemeId::imex3, SchemeId::imex4})
      for (PredictorKind kind : kFourKinds) {
        auto ev = eigenvalues(probe_update_matrix(sys, builtin_tableau(id), kind, udt(rng)));
        const double closest = std::min(std::abs(ev[0] - 1.0), std::abs(ev[1] - 1.0));
        CHECK(closest < 1e-9);
      }
  }
}

TEST_CASE("trapezoidal strong Gauss-Seidel closed form") {
  CHECK(closed_form_factor_imex2_strong_gs(1.0, -2.0, -2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(closed_form_factor_imex2_strong_gs(1e-9, -1.0, -2.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(closed_form_factor_imex2_strong_gs(1.0, -1.0, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(closed_form_factor_imex2_strong_gs(1.0, 2.0, -1.0), SingularParameter);

  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> udt(0.01, 10.0), ul(-10.0, -0.01), ua(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double dt = udt(rng), l1 = ul(rng), l2 = ul(rng);
    Model2Problem prob{l1, l2, ua(rng)};
    Complex mu = nonunit_eigenvalue(
        probe_update_matrix(prob.system(), builtin_tableau(SchemeId::imex2), PredictorKind::strong_gs, dt));
    CHECK(std::abs(mu) ==
          doctest::Approx(std::abs(closed_form_factor_imex2_strong_gs(dt, l1, l2))).epsilon(1e-9));
  }
}

TEST_CASE("amplification ratio tables: unit value at the origin, probe agreement, poles") {
  CHECK(ark_ratio(3, 0.0, 0.0) == 1.0);
  CHECK(ark_ratio(4, 0.0, 0.0) == 1.0);
  CHECK_THROWS_AS(ark_ratio(3, 1.0 / 0.4358665216, -1.0), SingularParameter);

  Model2Problem prob{-1.0, -1.0, 0.3};
  Complex mu = nonunit_eigenvalue(
      probe_update_matrix(prob.system(), builtin_tableau(SchemeId::imex3), PredictorKind::strong_gs, 1.0));
  CHECK(std::abs(std::abs(mu) - ark_ratio(3, -1.0, -1.0)) < 1e-6);
}

TEST_CASE("numerator coefficients are dominated by the binomial weights of q") {
  for (int order : {3, 4}) {
    const DenseMatrix& p = ark_p_table(order);
    for (int i = 0; i < p.rows; ++i)
      for (int j = 0; j < p.cols; ++j) {
        const double bound = ((i + j) % 2 == 0 ? 1.0 : -1.0) * ark_q_coefficient(order, i, j);
        CHECK(std::abs(p(i, j)) <= bound + 1e-15);
      }
  }
}

TEST_CASE("the reduced single-equation analysis can flag stable configurations as unstable") {
  CHECK(reduced_decoupled_factor(1.0, -1.0, -1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(reduced_decoupled_factor(1e-9, -1.0, -2.0) == doctest::Approx(1.0).epsilon(1e-6));
  const double reduced = reduced_decoupled_factor(1.0, -0.1, -3.0);
  CHECK(reduced == doctest::Approx(2.0 / 1.1).epsilon(1e-12));
  CHECK(reduced > 1.0);
  const double full = closed_form_factor_imex1(PredictorKind::strong_gs, 1.0, -0.1, -3.0, 0.0);
  CHECK(full < 1.0);
  CHECK_THROWS_AS(reduced_decoupled_factor(1.0, 1.0, -1.0), SingularParameter);
}

TEST_CASE("scan: strong Gauss-Seidel is unconditionally stable on the sampled grid") {
  std::vector<double> dts;
  for (int k = 0; k <= 9; ++k) dts.push_back(std::pow(10.0, -3.0 + k));
  for (SchemeId id : {SchemeId::imex1, SchemeId::imex2, SchemeId::imex3, SchemeId::imex4}) {
    auto rows = scan_stability(id, PredictorKind::strong_gs, dts, {-1.0}, {-1.0}, {-2.0, 0.0, 1.0, 10.0});
    for (const auto& r : rows) {
      CHECK(r.error.empty());
      CHECK(r.rho <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("scan: weak Jacobi loses stability for positive alpha, keeps it for negative") {
  std::vector<double> dts;
  for (int k = 0; k <= 8; ++k) dts.push_back(std::pow(10.0, -2.0 + k));
  auto bad = scan_stability(SchemeId::imex1, PredictorKind::weak_jacobi, dts, {-1.0}, {-1.0}, {0.5});
  int unstable = 0;
  for (const auto& r : bad)
    if (r.rho > 1.0 + 1e-12) ++unstable;
  CHECK(unstable > 0);
  auto good = scan_stability(SchemeId::imex1, PredictorKind::weak_jacobi, dts, {-1.0}, {-1.0}, {-0.5});
  for (const auto& r : good) CHECK(r.rho <= 1.0 + 1e-9);
}

TEST_CASE("scan: weak Gauss-Seidel is stable at alpha = 0.4 across steps") {
  std::vector<double> dts;
  for (int k = 0; k <= 8; ++k) dts.push_back(std::pow(10.0, -2.0 + k));
  auto rows = scan_stability(SchemeId::imex1, PredictorKind::weak_gs, dts, {-1.0}, {-1.0}, {0.4});
  for (const auto& r : rows) CHECK(r.rho <= 1.0 + 1e-9);
}

TEST_CASE("scan rows keep lexicographic grid order and record per-point errors") {
  auto rows = scan_stability(SchemeId::imex1, PredictorKind::weak_jacobi, {0.5, 1.0}, {-1.0, -2.0}, {-1.0},
                             {0.0, 1.0});
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].dt == 0.5);
  CHECK(rows[0].lambda1 == -1.0);
  CHECK(rows[0].alpha == 0.0);
  CHECK(rows[1].alpha == 1.0);
  CHECK(rows[2].lambda1 == -2.0);
  CHECK(rows[4].dt == 1.0);
}

TEST_CASE("uniform decay matrix probes to the scaled identity") {
  DenseMatrix a(3, 3);
  for (int i = 0; i < 3; ++i) a(i, i) = -1.0;
  auto sys = coupled_system_from_matrix(a);
  const double dt = 0.8;
  DenseMatrix c = probe_update_matrix(sys, builtin_tableau(SchemeId::imex1), PredictorKind::weak_jacobi, dt);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(c(i, j) == doctest::Approx(i == j ? 1.0 / (1.0 + dt) : 0.0).epsilon(1e-13));
}

TEST_CASE("diagonally dominant theorem holds on random instances") {
  DiagDominantSummary s = diag_dominant_theorem_check(4, 10, {0.1, 1.0, 10.0, 1000.0}, 2024);
  CHECK(s.failures == 0);
  CHECK(s.max_rho <= 1.0 + 1e-10);
}

TEST_CASE("a non-dominant matrix escapes the theorem's guarantee") {
  DenseMatrix a(2, 2);
  a(0, 0) = -0.1;
  a(0, 1) = 3.0;
  a(1, 0) = 3.0;
  a(1, 1) = -0.1;
  bool dominant = true;
  for (int i = 0; i < 2; ++i) {
    double off = 0.0;
    for (int j = 0; j < 2; ++j)
      if (j != i) off += std::abs(a(i, j));
    if (!(a(i, i) < 0.0 && std::abs(a(i, i)) >= off)) dominant = false;
  }
  CHECK_FALSE(dominant);
  auto sys = coupled_system_from_matrix(a);
  const double rho = spectral_radius(
      probe_update_matrix(sys, builtin_tableau(SchemeId::imex1), PredictorKind::weak_jacobi, 10.0));
  CHECK(rho > 1.0);
}

TEST_CASE("generated diagonally dominant matrices satisfy the hypotheses") {
  for (int seed = 0; seed < 5; ++seed) {
    DenseMatrix a = random_diag_dominant_matrix(6, seed);
    for (int i = 0; i < 6; ++i) {
      double off = 0.0;
      for (int j = 0; j < 6; ++j)
        if (j != i) off += std::abs(a(i, j));
      CHECK(a(i, i) < 0.0);
      CHECK(std::abs(a(i, i)) >= off);
    }
  }
}
