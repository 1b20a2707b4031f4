#include "mpimex/tableau.hpp"

#include <cmath>

#include "mpimex/errors.hpp"

namespace mpimex {

SchemeId scheme_from_string(std::string_view s) {
  if (s == "imex1") return SchemeId::imex1;
  if (s == "imex2") return SchemeId::imex2;
  if (s == "imex3") return SchemeId::imex3;
  if (s == "imex4") return SchemeId::imex4;
  throw RejectedInput("unknown scheme identifier: " + std::string(s));
}

std::string to_string(SchemeId s) {
  switch (s) {
    case SchemeId::imex1: return "imex1";
    case SchemeId::imex2: return "imex2";
    case SchemeId::imex3: return "imex3";
    case SchemeId::imex4: return "imex4";
  }
  return "?";
}

namespace {

ImexTableau assemble(std::string name, int order, const std::vector<std::vector<double>>& ae,
                     const std::vector<std::vector<double>>& ai, const std::vector<double>& be,
                     const std::vector<double>& bi) {
  ImexTableau t;
  t.name = std::move(name);
  t.order = order;
  t.stages = static_cast<int>(bi.size());
  t.a_hat = DenseMatrix(t.stages, t.stages);
  t.a = DenseMatrix(t.stages, t.stages);
  for (int i = 0; i < t.stages; ++i)
    for (int j = 0; j < t.stages; ++j) {
      t.a_hat(i, j) = ae[i][j];
      t.a(i, j) = ai[i][j];
    }
  t.b_hat = be;
  t.b = bi;
  t.c_hat.assign(t.stages, 0.0);
  t.c.assign(t.stages, 0.0);
  for (int i = 0; i < t.stages; ++i)
    for (int j = 0; j < t.stages; ++j) {
      t.c_hat[i] += ae[i][j];
      t.c[i] += ai[i][j];
    }
  t.stiffly_accurate = true;
  for (int j = 0; j < t.stages; ++j)
    if (std::abs(t.b[j] - t.a(t.stages - 1, j)) > 1e-14) t.stiffly_accurate = false;
  return t;
}

ImexTableau make_imex1() {
  // forward-backward Euler pair
  return assemble("imex1 forward-backward Euler", 1,
                  {{0, 0}, {1, 0}},
                  {{0, 0}, {0, 1}},
                  {1, 0}, {0, 1});
}

ImexTableau make_imex2() {
  // Heun / trapezoidal pair, second order, stiffly accurate
  return assemble("imex2 trapezoidal", 2,
                  {{0, 0}, {1, 0}},
                  {{0, 0}, {0.5, 0.5}},
                  {0.5, 0.5}, {0.5, 0.5});
}

// ARK3(2)4L[2]SA and ARK4(3)6L[2]SA coefficients from Kennedy & Carpenter,
// "Additive Runge-Kutta schemes for convection-diffusion-reaction equations",
// Appl. Numer. Math. 44 (2003). Both parts share the weights b.
ImexTableau make_imex3() {
  const double g = 1767732205903.0 / 4055673282236.0;
  const std::vector<double> b = {1471266399579.0 / 7840856788654.0, -4482444167858.0 / 7529755066697.0,
                                 11266239266428.0 / 11593286722821.0, g};
  return assemble(
      "imex3 ARK3(2)4L[2]SA", 3,
      {{0, 0, 0, 0},
       {1767732205903.0 / 2027836641118.0, 0, 0, 0},
       {5535828885825.0 / 10492691773637.0, 788022342437.0 / 10882634858940.0, 0, 0},
       {6485989280629.0 / 16251701735622.0, -4246266847089.0 / 9704473918619.0,
        10755448449292.0 / 10357097424841.0, 0}},
      {{0, 0, 0, 0},
       {g, g, 0, 0},
       {2746238789719.0 / 10658868560708.0, -640167445237.0 / 6845629431997.0, g, 0},
       {b[0], b[1], b[2], g}},
      b, b);
}

ImexTableau make_imex4() {
  const std::vector<double> b = {82889.0 / 524892.0, 0.0, 15625.0 / 83664.0, 69875.0 / 102672.0,
                                 -2260.0 / 8211.0, 0.25};
  return assemble(
      "imex4 ARK4(3)6L[2]SA", 4,
      {{0, 0, 0, 0, 0, 0},
       {0.5, 0, 0, 0, 0, 0},
       {13861.0 / 62500.0, 6889.0 / 62500.0, 0, 0, 0, 0},
       {-116923316275.0 / 2393684061468.0, -2731218467317.0 / 15368042101831.0,
        9408046702089.0 / 11113171139209.0, 0, 0, 0},
       {-451086348788.0 / 2902428689909.0, -2682348792572.0 / 7519795681897.0,
        12662868775082.0 / 11960479115383.0, 3355817975965.0 / 11060851509271.0, 0, 0},
       {647845179188.0 / 3216320057751.0, 73281519250.0 / 8382639484533.0,
        552539513391.0 / 3454668386233.0, 3354512671639.0 / 8306763924573.0, 4040.0 / 17871.0, 0}},
      {{0, 0, 0, 0, 0, 0},
       {0.25, 0.25, 0, 0, 0, 0},
       {8611.0 / 62500.0, -1743.0 / 31250.0, 0.25, 0, 0, 0},
       {5012029.0 / 34652500.0, -654441.0 / 2922500.0, 174375.0 / 388108.0, 0.25, 0, 0},
       {15267082809.0 / 155376265600.0, -71443401.0 / 120774400.0, 730878875.0 / 902184768.0,
        2285395.0 / 8070912.0, 0.25, 0},
       {b[0], b[1], b[2], b[3], b[4], 0.25}},
      b, b);
}

}  // namespace

ImexTableau builtin_tableau(SchemeId id) {
  switch (id) {
    case SchemeId::imex1: return make_imex1();
    case SchemeId::imex2: return make_imex2();
    case SchemeId::imex3: return make_imex3();
    case SchemeId::imex4: return make_imex4();
  }
  throw RejectedInput("unknown scheme identifier");
}

ValidationReport validate_tableau(const ImexTableau& t) {
  ValidationReport rep;
  const double tol = 1e-12;
  const int s = t.stages;
  auto issue = [&rep](std::string msg, int i = -1, int j = -1) {
    rep.issues.push_back({std::move(msg), i, j});
  };
  if (s <= 0 || t.a.rows != s || t.a.cols != s || t.a_hat.rows != s || t.a_hat.cols != s ||
      static_cast<int>(t.b.size()) != s || static_cast<int>(t.b_hat.size()) != s ||
      static_cast<int>(t.c.size()) != s || static_cast<int>(t.c_hat.size()) != s) {
    issue("inconsistent dimensions");
    return rep;
  }
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j)
      if (t.a_hat(i, j) != 0.0) issue("a_hat not strictly lower triangular", i, j);
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j)
      if (t.a(i, j) != 0.0) issue("a not lower triangular", i, j);
  if (t.a(0, 0) != 0.0) issue("a(1,1) != 0: first stage must be explicit", 0, 0);
  for (int i = 0; i < s; ++i) {
    double se = 0.0, si = 0.0;
    for (int j = 0; j < s; ++j) {
      se += t.a_hat(i, j);
      si += t.a(i, j);
    }
    if (std::abs(se - t.c_hat[i]) > tol) issue("c_hat[i] != row sum of a_hat", i);
    if (std::abs(si - t.c[i]) > tol) issue("c[i] != row sum of a", i);
  }
  double sbe = 0.0, sbi = 0.0;
  for (int j = 0; j < s; ++j) {
    sbe += t.b_hat[j];
    sbi += t.b[j];
  }
  if (std::abs(sbe - 1.0) > tol) issue("sum b_hat != 1");
  if (std::abs(sbi - 1.0) > tol) issue("sum b != 1");
  if (t.stiffly_accurate)
    for (int j = 0; j < s; ++j)
      if (std::abs(t.b[j] - t.a(s - 1, j)) > tol) issue("stiffly_accurate set but b != last row of a", s - 1, j);
  for (int i = 0; i < s; ++i) {
    if (t.c[i] < -tol || t.c[i] > 1.0 + tol) issue("c[i] outside [0,1]", i);
    if (t.c_hat[i] < -tol || t.c_hat[i] > 1.0 + tol) issue("c_hat[i] outside [0,1]", i);
  }
  return rep;
}

}  // namespace mpimex
