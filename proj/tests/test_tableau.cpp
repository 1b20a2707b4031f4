#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mpimex/errors.hpp"
#include "mpimex/tableau.hpp"

using namespace mpimex;

TEST_CASE("imex1 is the forward-backward Euler pair") {
  ImexTableau t = builtin_tableau(SchemeId::imex1);
  REQUIRE(t.stages == 2);
  CHECK(t.a_hat(1, 0) == 1.0);
  CHECK(t.a_hat(0, 0) == 0.0);
  CHECK(t.b_hat[0] == 1.0);
  CHECK(t.b_hat[1] == 0.0);
  CHECK(t.a(0, 0) == 0.0);
  CHECK(t.a(1, 0) == 0.0);
  CHECK(t.a(1, 1) == 1.0);
  CHECK(t.b[0] == 0.0);
  CHECK(t.b[1] == 1.0);
  CHECK(t.order == 1);
}

TEST_CASE("imex3 and imex4 implicit diagonals") {
  CHECK(builtin_tableau(SchemeId::imex3).a(1, 1) == doctest::Approx(0.4358665216).epsilon(1e-10));
  CHECK(builtin_tableau(SchemeId::imex4).a(1, 1) == 0.25);
}

TEST_CASE("every builtin passes validation") {
  for (SchemeId id : {SchemeId::imex1, SchemeId::imex2, SchemeId::imex3, SchemeId::imex4}) {
    ImexTableau t = builtin_tableau(id);
    ValidationReport rep = validate_tableau(t);
    for (const auto& issue : rep.issues) MESSAGE(to_string(id), ": ", issue.message);
    CHECK(rep.ok());
    CHECK(t.stiffly_accurate);
  }
}

TEST_CASE("injected weight defect is reported with the right message") {
  ImexTableau t = builtin_tableau(SchemeId::imex1);
  t.b = {0.0, 0.5};
  ValidationReport rep = validate_tableau(t);
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (const auto& issue : rep.issues)
    if (issue.message.find("sum b != 1") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("imex4 stiff accuracy holds against the raw coefficients") {
  ImexTableau t = builtin_tableau(SchemeId::imex4);
  for (int j = 0; j < t.stages; ++j) CHECK(std::abs(t.b[j] - t.a(t.stages - 1, j)) < 1e-12);
}

TEST_CASE("imex2/3/4 share quadrature weights between parts") {
  for (SchemeId id : {SchemeId::imex2, SchemeId::imex3, SchemeId::imex4}) {
    ImexTableau t = builtin_tableau(id);
    for (int j = 0; j < t.stages; ++j) CHECK(std::abs(t.b_hat[j] - t.b[j]) < 1e-12);
  }
}

TEST_CASE("scalar order conditions hold to design order for imex1 and imex2") {
  for (SchemeId id : {SchemeId::imex1, SchemeId::imex2}) {
    ImexTableau t = builtin_tableau(id);
    for (int q = 1; q <= t.order; ++q) {
      double se = 0.0, si = 0.0;
      for (int j = 0; j < t.stages; ++j) {
        se += t.b_hat[j] * std::pow(t.c_hat[j], q - 1);
        si += t.b[j] * std::pow(t.c[j], q - 1);
      }
      CHECK(std::abs(se - 1.0 / q) < 1e-12);
      CHECK(std::abs(si - 1.0 / q) < 1e-12);
    }
  }
}

TEST_CASE("unknown scheme identifiers are rejected") {
  CHECK_THROWS_AS(scheme_from_string("imex5"), RejectedInput);
}
