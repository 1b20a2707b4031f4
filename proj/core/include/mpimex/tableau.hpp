#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mpimex/mat.hpp"

namespace mpimex {

enum class SchemeId { imex1, imex2, imex3, imex4 };

SchemeId scheme_from_string(std::string_view s);
std::string to_string(SchemeId s);

// Paired explicit/implicit Butcher tableaus defining one IMEX scheme.
// a_hat is strictly lower triangular (ERK); a is lower triangular with
// a(0,0) = 0 (ESDIRK: explicit first stage).
struct ImexTableau {
  int stages = 0;
  DenseMatrix a_hat;  // explicit coefficients, stages x stages
  DenseMatrix a;      // implicit coefficients, stages x stages
  std::vector<double> b_hat, b;
  std::vector<double> c_hat, c;
  int order = 0;
  bool stiffly_accurate = false;
  std::string name;
};

ImexTableau builtin_tableau(SchemeId id);

struct ValidationIssue {
  std::string message;
  int i = -1;  // offending row, when applicable
  int j = -1;  // offending column, when applicable
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Structural checks: triangularity, row-sum consistency of the abscissae,
// unit weight sums, and b = last row of a when stiffly_accurate is set.
// Report-only; never throws.
ValidationReport validate_tableau(const ImexTableau& t);

}  // namespace mpimex
