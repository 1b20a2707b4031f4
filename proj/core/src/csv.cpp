#include "mpimex/csv.hpp"

#include <cmath>
#include <cstdio>

namespace mpimex {

std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) os_ << ',';
    os_ << cols[i];
  }
  os_ << '\n';
}

void CsvWriter::sep() {
  if (!first_) os_ << ',';
  first_ = false;
}

CsvWriter& CsvWriter::field(double v) {
  sep();
  os_ << format_g17(v);
  return *this;
}

CsvWriter& CsvWriter::field(const std::string& v) {
  sep();
  os_ << v;
  return *this;
}

CsvWriter& CsvWriter::field(long long v) {
  sep();
  os_ << v;
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  first_ = true;
}

}  // namespace mpimex
