#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mpimex {

// "%.17g" formatting; round-trips doubles exactly and keeps CSV output
// byte-stable across runs.
std::string format_g17(double v);

// Comma-separated, '.' decimal, LF line endings, one header row.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void header(const std::vector<std::string>& cols);
  CsvWriter& field(double v);
  CsvWriter& field(const std::string& v);
  CsvWriter& field(const char* v) { return field(std::string(v)); }
  CsvWriter& field(long long v);
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(bool v) { return field(std::string(v ? "true" : "false")); }
  void end_row();

 private:
  std::ostream& os_;
  bool first_ = true;
  void sep();
};

}  // namespace mpimex
