#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace rqmc {

enum class RowKind { Raw, Hist, Summary };

/// One row of the experiment CSV. Empty optionals are written as empty fields.
struct CsvRow {
  std::string scrambler;
  std::string integrand;
  std::uint32_t base = 2;
  std::optional<std::size_t> m;
  std::optional<std::size_t> N;
  std::size_t r = 1;
  std::uint64_t seed = 0;
  std::string rep;  // repetition or bin index; statistic name on summary rows
  std::optional<double> value;
  std::optional<double> rescaled;
  RowKind kind = RowKind::Raw;
};

/// Writes the header on construction, then one line per row.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out);

  void write(const CsvRow& row);

  static const char* header();

 private:
  std::ostream& out_;
};

/// %.17g, enough to round-trip any double.
std::string format_double(double v);

}  // namespace rqmc
