#include "rqmc/csv.hpp"

#include <cstdio>

namespace rqmc {

namespace {

const char* kind_name(RowKind kind) {
  switch (kind) {
    case RowKind::Raw: return "raw";
    case RowKind::Hist: return "hist";
    case RowKind::Summary: return "summary";
  }
  return "raw";
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* CsvWriter::header() { return "scrambler,integrand,base,m,N,r,seed,rep,value,rescaled,kind"; }

CsvWriter::CsvWriter(std::ostream& out) : out_(out) { out_ << header() << '\n'; }

void CsvWriter::write(const CsvRow& row) {
  out_ << row.scrambler << ',' << row.integrand << ',' << row.base << ',';
  if (row.m) out_ << *row.m;
  out_ << ',';
  if (row.N) out_ << *row.N;
  out_ << ',' << row.r << ',' << row.seed << ',' << row.rep << ',';
  if (row.value) out_ << format_double(*row.value);
  out_ << ',';
  if (row.rescaled) out_ << format_double(*row.rescaled);
  out_ << ',' << kind_name(row.kind) << '\n';
}

}  // namespace rqmc
