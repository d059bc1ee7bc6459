#include "radix/cost.hpp"

#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "radix/error.hpp"

namespace radix {

namespace {

void require_dims(long long n, long long m) {
  if (n <= 0 || m < 0) {
    throw Error(Errc::InvalidArgument, "array needs rows >= 1 and columns >= 0");
  }
}

std::string scheme_label(const ArrayCostReport& r) {
  std::string s = to_string(r.scheme);
  if (r.scheme == CostScheme::RadixReference) return s + " (x=" + std::to_string(r.precision_levels) + ")";
  return s + " (b=" + std::to_string(r.bits) + ")";
}

}  // namespace

const char* to_string(CostScheme scheme) {
  switch (scheme) {
    case CostScheme::RadixReference: return "radix_x_reference";
    case CostScheme::DifferentialPair: return "differential_pair";
    case CostScheme::BinaryEncodedDifferential: return "binary_encoded_differential";
  }
  return "?";
}

ArrayCostReport radix_cost(long long n_rows, long long m_cols, const RadixConfig& cfg,
                           double unit_column_width) {
  require_dims(n_rows, m_cols);
  ArrayCostReport r;
  r.scheme = CostScheme::RadixReference;
  r.columns = m_cols + 1;
  r.devices = n_rows * m_cols * (cfg.x() - 1) + n_rows * cfg.zero_count();
  r.precision_levels = cfg.x();
  r.relative_area = static_cast<double>(r.columns) * unit_column_width;
  return r;
}

ArrayCostReport radix_cost(const CrossbarProgram& program, double unit_column_width) {
  ArrayCostReport r = radix_cost(program.rows(), program.cols(), program.config(), unit_column_width);
  r.devices = program.total_devices();
  return r;
}

ArrayCostReport differential_cost(long long n_rows, long long m_cols, int bits,
                                  double unit_column_width) {
  require_dims(n_rows, m_cols);
  if (bits < 1 || bits > 30) throw Error(Errc::InvalidArgument, "bits must be in [1, 30]");
  ArrayCostReport r;
  r.scheme = bits == 1 ? CostScheme::DifferentialPair : CostScheme::BinaryEncodedDifferential;
  r.bits = bits;
  r.columns = 2LL * bits * m_cols;
  r.devices = n_rows * r.columns;
  r.precision_levels = 1 << bits;
  r.relative_area = static_cast<double>(r.columns) * unit_column_width;
  return r;
}

int equivalent_bits(const RadixConfig& cfg) {
  int b = 1;
  while ((1 << (b + 1)) <= cfg.x()) ++b;
  return b;
}

CostComparison compare_costs(long long n_rows, long long m_cols, const RadixConfig& cfg, int bits) {
  CostComparison c;
  c.rows.push_back(radix_cost(n_rows, m_cols, cfg));
  c.rows.push_back(differential_cost(n_rows, m_cols, 1));
  if (bits != 1) c.rows.push_back(differential_cost(n_rows, m_cols, bits));
  const ArrayCostReport& radix = c.rows.front();
  const ArrayCostReport& binary = c.rows.back();
  c.column_ratio = binary.columns > 0 ? static_cast<double>(radix.columns) / binary.columns
                                      : std::numeric_limits<double>::infinity();
  c.level_gain = static_cast<double>(radix.precision_levels) / binary.precision_levels - 1.0;
  c.level_gain_of_radix =
      static_cast<double>(radix.precision_levels - binary.precision_levels) / radix.precision_levels;
  return c;
}

void write_cost_table(std::ostream& out, const CostComparison& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-34s %8s %10s %7s %14s\n", "scheme", "columns", "devices", "levels",
                "relative_area");
  out << buf;
  for (const ArrayCostReport& r : c.rows) {
    std::snprintf(buf, sizeof buf, "%-34s %8lld %10lld %7d %14.3f\n", scheme_label(r).c_str(), r.columns,
                  r.devices, r.precision_levels, r.relative_area);
    out << buf;
  }
  const ArrayCostReport& radix = c.rows.front();
  const ArrayCostReport& binary = c.rows.back();
  std::snprintf(buf, sizeof buf, "columns: %lld vs %lld (ratio %.3f)\n", radix.columns, binary.columns,
                c.column_ratio);
  out << buf;
  std::snprintf(buf, sizeof buf, "levels: %d vs %d (+%.1f%% over binary, %.1f%% of radix levels)\n",
                radix.precision_levels, binary.precision_levels, 100.0 * c.level_gain,
                100.0 * c.level_gain_of_radix);
  out << buf;
}

void write_cost_csv(std::ostream& out, const std::vector<ArrayCostReport>& rows) {
  out << "scheme,columns,devices,levels,relative_area\n";
  char buf[160];
  for (const ArrayCostReport& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%lld,%lld,%d,%.6g\n", to_string(r.scheme), r.columns, r.devices,
                  r.precision_levels, r.relative_area);
    out << buf;
  }
}

}  // namespace radix
