#pragma once

#include <iosfwd>
#include <vector>

#include "radix/config.hpp"
#include "radix/crossbar.hpp"

namespace radix {

enum class CostScheme { RadixReference, DifferentialPair, BinaryEncodedDifferential };

const char* to_string(CostScheme scheme);

/// Physical cost of mapping an n x m weight matrix onto one array.
/// relative_area is columns times unit_column_width; peripheral circuits are
/// not counted.
struct ArrayCostReport {
  CostScheme scheme = CostScheme::RadixReference;
  long long columns = 0;
  long long devices = 0;
  int precision_levels = 0;
  double relative_area = 0.0;
  int bits = 0;  ///< bit-planes for the differential schemes, 0 for radix
};

/// m signal columns plus one shared reference column. Without a program the
/// device count is the worst case n*m*(x-1) + n*|w_min|; with one it is exact.
ArrayCostReport radix_cost(long long n_rows, long long m_cols, const RadixConfig& cfg,
                           double unit_column_width = 1.0);
ArrayCostReport radix_cost(const CrossbarProgram& program, double unit_column_width = 1.0);

/// Differential pairs per bit-plane: 2*b*m columns, one device per junction,
/// 2^b levels. bits = 1 is the plain differential pair.
ArrayCostReport differential_cost(long long n_rows, long long m_cols, int bits,
                                  double unit_column_width = 1.0);

/// Largest b with 2^b <= x: the binary weight width a radix-x array replaces.
int equivalent_bits(const RadixConfig& cfg);

struct CostComparison {
  std::vector<ArrayCostReport> rows;  ///< radix, differential pair, b-bit encoded
  double column_ratio = 0.0;          ///< radix columns / b-bit columns
  double level_gain = 0.0;            ///< x / 2^b - 1
  double level_gain_of_radix = 0.0;   ///< (x - 2^b) / x
};

CostComparison compare_costs(long long n_rows, long long m_cols, const RadixConfig& cfg, int bits);

/// Aligned plain-text table followed by the ratio lines.
void write_cost_table(std::ostream& out, const CostComparison& c);

/// "scheme,columns,devices,levels,relative_area"
void write_cost_csv(std::ostream& out, const std::vector<ArrayCostReport>& rows);

}  // namespace radix
