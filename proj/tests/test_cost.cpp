#include <sstream>

#include <gtest/gtest.h>

#include "radix/cost.hpp"
#include "radix/error.hpp"

using namespace radix;

TEST(Cost, RadixFiveVersusTwoBitSingleColumn) {
  const CostComparison c = compare_costs(9, 1, RadixConfig(5), 2);
  ASSERT_EQ(c.rows.size(), 3u);
  EXPECT_EQ(c.rows[0].columns, 2);
  EXPECT_EQ(c.rows[2].columns, 4);
  EXPECT_DOUBLE_EQ(c.column_ratio, 0.5);
  EXPECT_EQ(c.rows[0].precision_levels, 5);
  EXPECT_EQ(c.rows[2].precision_levels, 4);
  EXPECT_DOUBLE_EQ(c.level_gain, 0.25);
  EXPECT_DOUBLE_EQ(c.level_gain_of_radix, 0.20);
  EXPECT_EQ(c.rows[1].scheme, CostScheme::DifferentialPair);
  EXPECT_EQ(c.rows[1].columns, 2);
}

TEST(Cost, WorstCaseAndExactDevices) {
  const ArrayCostReport r = radix_cost(9, 1, RadixConfig(5));
  EXPECT_EQ(r.devices, 9 * 4 + 9 * 2);
  // Sobel kernel: counts 1..4 plus a reference column of 2s.
  Eigen::MatrixXi sobel(9, 1);
  sobel << -1, 0, 1, -2, 0, 2, -1, 0, 1;
  const CrossbarProgram p = program_crossbar(sobel, RadixConfig(5));
  const ArrayCostReport exact = radix_cost(p);
  EXPECT_EQ(exact.devices, 18 + 18);
  EXPECT_EQ(exact.columns, 2);
  EXPECT_LE(exact.devices, r.devices);
}

TEST(Cost, DegenerateZeroColumns) {
  const ArrayCostReport r = radix_cost(4, 0, RadixConfig(5));
  EXPECT_EQ(r.columns, 1);
  EXPECT_EQ(r.devices, 8);
  EXPECT_EQ(differential_cost(4, 0, 2).columns, 0);
  EXPECT_THROW(radix_cost(0, 1, RadixConfig(5)), Error);
  EXPECT_THROW(differential_cost(1, 1, 0), Error);
}

TEST(Cost, ColumnRatioNonIncreasingTowardHalf) {
  double prev = 10.0;
  for (long long m = 1; m <= 4096; m *= 2) {
    const double ratio = compare_costs(16, m, RadixConfig(5), 1).column_ratio;
    EXPECT_LE(ratio, prev);
    EXPECT_GT(ratio, 0.5);
    prev = ratio;
  }
  EXPECT_NEAR(prev, 0.5, 1e-3);
}

TEST(Cost, EquivalentBits) {
  EXPECT_EQ(equivalent_bits(RadixConfig(3)), 1);
  EXPECT_EQ(equivalent_bits(RadixConfig(5)), 2);
  EXPECT_EQ(equivalent_bits(RadixConfig(7)), 2);
  EXPECT_EQ(equivalent_bits(RadixConfig(9)), 3);
}

TEST(Cost, CsvAndTable) {
  const CostComparison c = compare_costs(9, 1, RadixConfig(5), 2);
  std::ostringstream csv;
  write_cost_csv(csv, c.rows);
  EXPECT_EQ(csv.str(),
            "scheme,columns,devices,levels,relative_area\n"
            "radix_x_reference,2,54,5,2\n"
            "differential_pair,2,18,2,2\n"
            "binary_encoded_differential,4,36,4,4\n");
  std::ostringstream table;
  write_cost_table(table, c);
  EXPECT_NE(table.str().find("columns: 2 vs 4 (ratio 0.500)"), std::string::npos);
  EXPECT_NE(table.str().find("+25.0% over binary, 20.0% of radix levels"), std::string::npos);
}
