#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "radix/analog.hpp"

using namespace radix;

namespace {

const RadixConfig kR5(5);

double rel_err(double got, double want) {
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

}  // namespace

TEST(EncodeInputs, Examples) {
  CircuitParams p;
  const auto v = encode_inputs(Eigen::Vector3i(2, 3, 1), kR5, p);
  EXPECT_DOUBLE_EQ(v[0], 0.2);
  EXPECT_DOUBLE_EQ(v[1], 0.3);
  EXPECT_DOUBLE_EQ(v[2], 0.1);
  EXPECT_TRUE(encode_inputs(Eigen::VectorXi::Zero(6), kR5, p).isZero(0.0));

  EXPECT_DOUBLE_EQ(encode_inputs(Eigen::VectorXi::Constant(1, 4), kR5, p)[0], 0.4);
  p.s = 5.0;
  try {
    encode_inputs(Eigen::VectorXi::Constant(1, 4), kR5, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ReadVoltageExceedsThreshold);
  }
  p.s = 10.0;
  EXPECT_THROW(encode_inputs(Eigen::VectorXi::Constant(1, 5), kR5, p), Error);
  EXPECT_THROW(encode_inputs(Eigen::VectorXi::Constant(1, -1), kR5, p), Error);
}

TEST(EncodeInputs, GuardIsExactlyAtThreshold) {
  // X / s == v_th is rejected, anything below passes.
  CircuitParams p;
  p.s = 8.0;  // 4 / 8 = 0.5 V
  EXPECT_THROW(encode_inputs(Eigen::VectorXi::Constant(1, 4), kR5, p), Error);
  EXPECT_NO_THROW(encode_inputs(Eigen::VectorXi::Constant(1, 3), kR5, p));
  EXPECT_THROW(p.validate(kR5), Error);
  p.s = 8.5;
  EXPECT_NO_THROW(p.validate(kR5));
}

TEST(ColumnCurrents, WorkedColumns) {
  const CircuitParams p;
  const auto prog_b = program_crossbar(Eigen::Vector3i(2, -1, -1), kR5);
  const auto rb = column_currents(prog_b, Eigen::Vector3d(0.2, 0.3, 0.1), p);
  EXPECT_NEAR(rb.i_tot[0], 12e-6, 1e-18);
  EXPECT_NEAR(rb.i_ref, 12e-6, 1e-18);

  const auto prog_d = program_crossbar(Eigen::Vector3i(2, 1, -1), kR5);
  const auto rd = column_currents(prog_d, Eigen::Vector3d(0.1, 0.2, 0.4), p);
  EXPECT_NEAR(rd.i_tot[0], 14e-6, 1e-18);
  EXPECT_NEAR(rd.i_ref, 14e-6, 1e-18);

  const auto zero = column_currents(prog_d, Eigen::Vector3d::Zero(), p);
  EXPECT_EQ(zero.i_tot[0], 0.0);
  EXPECT_EQ(zero.i_ref, 0.0);

  EXPECT_THROW(column_currents(prog_d, Eigen::Vector2d(0.1, 0.1), p), Error);
}

TEST(OutputStage, ReferenceRemovesLevelShift) {
  const CircuitParams p;
  // Two networks with identical outputs {0, 5, 4} on different inputs.
  Eigen::Matrix3i wb, wd;
  wb << 2, 1, 2,
       -1, 1, 0,
       -1, 0, 0;
  wd << 2, 1, 0,
        1, 0, 0,
       -1, 1, 1;
  const auto rb = simulate_mvm(program_crossbar(wb, kR5), Eigen::Vector3i(2, 3, 1), p);
  const auto rd = simulate_mvm(program_crossbar(wd, kR5), Eigen::Vector3i(1, 2, 4), p);
  const double raw_b[] = {12e-6, 17e-6, 16e-6};
  const double raw_d[] = {14e-6, 19e-6, 18e-6};
  const double net[] = {0.0, 5e-6, 4e-6};
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(rb.i_tot[j], raw_b[j], 1e-17);
    EXPECT_NEAR(rd.i_tot[j], raw_d[j], 1e-17);
    EXPECT_NEAR(rb.i_tot[j] - rb.i_ref, net[j], 1e-17);
    EXPECT_NEAR(rd.i_tot[j] - rd.i_ref, net[j], 1e-17);
  }
  EXPECT_EQ(decode_output(rb, p), decode_output(rd, p));
  EXPECT_EQ(decode_output(rb, p), Eigen::Vector3i(0, 5, 4));
}

TEST(OutputStage, StageIdentities) {
  const CircuitParams p;
  AnalogReadout r;
  r.i_tot = Eigen::Vector3d(12e-6, 17e-6, 16e-6);
  r.i_ref = 12e-6;
  r = output_stage(r, p);
  for (int j = 0; j < 3; ++j) {
    EXPECT_DOUBLE_EQ(r.v_inv[j], -10.0 * r.i_tot[j]);
    EXPECT_DOUBLE_EQ(r.v_col[j], r.v_ref - r.v_inv[j]);
  }
  EXPECT_DOUBLE_EQ(r.v_ref, -10.0 * 12e-6);
  EXPECT_EQ(r.v_col[0], 0.0);
}

TEST(SimulateMvm, PulseTrain) {
  const CircuitParams p;
  const auto prog = program_crossbar(Eigen::Vector3i(1, 0, 2), kR5);
  struct Pulse {
    Eigen::Vector3i x;
    int y;
    double v_col;
  };
  const Pulse pulses[] = {{{2, 3, 1}, 4, 40e-6}, {{2, 0, 0}, 2, 20e-6}, {{1, 4, 3}, 7, 70e-6}};
  for (const auto& pulse : pulses) {
    const auto r = simulate_mvm(prog, pulse.x, p);
    EXPECT_LT(rel_err(r.v_col[0], pulse.v_col), 1e-9);
    EXPECT_EQ(decode_output(r, p)[0], pulse.y);
  }
}

TEST(SimulateMvm, ScalingLawAgainstIntegerOracle) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> dim(1, 40);
  for (int trial = 0; trial < 300; ++trial) {
    const RadixConfig cfg(3 + 2 * (trial % 3));
    CircuitParams p;
    p.s = 10.0 * std::ceil(cfg.a_max() / 4.0);  // keep a_max / s below v_th
    const int n = dim(rng), m = dim(rng);
    const auto w = oracle::random_int_matrix(rng, n, m, cfg.w_min(), cfg.w_max());
    const auto x = oracle::random_int_vector(rng, n, 0, cfg.a_max());
    const auto y = oracle::integer_mvm(w, x);
    const auto r = simulate_mvm(program_crossbar(w, cfg), x, p);
    const auto yhat = decode_output(r, p);
    for (int j = 0; j < m; ++j) {
      ASSERT_EQ(yhat[j], y[j]);
      if (y[j] != 0) {
        ASSERT_LT(rel_err(r.v_col[j] / p.gain(), double(y[j])), 1e-9);
      } else {
        ASSERT_LT(std::abs(r.v_col[j]), 1e-12 * p.gain());
      }
    }
  }
}

TEST(SimulateMvm, Superposition) {
  std::mt19937_64 rng(37);
  const CircuitParams p;
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = oracle::random_int_matrix(rng, 16, 8, -2, 2);
    const auto prog = program_crossbar(w, kR5);
    const auto x1 = oracle::random_int_vector(rng, 16, 0, 2);
    const auto x2 = oracle::random_int_vector(rng, 16, 0, 2);
    const Eigen::VectorXi x12 = x1 + x2;
    const auto a = simulate_mvm(prog, x1, p), b = simulate_mvm(prog, x2, p),
               c = simulate_mvm(prog, x12, p);
    EXPECT_TRUE(c.i_tot.isApprox(a.i_tot + b.i_tot, 1e-12));
    EXPECT_NEAR(c.i_ref, a.i_ref + b.i_ref, 1e-12 * c.i_ref + 1e-30);
  }
}

TEST(SimulateMvm, ZeroWeightsGiveZeroOutput) {
  std::mt19937_64 rng(41);
  const CircuitParams p;
  const auto prog = program_crossbar(Eigen::MatrixXi::Zero(20, 6), kR5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = simulate_mvm(prog, oracle::random_int_vector(rng, 20, 0, 4), p);
    EXPECT_LT(r.v_col.cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_TRUE(decode_output(r, p).isZero());
  }
}

TEST(DecodeOutput, Examples) {
  const CircuitParams p;
  AnalogReadout r;
  r.v_col = Eigen::Vector3d(40e-6, 0.0, -20e-6);
  EXPECT_EQ(decode_output(r, p), Eigen::Vector3i(4, 0, -2));
  r.v_col = Eigen::Vector2d(2.5 * p.gain(), 3.5 * p.gain());
  EXPECT_EQ(decode_output(r, p), Eigen::Vector2i(2, 4));  // ties to even
}

TEST(Noise, ZeroSigmaNoisyPathIsBitIdentical) {
  std::mt19937_64 rng(43);
  const CircuitParams p;  // sigma_g = 0
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto w = oracle::random_int_matrix(rng, 12, 5, -2, 2);
    const auto prog = program_crossbar(w, kR5);
    const auto x = oracle::random_int_vector(rng, 12, 0, 4);
    const auto ideal = simulate_mvm(prog, x, p);
    const auto noisy = simulate_mvm(prog, x, p, std::uint64_t(trial));
    ASSERT_EQ(ideal.i_tot, noisy.i_tot);
    ASSERT_EQ(ideal.v_col, noisy.v_col);
    ASSERT_EQ(ideal.i_ref, noisy.i_ref);
    const auto y = oracle::integer_mvm(w, x);
    const auto yhat = decode_output(noisy, p);
    for (int j = 0; j < 5; ++j) mismatches += yhat[j] != y[j];
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(Noise, ErrorRateGrowsWithSigma) {
  const double sigmas[] = {0.0, 0.02, 0.05, 0.1, 0.2};
  double prev = -1.0;
  for (double sigma : sigmas) {
    std::mt19937_64 rng(47);
    CircuitParams p;
    p.dev.sigma_g = sigma;
    long errors = 0, total = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const auto w = oracle::random_int_matrix(rng, 32, 8, -2, 2);
      const auto x = oracle::random_int_vector(rng, 32, 0, 4);
      const auto y = oracle::integer_mvm(w, x);
      const auto yhat = decode_output(simulate_mvm(program_crossbar(w, kR5), x, p, 1000 + trial), p);
      for (int j = 0; j < 8; ++j) errors += yhat[j] != y[j];
      total += 8;
    }
    const double rate = double(errors) / total;
    EXPECT_GE(rate, prev) << "sigma " << sigma;
    prev = rate;
  }
  EXPECT_GT(prev, 0.1);
}

TEST(ReadoutCsv, Format) {
  const CircuitParams p;
  const auto prog = program_crossbar(Eigen::Vector3i(1, 0, 2), kR5);
  const auto r = simulate_mvm(prog, Eigen::Vector3i(2, 3, 1), p);
  std::ostringstream os;
  write_readout_csv(os, r, decode_output(r, p));
  std::istringstream lines(os.str());
  std::string header, col0, ref;
  std::getline(lines, header);
  std::getline(lines, col0);
  std::getline(lines, ref);
  EXPECT_EQ(header, "col,i_tot_A,v_inv_V,v_col_V,y_hat");
  EXPECT_EQ(col0.substr(0, 2), "0,");
  EXPECT_NE(col0.find(",4.000000000e-05,4"), std::string::npos) << col0;
  EXPECT_EQ(ref.substr(0, 4), "ref,");
  EXPECT_EQ(ref.substr(ref.size() - 2), ",,");
}
