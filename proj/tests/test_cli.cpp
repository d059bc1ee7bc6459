#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>

#include "radix/cli.hpp"
#include "radix/conv.hpp"
#include "radix/image.hpp"
#include "radix/tensor.hpp"

using namespace radix;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "radixsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("radix_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Worked example: one column with weights (1, 0, 2) read by three pulses.
  void write_pulse_fixture() {
    Eigen::MatrixXi w(3, 1);
    w << 1, 0, 2;
    Eigen::MatrixXi x(3, 3);
    x << 2, 3, 1, 2, 0, 0, 1, 4, 3;
    save_rxt(path("w.rxt"), IntTensor::from_matrix(w));
    save_rxt(path("x.rxt"), IntTensor::from_matrix(x));
  }

  fs::path dir_;
};

const std::string kData = RADIX_DATA_DIR;

}  // namespace

TEST_F(CliTest, QuantizeSobelIsFixedPoint) {
  Eigen::Matrix3d k;
  k << 1, 2, 1, 0, 0, 0, -1, -2, -1;
  save_rxt(path("sobel.rxt"), RealTensor::from_matrix(k));
  const CliRun r = run({"quantize", "--in", path("sobel.rxt"), "--radix", "5", "--out", path("q.rxt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "level,count\n-2,1\n-1,2\n0,3\n1,2\n2,1\n");
  const AnyTensor q = load_rxt(path("q.rxt"));
  EXPECT_TRUE(std::get<IntTensor>(q) == static_cast<const IntTensor&>(sobel_kernel()));
}

TEST_F(CliTest, QuantizeErrors) {
  save_rxt(path("c.rxt"), RealTensor::from_matrix(Eigen::Matrix2d::Constant(0.3)));
  CliRun r = run({"quantize", "--in", path("c.rxt"), "--out", path("q.rxt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("constant tensor"), std::string::npos);

  r = run({"quantize", "--in", path("missing.rxt"), "--out", path("q.rxt")});
  EXPECT_EQ(r.code, 1);

  std::ofstream(path("junk.rxt")) << "not a tensor";
  r = run({"quantize", "--in", path("junk.rxt"), "--out", path("q.rxt")});
  EXPECT_EQ(r.code, 1);

  save_rxt(path("c2.rxt"), RealTensor::from_matrix(Eigen::Matrix2d::Identity()));
  r = run({"quantize", "--in", path("c2.rxt"), "--out", path("q.rxt"), "--radix", "4"});
  EXPECT_EQ(r.code, 2);
  r = run({"quantize", "--in", path("c2.rxt"), "--out", path("q.rxt"), "--mode", "round"});
  EXPECT_EQ(r.code, 2);
  r = run({"quantize", "--in", path("c2.rxt")});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, SimulateWorkedExample) {
  write_pulse_fixture();
  const CliRun r = run({"simulate", "--weights", path("w.rxt"), "--inputs", path("x.rxt"), "--rm", "100e3",
                     "--rfb", "10", "--s", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(",4.000000000e-05,4\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find(",2.000000000e-05,2\n"), std::string::npos);
  EXPECT_NE(r.out.find(",7.000000000e-05,7\n"), std::string::npos);
  EXPECT_NE(r.out.find("# decoded\n4\n2\n7\n"), std::string::npos);
}

TEST_F(CliTest, SimulateZeroInputs) {
  save_rxt(path("w.rxt"), IntTensor::from_matrix(Eigen::Matrix2i{{1, -2}, {2, 0}}));
  save_rxt(path("x.rxt"), IntTensor({2}, IntTensor::Values::Zero(2)));
  const CliRun r = run({"simulate", "--weights", path("w.rxt"), "--inputs", path("x.rxt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0,0.000000000e+00,-0.000000000e+00,0.000000000e+00,0\n"), std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("# decoded\n0,0\n"), std::string::npos);
}

TEST_F(CliTest, SimulateNoiseIsSeedDeterministic) {
  write_pulse_fixture();
  const std::vector<std::string> base = {"simulate", "--weights", path("w.rxt"), "--inputs",
                                         path("x.rxt"), "--sigma", "0.2"};
  auto with_seed = [&](const char* s) {
    auto a = base;
    a.insert(a.end(), {"--seed", s});
    return run(a);
  };
  const CliRun a = with_seed("7"), b = with_seed("7"), c = with_seed("8");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST_F(CliTest, SimulateGuardAndShapeErrors) {
  write_pulse_fixture();
  CliRun r = run({"simulate", "--weights", path("w.rxt"), "--inputs", path("x.rxt"), "--s", "5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("threshold"), std::string::npos) << r.err;

  save_rxt(path("x4.rxt"), IntTensor({4}, IntTensor::Values::Ones(4)));
  r = run({"simulate", "--weights", path("w.rxt"), "--inputs", path("x4.rxt")});
  EXPECT_EQ(r.code, 2);

  save_rxt(path("wbad.rxt"), IntTensor::from_matrix(Eigen::Matrix2i{{3, 0}, {0, 0}}));
  r = run({"simulate", "--weights", path("wbad.rxt"), "--inputs", path("x.rxt")});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, ConvolveKernelSupportImage) {
  ImageU8 img;
  img.pixels.resize(3, 3);
  img.pixels << 255, 255, 255, 0, 0, 0, 0, 0, 0;
  write_idx_images(path("one.idx"), {img});
  const CliRun r = run({"convolve", "--idx", path("one.idx"), "--count", "1", "--outdir", path("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("exact matches: 1/1"), std::string::npos);
  std::istringstream pgm(slurp(path("out/img_000.pgm")));
  const ImageU8 o = read_pgm(pgm);
  EXPECT_EQ(o.height(), 1);
  EXPECT_EQ(o.width(), 1);
  EXPECT_EQ(slurp(path("out/img_000.json")), "{\"min\":16,\"max\":16,\"scale\":0.0}\n");
  EXPECT_EQ(slurp(path("out/summary.csv")),
            "image,max_abs_i_tot_A,cycles,exact_match\n0,4.000000000e-05,1,true\n");
}

TEST_F(CliTest, ConvolveMnistIsExactAndDeterministic) {
  const std::string idx = kData + "/mnist5k-images-idx3-ubyte.gz";
  CliRun r = run({"convolve", "--idx", idx, "--count", "5", "--outdir", path("a")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("exact matches: 5/5"), std::string::npos);
  EXPECT_NE(r.out.find("reference value 4.0e-06 A"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("a/img_004.pgm")));

  r = run({"convolve", "--idx", idx, "--count", "3", "--outdir", path("n1"), "--sigma", "0.1", "--seed", "3"});
  const CliRun r2 =
      run({"convolve", "--idx", idx, "--count", "3", "--outdir", path("n2"), "--sigma", "0.1", "--seed", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, r2.out);
  for (const char* f : {"summary.csv", "img_000.pgm", "img_002.json"}) {
    EXPECT_EQ(slurp(path(std::string("n1/") + f)), slurp(path(std::string("n2/") + f))) << f;
  }
}

TEST_F(CliTest, TrainIsDeterministic) {
  const std::string imgs = kData + "/mnist5k-images-idx3-ubyte.gz";
  const std::string labs = kData + "/mnist5k-labels-idx1-ubyte.gz";
  auto go = [&](const std::string& out, const char* epochs) {
    return run({"train", "--dataset", imgs, labs, "--mode", "radix", "--epochs", epochs, "--seed", "2",
                "--out", path(out), "--train-count", "60", "--val-count", "40", "--downsample", "8"});
  };
  const CliRun a = go("a.qat", "2"), b = go("b.qat", "2");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(slurp(path("a.qat")), slurp(path("b.qat")));
  EXPECT_EQ(slurp(path("a.qat.csv")), a.out);
  EXPECT_EQ(a.out.rfind("epoch,mode,train_acc,val_acc\n0,radix,", 0), 0u);

  const CliRun z = go("z.qat", "0");
  ASSERT_EQ(z.code, 0);
  EXPECT_EQ(std::count(z.out.begin(), z.out.end(), '\n'), 2);

  const CliRun bad = run({"train", "--dataset", imgs, labs, "--mode", "ternary", "--out", path("x.qat")});
  EXPECT_EQ(bad.code, 2);
  const CliRun missing = run({"train", "--dataset", path("nope"), labs, "--out", path("x.qat")});
  EXPECT_EQ(missing.code, 1);
}

TEST_F(CliTest, Report) {
  CliRun r = run({"report", "--rows", "9", "--cols", "1", "--radix", "5", "--csv", path("c.csv")});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("columns: 2 vs 4 (ratio 0.500)"), std::string::npos);
  EXPECT_EQ(slurp(path("c.csv")).rfind("scheme,columns,devices,levels,relative_area\n", 0), 0u);
  r = run({"report", "--cols", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("radix_x_reference (x=5)                   1"), std::string::npos);
  r = run({"report", "--bits", "3", "--cols", "1"});
  EXPECT_NE(r.out.find("columns: 2 vs 6"), std::string::npos);
  r = run({"report", "--rows", "0"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}
