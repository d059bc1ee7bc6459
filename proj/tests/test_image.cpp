#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "radix/error.hpp"
#include "radix/image.hpp"

using namespace radix;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  auto p = fs::temp_directory_path() / ("radix_image_test_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Idx, BundledMnistSubset) {
  const std::string dir = RADIX_DATA_DIR;
  const auto images = read_idx_images(dir + "/mnist5k-images-idx3-ubyte.gz");
  const auto labels = read_idx_labels(dir + "/mnist5k-labels-idx1-ubyte.gz");
  ASSERT_EQ(images.size(), 5000u);
  ASSERT_EQ(labels.size(), 5000u);
  EXPECT_EQ(images[0].height(), 28);
  EXPECT_EQ(images[0].width(), 28);
  std::vector<int> per_class(10, 0);
  for (auto l : labels) {
    ASSERT_LT(l, 10);
    ++per_class[l];
  }
  for (int c : per_class) EXPECT_EQ(c, 500);
  EXPECT_EQ(read_idx_images(dir + "/mnist5k-images-idx3-ubyte.gz", 7).size(), 7u);
}

TEST(Idx, PlainRoundTripAndMagicChecks) {
  const auto dir = temp_dir();
  std::mt19937_64 rng(67);
  std::vector<ImageU8> imgs(3);
  for (auto& img : imgs) {
    img.pixels.resize(5, 4);
    for (Eigen::Index i = 0; i < img.pixels.size(); ++i) img.pixels.data()[i] = std::uint8_t(rng());
  }
  const std::vector<std::uint8_t> labels = {3, 1, 4};
  write_idx_images((dir / "i.idx").string(), imgs);
  write_idx_labels((dir / "l.idx").string(), labels);
  const auto back = read_idx_images((dir / "i.idx").string());
  ASSERT_EQ(back.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(back[i].pixels, imgs[i].pixels);
  EXPECT_EQ(read_idx_labels((dir / "l.idx").string()), labels);

  EXPECT_THROW(read_idx_images((dir / "l.idx").string()), Error);
  EXPECT_THROW(read_idx_labels((dir / "i.idx").string()), Error);
  try {
    read_idx_images((dir / "missing.idx").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Io);
  }
  fs::remove_all(dir);
}

TEST(Pgm, BinaryP5RoundTrip) {
  ImageU8 img;
  img.pixels.resize(2, 3);
  img.pixels << 0, 10, 255, 7, 8, 9;
  std::stringstream ss;
  write_pgm(ss, img);
  EXPECT_EQ(ss.str().substr(0, 11), "P5\n3 2\n255\n");
  EXPECT_EQ(ss.str().size(), 11u + 6u);
  EXPECT_EQ(read_pgm(ss).pixels, img.pixels);

  std::istringstream commented(std::string("P5\n# made by hand\n2 1\n255\n\x01\x02", 28));
  const auto c = read_pgm(commented);
  EXPECT_EQ(c.width(), 2);
  EXPECT_EQ(c.pixels(0, 1), 2);

  std::istringstream ascii("P2\n1 1\n255\n0\n");
  EXPECT_THROW(read_pgm(ascii), Error);
}

TEST(Rescale, AffineMapToFullRange) {
  Eigen::MatrixXi v(2, 2);
  v << -16, 0, 16, 8;
  Rescale r;
  const auto img = rescale_to_u8(v, &r);
  EXPECT_EQ(r.min, -16);
  EXPECT_EQ(r.max, 16);
  EXPECT_DOUBLE_EQ(r.scale, 255.0 / 32.0);
  EXPECT_EQ(img.pixels(0, 0), 0);
  EXPECT_EQ(img.pixels(1, 0), 255);
  EXPECT_EQ(img.pixels(0, 1), 128);  // 127.5 rounds away from zero

  const auto flat = rescale_to_u8(Eigen::MatrixXi::Constant(2, 2, 5), &r);
  EXPECT_EQ(r.scale, 0.0);
  EXPECT_TRUE((flat.pixels.array() == 0).all());

  const auto dir = temp_dir();
  const auto path = (dir / "m.json").string();
  write_rescale_metadata(path, {-16, 16, 255.0 / 32.0});
  const auto back = read_rescale_metadata(path);
  EXPECT_EQ(back.min, -16);
  EXPECT_EQ(back.max, 16);
  EXPECT_EQ(back.scale, 255.0 / 32.0);
  fs::remove_all(dir);
}

TEST(Downsample, BoxAverage) {
  ImageU8 img;
  img.pixels = ImageU8::Pixels::Zero(28, 28);
  img.pixels.block(2, 2, 3, 3).setConstant(90);
  const auto d = downsample(img, 8);
  EXPECT_EQ(d.height(), 8);
  EXPECT_EQ(d.pixels(0, 0), 90);  // crop offset 2, 3x3 blocks
  EXPECT_EQ(d.pixels(1, 1), 0);
  EXPECT_THROW(downsample(img, 0), Error);
}
