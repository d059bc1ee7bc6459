#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace radix {

/// 8-bit grayscale image, row-major.
struct ImageU8 {
  using Pixels = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Pixels pixels;

  int height() const { return static_cast<int>(pixels.rows()); }
  int width() const { return static_cast<int>(pixels.cols()); }
};

// IDX (big-endian). Magic 0x00000803 for u8 image stacks, 0x00000801 for u8
// label vectors. Gzip-compressed files are read transparently. limit = 0 reads all.
std::vector<ImageU8> read_idx_images(const std::string& path, std::size_t limit = 0);
std::vector<std::uint8_t> read_idx_labels(const std::string& path, std::size_t limit = 0);
void write_idx_images(const std::string& path, const std::vector<ImageU8>& images);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

// Binary PGM (P5, maxval 255).
void write_pgm(std::ostream& out, const ImageU8& img);
void write_pgm(const std::string& path, const ImageU8& img);
ImageU8 read_pgm(std::istream& in);

/// Affine map of an integer grid onto [0, 255]: u8 = round((v - min) * scale).
struct Rescale {
  int min = 0;
  int max = 0;
  double scale = 0.0;  ///< 255 / (max - min), or 0 for a constant grid
};

ImageU8 rescale_to_u8(const Eigen::MatrixXi& values, Rescale* used = nullptr);

/// Sidecar metadata: {"min": .., "max": .., "scale": ..}.
void write_rescale_metadata(const std::string& path, const Rescale& r);
Rescale read_rescale_metadata(const std::string& path);

/// Box-filter downsample: center-crop to a multiple of the target size, then average.
ImageU8 downsample(const ImageU8& img, int size);

}  // namespace radix
