#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "radix/analog.hpp"
#include "radix/image.hpp"
#include "radix/quantizer.hpp"

namespace radix {

/// Patch matrix of a valid, stride-1 convolution: row p is the flattened
/// kh x kw window at output position p (row-major over output positions).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> im2col(
    const Eigen::MatrixBase<Derived>& img, int kh, int kw) {
  if (kh < 1 || kw < 1 || kh > img.rows() || kw > img.cols()) {
    throw Error(Errc::KernelTooLarge, "kernel " + std::to_string(kh) + "x" + std::to_string(kw) +
                                          " does not fit a " + std::to_string(img.rows()) + "x" +
                                          std::to_string(img.cols()) + " image");
  }
  const Eigen::Index oh = img.rows() - kh + 1, ow = img.cols() - kw + 1;
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> patches(
      oh * ow, kh * kw);
  for (Eigen::Index r = 0; r < oh; ++r) {
    for (Eigen::Index c = 0; c < ow; ++c) {
      for (int u = 0; u < kh; ++u) {
        patches.row(r * ow + c).segment(u * kw, kw) = img.block(r + u, c, 1, kw);
      }
    }
  }
  return patches;
}

Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> im2col(
    const ImageU8& img, int kh, int kw);

/// Horizontal-edge Sobel operator, rows (1 2 1), (0 0 0), (-1 -2 -1).
QuantizedTensor sobel_kernel();

/// Linear pixel map onto the activation alphabet: round(p * a_max / 255).
QuantizedTensor pixels_to_activations(const ImageU8& img, const RadixConfig& cfg);

struct ConvOptions {
  int columns = 4;       ///< signal columns available per read cycle
  int tile_rows = 64;    ///< crossbar rows available per read cycle
  bool flip_kernel = false;  ///< true convolution instead of cross-correlation
};

/// How a kernel is laid onto the array and how many read cycles an image costs.
///
/// Each patch occupies one signal column; a read cycle drives up to
/// patches_per_cycle patches on disjoint row blocks. Kernels taller than
/// tile_rows are split into segments whose decoded partial sums are added.
struct ConvPlan {
  QuantizedTensor kernel;  ///< as programmed (after the optional flip)
  int stride = 1;
  int columns = 0;
  int tile_rows = 0;
  int rows_per_patch = 0;  ///< channels * kh * kw
  int patches_per_cycle = 0;
  int segments = 0;
  int out_h = 0;
  int out_w = 0;
  long n_patches = 0;
  long cycles = 0;
};

ConvPlan plan_convolution(const QuantizedTensor& kernel, int height, int width,
                          const ConvOptions& opts = {});

/// Peak electrical quantities seen over every read cycle of a convolution.
struct CurrentReport {
  double peak_column_current = 0.0;     ///< max |i_tot| over used signal columns (A)
  double peak_reference_current = 0.0;  ///< max i_ref (A)
  double peak_net_current = 0.0;        ///< max |i_tot - i_ref| (A)
  double peak_device_current = 0.0;     ///< max current through one LRS device (A)
};

struct ConvResult {
  Eigen::MatrixXi output;
  ConvPlan plan;
  CurrentReport currents;
};

/// Runs a multi-channel activation stack through the crossbar path. The kernel
/// is kh x kw (one channel) or C x kh x kw.
ConvResult convolve_crossbar(std::span<const Eigen::MatrixXi> activations,
                             const QuantizedTensor& kernel, const RadixConfig& cfg,
                             const CircuitParams& params, const ConvOptions& opts = {},
                             std::optional<std::uint64_t> noise_seed = std::nullopt);

ConvResult convolve_crossbar(const ImageU8& img, const QuantizedTensor& kernel,
                             const RadixConfig& cfg, const CircuitParams& params,
                             const ConvOptions& opts = {},
                             std::optional<std::uint64_t> noise_seed = std::nullopt);

/// Direct integer cross-correlation, the digital reference for exact-match checks.
Eigen::MatrixXi convolve_integer(std::span<const Eigen::MatrixXi> activations,
                                 const QuantizedTensor& kernel, bool flip_kernel = false);

}  // namespace radix
