#include "radix/conv.hpp"

#include <algorithm>
#include <cmath>

namespace radix {

namespace {

struct KernelDims {
  int channels = 1;
  int kh = 0;
  int kw = 0;
};

KernelDims kernel_dims(const QuantizedTensor& kernel) {
  if (kernel.rank() == 2) return {1, int(kernel.shape[0]), int(kernel.shape[1])};
  if (kernel.rank() == 3) return {int(kernel.shape[0]), int(kernel.shape[1]), int(kernel.shape[2])};
  throw Error(Errc::ShapeMismatch, "kernel must be kh x kw or C x kh x kw, got " +
                                       shape_string(kernel.shape));
}

QuantizedTensor flipped(const QuantizedTensor& kernel) {
  const auto d = kernel_dims(kernel);
  IntTensor t = kernel;
  const int plane = d.kh * d.kw;
  for (int c = 0; c < d.channels; ++c) {
    t.values.segment(c * plane, plane).reverseInPlace();
  }
  return {std::move(t), kernel.lo, kernel.hi};
}

using RowMajorXi = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> im2col(
    const ImageU8& img, int kh, int kw) {
  return im2col(img.pixels, kh, kw);
}

QuantizedTensor sobel_kernel() {
  Eigen::Matrix3i k;
  k << 1, 2, 1, 0, 0, 0, -1, -2, -1;
  return {IntTensor::from_matrix(k), -2, 2};
}

QuantizedTensor pixels_to_activations(const ImageU8& img, const RadixConfig& cfg) {
  const int a_max = cfg.a_max();
  IntTensor::Values v(img.pixels.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = static_cast<int>(std::lround(img.pixels.data()[i] * double(a_max) / 255.0));
  }
  return {IntTensor({std::size_t(img.height()), std::size_t(img.width())}, std::move(v)), 0, a_max};
}

ConvPlan plan_convolution(const QuantizedTensor& kernel, int height, int width,
                          const ConvOptions& opts) {
  const auto d = kernel_dims(kernel);
  if (d.kh > height || d.kw > width || d.kh < 1 || d.kw < 1) {
    throw Error(Errc::KernelTooLarge, "kernel larger than the image");
  }
  if (opts.columns < 1 || opts.tile_rows < 1) {
    throw Error(Errc::InvalidArgument, "columns and tile_rows must be positive");
  }
  ConvPlan plan;
  plan.kernel = opts.flip_kernel ? flipped(kernel) : kernel;
  plan.columns = opts.columns;
  plan.tile_rows = opts.tile_rows;
  plan.rows_per_patch = d.channels * d.kh * d.kw;
  plan.out_h = height - d.kh + 1;
  plan.out_w = width - d.kw + 1;
  plan.n_patches = long(plan.out_h) * plan.out_w;
  if (plan.rows_per_patch <= opts.tile_rows) {
    plan.segments = 1;
    plan.patches_per_cycle = std::min(opts.columns, opts.tile_rows / plan.rows_per_patch);
  } else {
    plan.segments = (plan.rows_per_patch + opts.tile_rows - 1) / opts.tile_rows;
    plan.patches_per_cycle = 1;
  }
  const long batches = (plan.n_patches + plan.patches_per_cycle - 1) / plan.patches_per_cycle;
  plan.cycles = batches * plan.segments;
  return plan;
}

ConvResult convolve_crossbar(std::span<const Eigen::MatrixXi> activations,
                             const QuantizedTensor& kernel, const RadixConfig& cfg,
                             const CircuitParams& params, const ConvOptions& opts,
                             std::optional<std::uint64_t> noise_seed) {
  const auto d = kernel_dims(kernel);
  if (activations.empty() || static_cast<int>(activations.size()) != d.channels) {
    throw Error(Errc::ShapeMismatch, "kernel has " + std::to_string(d.channels) +
                                         " channels, input has " +
                                         std::to_string(activations.size()));
  }
  const auto h = activations[0].rows(), w = activations[0].cols();
  for (const auto& a : activations) {
    if (a.rows() != h || a.cols() != w) throw Error(Errc::ShapeMismatch, "channel sizes differ");
  }
  ConvResult result;
  result.plan = plan_convolution(kernel, int(h), int(w), opts);
  const auto& plan = result.plan;
  const int K = plan.rows_per_patch;
  const int plane = d.kh * d.kw;

  // Lowered inputs: channel patch matrices side by side, one row per output pixel.
  RowMajorXi patches(plan.n_patches, K);
  for (int c = 0; c < d.channels; ++c) {
    patches.middleCols(c * plane, plane) = im2col(activations[c], d.kh, d.kw);
  }
  const Eigen::VectorXi taps = plan.kernel.values.matrix();
  if (taps.minCoeff() < cfg.w_min() || taps.maxCoeff() > cfg.w_max()) {
    throw Error(Errc::OutOfAlphabet, "kernel outside the radix-" + std::to_string(cfg.x()) +
                                         " weight alphabet");
  }

  Eigen::VectorXi out = Eigen::VectorXi::Zero(plan.n_patches);
  const int B = plan.patches_per_cycle;
  const int seg_len = plan.segments == 1 ? K : plan.tile_rows;
  auto& peaks = result.currents;

  for (int s = 0; s < plan.segments; ++s) {
    const int r0 = s * seg_len;
    const int L = std::min(K, r0 + seg_len) - r0;

    // Block-diagonal program: column j holds the kernel segment on rows of
    // block j and zero-weight cells elsewhere, which the reference cancels.
    Eigen::MatrixXi counts = Eigen::MatrixXi::Constant(B * L, B, cfg.zero_count());
    for (int j = 0; j < B; ++j) {
      counts.block(j * L, j, L, 1) = taps.segment(r0, L).array() + cfg.zero_count();
    }
    const CrossbarProgram program(cfg, std::move(counts));
    const auto g = realize_conductances(program, params.dev, noise_seed, std::uint64_t(s));

    // Largest single-device conductance on each row, for the per-device peak.
    Eigen::VectorXd device_g = Eigen::VectorXd::Zero(B * L);
    for (Eigen::Index i = 0; i < device_g.size(); ++i) {
      for (Eigen::Index j = 0; j < B; ++j) {
        const int n = program.cells()(i, j);
        if (n > 0) device_g[i] = std::max(device_g[i], g.signal(i, j) / n);
      }
      device_g[i] = std::max(device_g[i], g.reference[i] / program.reference()[i]);
    }

    Eigen::VectorXi x(B * L);
    for (long b = 0; b < plan.n_patches; b += B) {
      const int nb = static_cast<int>(std::min<long>(B, plan.n_patches - b));
      x.setZero();
      for (int j = 0; j < nb; ++j) x.segment(j * L, L) = patches.row(b + j).segment(r0, L).transpose();
      const auto r = simulate_mvm(g, x, cfg, params);
      out.segment(b, nb) += decode_output(r, params).head(nb);

      peaks.peak_column_current = std::max(peaks.peak_column_current, r.i_tot.head(nb).cwiseAbs().maxCoeff());
      peaks.peak_reference_current = std::max(peaks.peak_reference_current, std::abs(r.i_ref));
      peaks.peak_net_current = std::max(
          peaks.peak_net_current, (r.i_tot.head(nb).array() - r.i_ref).abs().maxCoeff());
      peaks.peak_device_current = std::max(
          peaks.peak_device_current, (x.cast<double>() / params.s).cwiseProduct(device_g).maxCoeff());
    }
  }

  result.output = Eigen::Map<const RowMajorXi>(out.data(), plan.out_h, plan.out_w);
  return result;
}

ConvResult convolve_crossbar(const ImageU8& img, const QuantizedTensor& kernel,
                             const RadixConfig& cfg, const CircuitParams& params,
                             const ConvOptions& opts, std::optional<std::uint64_t> noise_seed) {
  const Eigen::MatrixXi act = pixels_to_activations(img, cfg).matrix();
  return convolve_crossbar(std::span<const Eigen::MatrixXi>(&act, 1), kernel, cfg, params, opts,
                           noise_seed);
}

Eigen::MatrixXi convolve_integer(std::span<const Eigen::MatrixXi> activations,
                                 const QuantizedTensor& kernel, bool flip_kernel) {
  const auto d = kernel_dims(kernel);
  if (static_cast<int>(activations.size()) != d.channels) {
    throw Error(Errc::ShapeMismatch, "channel count mismatch");
  }
  const auto k = flip_kernel ? flipped(kernel) : kernel;
  const auto h = activations[0].rows(), w = activations[0].cols();
  if (d.kh > h || d.kw > w) throw Error(Errc::KernelTooLarge, "kernel larger than the image");
  Eigen::MatrixXi out = Eigen::MatrixXi::Zero(h - d.kh + 1, w - d.kw + 1);
  for (int c = 0; c < d.channels; ++c) {
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index col = 0; col < out.cols(); ++col) {
        int acc = 0;
        for (int u = 0; u < d.kh; ++u) {
          for (int v = 0; v < d.kw; ++v) {
            acc += activations[c](r + u, col + v) * k.values[(c * d.kh + u) * d.kw + v];
          }
        }
        out(r, col) += acc;
      }
    }
  }
  return out;
}

}  // namespace radix
