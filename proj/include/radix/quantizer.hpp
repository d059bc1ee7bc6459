#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "radix/config.hpp"
#include "radix/tensor.hpp"

namespace radix {

/// How a normalized weight is snapped to the alphabet.
///
/// EqualWidth splits [w_min, w_max] into X bins of equal width (the canonical
/// rule). Truncate rescales to [-X/2, +X/2] and rounds toward zero, which makes
/// the zero bin twice as wide as the others; kept for comparison.
enum class QuantMode { EqualWidth, Truncate };

/// Level for a single weight given the calibration interval [lo, lo + range].
/// Values outside the interval saturate to the alphabet extremes.
inline int quantize_level(double w, double lo, double range, const RadixConfig& cfg,
                          QuantMode mode = QuantMode::EqualWidth) {
  const int x = cfg.x();
  const double t = std::clamp(w - lo, 0.0, range);
  if (mode == QuantMode::EqualWidth) {
    const int k = std::min(static_cast<int>(std::floor(t * x / range)), x - 1);
    return k + cfg.w_min();
  }
  const double centered = (t / range) * x - 0.5 * x;
  return std::clamp(static_cast<int>(std::trunc(centered)), cfg.w_min(), cfg.w_max());
}

/// Width of one weight bin, the dequantization step for quantized weights.
inline double weight_step(double lo, double hi, const RadixConfig& cfg) {
  return (hi - lo) / cfg.x();
}

/// Elementwise quantization of any Eigen expression against a fixed calibration
/// interval. Caller guarantees hi > lo.
template <typename Derived>
auto quantize_in_range(const Eigen::DenseBase<Derived>& w, double lo, double hi,
                       const RadixConfig& cfg, QuantMode mode = QuantMode::EqualWidth) {
  const double range = hi - lo;
  return w.derived()
      .unaryExpr([=](double v) { return quantize_level(v, lo, range, cfg, mode); })
      .eval();
}

/// Bounded ReLU onto {0, ..., X-1}: non-positive inputs give 0, the interval
/// (0, pre_act_max] is split into X-1 equal bins numbered 1..X-1.
inline int radix_relu_level(double p, double pre_act_max, const RadixConfig& cfg) {
  if (!(p > 0.0)) return 0;
  if (p >= pre_act_max) return cfg.a_max();
  const int k = static_cast<int>(std::floor(p * cfg.a_max() / pre_act_max)) + 1;
  return std::min(k, cfg.a_max());
}

template <typename Derived>
auto radix_relu_levels(const Eigen::DenseBase<Derived>& p, double pre_act_max,
                       const RadixConfig& cfg) {
  return p.derived()
      .unaryExpr([=](double v) { return radix_relu_level(v, pre_act_max, cfg); })
      .eval();
}

inline int sign_level(double v) { return v >= 0.0 ? 1 : -1; }

// Tensor-level entry points. These validate their inputs and throw radix::Error.

QuantizedTensor quantize_weights(const RealTensor& weights, const RadixConfig& cfg,
                                 QuantMode mode = QuantMode::EqualWidth);

QuantizedTensor radix_relu(const RealTensor& pre_activation, double pre_act_max,
                           const RadixConfig& cfg);

/// Sign binarization with sgn(0) = +1; bounds (-1, +1).
QuantizedTensor binarize(const RealTensor& t);

/// Count of each alphabet level in a quantized tensor, lowest level first.
Eigen::VectorXi level_histogram(const QuantizedTensor& q);

}  // namespace radix
