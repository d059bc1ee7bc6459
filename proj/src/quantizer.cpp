#include "radix/quantizer.hpp"

#include <string>

namespace radix {

RadixConfig::RadixConfig(int x) : x_(x) {
  if (x < 3 || x % 2 == 0) {
    throw Error(Errc::InvalidArgument,
                "radix must be an odd integer >= 3, got " + std::to_string(x));
  }
}

QuantizedTensor quantize_weights(const RealTensor& weights, const RadixConfig& cfg,
                                 QuantMode mode) {
  if (weights.size() == 0) throw Error(Errc::InvalidArgument, "cannot quantize an empty tensor");
  require_finite(weights);
  const double lo = weights.values.minCoeff();
  const double hi = weights.values.maxCoeff();
  if (!(hi > lo)) throw Error(Errc::ConstantTensor, "constant tensor: quantization range is zero");
  IntTensor q(weights.shape, quantize_in_range(weights.values, lo, hi, cfg, mode));
  return {std::move(q), cfg.w_min(), cfg.w_max()};
}

QuantizedTensor radix_relu(const RealTensor& pre_activation, double pre_act_max,
                           const RadixConfig& cfg) {
  if (!(pre_act_max > 0.0) || !std::isfinite(pre_act_max)) {
    throw Error(Errc::BadMax, "pre_act_max must be a positive finite number");
  }
  require_finite(pre_activation);
  IntTensor q(pre_activation.shape, radix_relu_levels(pre_activation.values, pre_act_max, cfg));
  return {std::move(q), 0, cfg.a_max()};
}

QuantizedTensor binarize(const RealTensor& t) {
  require_finite(t);
  IntTensor q(t.shape, t.values.unaryExpr([](double v) { return sign_level(v); }).eval());
  return {std::move(q), -1, 1};
}

Eigen::VectorXi level_histogram(const QuantizedTensor& q) {
  Eigen::VectorXi h = Eigen::VectorXi::Zero(q.hi - q.lo + 1);
  for (auto v : q.values) ++h[v - q.lo];
  return h;
}

}  // namespace radix
