#pragma once

#include <cstdlib>

namespace radix {

/// The radix X and the integer alphabets it induces.
///
/// Weights live in {-(X-1)/2, ..., +(X-1)/2} and activations in {0, ..., X-1}.
/// Only odd X >= 3 is accepted so the weight alphabet is symmetric and contains 0.
class RadixConfig {
 public:
  explicit RadixConfig(int x = 5);

  int x() const noexcept { return x_; }
  int w_min() const noexcept { return -(x_ - 1) / 2; }
  int w_max() const noexcept { return (x_ - 1) / 2; }
  int a_max() const noexcept { return x_ - 1; }
  /// |w_min|: the parallel-device count that encodes a zero weight.
  int zero_count() const noexcept { return (x_ - 1) / 2; }

  bool operator==(const RadixConfig&) const = default;

 private:
  int x_;
};

}  // namespace radix
