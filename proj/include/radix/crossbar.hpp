#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "radix/config.hpp"
#include "radix/tensor.hpp"

namespace radix {

/// Static electrical model of one constituent memristor.
struct DeviceModel {
  double r_m = 100e3;        ///< LRS resistance (ohm)
  double hrs_ratio = 100.0;  ///< R_off / R_on; infinity means a perfect open
  double sigma_g = 0.0;      ///< relative std-dev of per-device conductance
  double v_th = 0.5;         ///< switching threshold (V); reads must stay below it
  /// Model all X-1 devices as present, inactive ones sitting at HRS. Off by
  /// default: the mask layout hard-wires connections so inactive devices are absent.
  bool hrs_leak = false;

  void validate() const;
};

/// Number of LRS memristors wired in parallel at one row/column junction.
struct CrosspointCell {
  int active_count = 0;
};

/// Identifies one junction's private noise stream. Draws for different keys are
/// independent, so evaluation order never changes a realization.
struct NoiseKey {
  std::uint64_t seed = 0;
  std::uint64_t run = 0;
  std::uint64_t column = 0;
  std::uint64_t row = 0;
};

/// w_q + |w_min|; throws OutOfAlphabet outside the weight alphabet.
int weight_to_count(int w_q, const RadixConfig& cfg);
int count_to_weight(int count, const RadixConfig& cfg);

/// Junction conductance in siemens. Without a key (or with sigma_g = 0) this is
/// the ideal count / r_m plus optional HRS leakage.
double cell_conductance(CrosspointCell cell, const RadixConfig& cfg, const DeviceModel& dev,
                        std::optional<NoiseKey> key = std::nullopt);

/// Hardware image of an n x m weight matrix: signal-column device counts plus
/// the zero-weight reference column.
class CrossbarProgram {
 public:
  using Counts = Eigen::MatrixXi;

  CrossbarProgram(RadixConfig cfg, Counts cells);

  const RadixConfig& config() const noexcept { return cfg_; }
  Eigen::Index rows() const noexcept { return cells_.rows(); }
  Eigen::Index cols() const noexcept { return cells_.cols(); }
  const Counts& cells() const noexcept { return cells_; }
  const Eigen::VectorXi& reference() const noexcept { return reference_; }
  CrosspointCell cell(Eigen::Index i, Eigen::Index j) const { return {cells_(i, j)}; }

  /// Inverse of the weight mapping: count - |w_min|.
  Eigen::MatrixXi weights() const;
  /// Connected LRS devices over signal and reference columns.
  long total_devices() const;

  bool operator==(const CrossbarProgram& o) const {
    return cfg_ == o.cfg_ && cells_ == o.cells_;
  }

 private:
  RadixConfig cfg_;
  Counts cells_;
  Eigen::VectorXi reference_;
};

CrossbarProgram program_crossbar(const QuantizedTensor& w_q, const RadixConfig& cfg);

template <typename Derived>
CrossbarProgram program_crossbar(const Eigen::MatrixBase<Derived>& w_q, const RadixConfig& cfg) {
  Eigen::MatrixXi counts = w_q.template cast<int>().unaryExpr(
      [&cfg](int w) { return weight_to_count(w, cfg); });
  return CrossbarProgram(cfg, std::move(counts));
}

/// Conductances of every junction of a program for one device realization.
struct Conductances {
  Eigen::MatrixXd signal;     ///< n x m
  Eigen::VectorXd reference;  ///< n
};

/// Evaluates cell_conductance over the whole program. The reference column uses
/// column index m in its noise keys.
Conductances realize_conductances(const CrossbarProgram& program, const DeviceModel& dev,
                                  std::optional<std::uint64_t> noise_seed = std::nullopt,
                                  std::uint64_t run = 0);

// Text format: "XBAR x=<x> n=<n> m=<m>", then one line per row with the signal
// counts followed by the reference count.
void write_program(std::ostream& out, const CrossbarProgram& program);
CrossbarProgram read_program(std::istream& in);

}  // namespace radix
