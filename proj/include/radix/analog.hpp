#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include <Eigen/Dense>

#include "radix/crossbar.hpp"

namespace radix {

/// Peripheral constants of the read-out chain.
struct CircuitParams {
  DeviceModel dev;
  double r_fb = 10.0;  ///< feedback resistance of every inverting/differential stage (ohm)
  double s = 10.0;     ///< input scaling: V = X / s

  /// Checks positivity and that the largest activation reads below v_th.
  void validate(const RadixConfig& cfg) const;

  /// Output volts per unit of integer MVM result: r_fb / (r_m * s).
  double gain() const { return r_fb / (dev.r_m * s); }
};

/// Per-column currents and stage voltages for one input vector.
template <typename Scalar>
struct AnalogReadoutT {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector i_tot;      ///< signal column currents (A)
  Scalar i_ref{};    ///< reference column current (A)
  Vector v_inv;      ///< inverting amplifier outputs (V)
  Scalar v_ref{};    ///< reference amplifier output (V)
  Vector v_col;      ///< differential stage outputs (V)
};

using AnalogReadout = AnalogReadoutT<double>;

/// V_i = X_i / s. Throws OutOfAlphabet for activations outside [0, a_max] and
/// ReadVoltageExceedsThreshold when any V_i reaches v_th.
Eigen::VectorXd encode_inputs(const Eigen::Ref<const Eigen::VectorXi>& x, const RadixConfig& cfg,
                              const CircuitParams& params);
Eigen::VectorXd encode_inputs(const QuantizedTensor& x, const RadixConfig& cfg,
                              const CircuitParams& params);

/// Kirchhoff sums i_tot = G^T v and i_ref = g_ref . v. Voltages are left empty.
template <typename DerivedG, typename DerivedR, typename DerivedV>
AnalogReadoutT<typename DerivedV::Scalar> column_currents(const Eigen::MatrixBase<DerivedG>& g_signal,
                                                          const Eigen::MatrixBase<DerivedR>& g_ref,
                                                          const Eigen::MatrixBase<DerivedV>& v) {
  if (g_signal.rows() != v.size() || g_ref.size() != v.size()) {
    throw Error(Errc::DimensionMismatch, "input voltage vector length " + std::to_string(v.size()) +
                                             " does not match " + std::to_string(g_signal.rows()) +
                                             " crossbar rows");
  }
  AnalogReadoutT<typename DerivedV::Scalar> r;
  r.i_tot = g_signal.transpose() * v;
  r.i_ref = g_ref.dot(v);
  return r;
}

AnalogReadout column_currents(const CrossbarProgram& program, const Eigen::VectorXd& v,
                              const CircuitParams& params,
                              std::optional<std::uint64_t> noise_seed = std::nullopt);

/// Inverting amplifiers on every column, then V_col = V_ref - V_inv.
template <typename Scalar>
AnalogReadoutT<Scalar> output_stage(AnalogReadoutT<Scalar> r, const CircuitParams& params) {
  const Scalar rf = static_cast<Scalar>(params.r_fb);
  r.v_inv = -rf * r.i_tot;
  r.v_ref = -rf * r.i_ref;
  r.v_col = r.v_inv.unaryExpr([&r](Scalar vi) { return r.v_ref - vi; });
  return r;
}

/// encode_inputs -> column_currents -> output_stage.
AnalogReadout simulate_mvm(const CrossbarProgram& program, const Eigen::Ref<const Eigen::VectorXi>& x,
                           const CircuitParams& params,
                           std::optional<std::uint64_t> noise_seed = std::nullopt);

/// Same as simulate_mvm against pre-realized conductances, for repeated reads
/// of one physical array.
AnalogReadout simulate_mvm(const Conductances& g, const Eigen::Ref<const Eigen::VectorXi>& x,
                           const RadixConfig& cfg, const CircuitParams& params);

/// Y_hat = round(v_col / gain), ties to even.
Eigen::VectorXi decode_output(const AnalogReadout& readout, const CircuitParams& params);

/// CSV: "col,i_tot_A,v_inv_V,v_col_V,y_hat", one row per column, then
/// "ref,<i_ref>,<v_ref>,,".
void write_readout_csv(std::ostream& out, const AnalogReadout& readout,
                       const Eigen::VectorXi& decoded);

}  // namespace radix
