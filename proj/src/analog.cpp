#include "radix/analog.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace radix {

void CircuitParams::validate(const RadixConfig& cfg) const {
  dev.validate();
  if (!(r_fb > 0.0)) throw Error(Errc::InvalidArgument, "r_fb must be positive");
  if (!(s > 0.0)) throw Error(Errc::InvalidArgument, "scaling factor s must be positive");
  if (!(cfg.a_max() / s < dev.v_th)) {
    throw Error(Errc::ReadVoltageExceedsThreshold,
                "a_max / s = " + std::to_string(cfg.a_max() / s) +
                    " V reaches the switching threshold " + std::to_string(dev.v_th) + " V");
  }
}

Eigen::VectorXd encode_inputs(const Eigen::Ref<const Eigen::VectorXi>& x, const RadixConfig& cfg,
                              const CircuitParams& params) {
  if (!(params.s > 0.0)) throw Error(Errc::InvalidArgument, "scaling factor s must be positive");
  if (x.size() > 0 && (x.minCoeff() < 0 || x.maxCoeff() > cfg.a_max())) {
    throw Error(Errc::OutOfAlphabet, "activation outside [0, " + std::to_string(cfg.a_max()) + "]");
  }
  Eigen::VectorXd v = x.cast<double>() / params.s;
  if (v.size() > 0 && v.maxCoeff() >= params.dev.v_th) {
    throw Error(Errc::ReadVoltageExceedsThreshold,
                "read voltage " + std::to_string(v.maxCoeff()) + " V reaches v_th = " +
                    std::to_string(params.dev.v_th) + " V");
  }
  return v;
}

Eigen::VectorXd encode_inputs(const QuantizedTensor& x, const RadixConfig& cfg,
                              const CircuitParams& params) {
  if (x.rank() != 1) throw Error(Errc::ShapeMismatch, "inputs must be a vector");
  return encode_inputs(x.values.matrix(), cfg, params);
}

AnalogReadout column_currents(const CrossbarProgram& program, const Eigen::VectorXd& v,
                              const CircuitParams& params,
                              std::optional<std::uint64_t> noise_seed) {
  const auto g = realize_conductances(program, params.dev, noise_seed);
  return column_currents(g.signal, g.reference, v);
}

AnalogReadout simulate_mvm(const Conductances& g, const Eigen::Ref<const Eigen::VectorXi>& x,
                           const RadixConfig& cfg, const CircuitParams& params) {
  const Eigen::VectorXd v = encode_inputs(x, cfg, params);
  return output_stage(column_currents(g.signal, g.reference, v), params);
}

AnalogReadout simulate_mvm(const CrossbarProgram& program, const Eigen::Ref<const Eigen::VectorXi>& x,
                           const CircuitParams& params,
                           std::optional<std::uint64_t> noise_seed) {
  if (x.size() != program.rows()) {
    throw Error(Errc::DimensionMismatch, "input length " + std::to_string(x.size()) +
                                             " does not match " + std::to_string(program.rows()) +
                                             " crossbar rows");
  }
  const Eigen::VectorXd v = encode_inputs(x, program.config(), params);
  return output_stage(column_currents(program, v, params, noise_seed), params);
}

Eigen::VectorXi decode_output(const AnalogReadout& readout, const CircuitParams& params) {
  const double inv_gain = params.dev.r_m * params.s / params.r_fb;
  return readout.v_col.unaryExpr([inv_gain](double v) {
    return static_cast<int>(std::nearbyint(v * inv_gain));
  });
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

}  // namespace

void write_readout_csv(std::ostream& out, const AnalogReadout& readout,
                       const Eigen::VectorXi& decoded) {
  out << "col,i_tot_A,v_inv_V,v_col_V,y_hat\n";
  for (Eigen::Index j = 0; j < readout.i_tot.size(); ++j) {
    out << j << ',' << sci(readout.i_tot[j]) << ',' << sci(readout.v_inv[j]) << ','
        << sci(readout.v_col[j]) << ',' << (j < decoded.size() ? decoded[j] : 0) << '\n';
  }
  out << "ref," << sci(readout.i_ref) << ',' << sci(readout.v_ref) << ",,\n";
}

}  // namespace radix
