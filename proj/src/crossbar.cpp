#include "radix/crossbar.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>

namespace radix {

void DeviceModel::validate() const {
  if (!(r_m > 0.0)) throw Error(Errc::InvalidArgument, "r_m must be positive");
  if (!(hrs_ratio >= 1.0)) throw Error(Errc::InvalidArgument, "hrs_ratio must be >= 1");
  if (!(sigma_g >= 0.0)) throw Error(Errc::InvalidArgument, "sigma_g must be >= 0");
  if (!(v_th > 0.0)) throw Error(Errc::InvalidArgument, "v_th must be positive");
}

int weight_to_count(int w_q, const RadixConfig& cfg) {
  if (w_q < cfg.w_min() || w_q > cfg.w_max()) {
    throw Error(Errc::OutOfAlphabet, "weight " + std::to_string(w_q) + " outside radix-" +
                                         std::to_string(cfg.x()) + " alphabet");
  }
  return w_q + cfg.zero_count();
}

int count_to_weight(int count, const RadixConfig& cfg) {
  if (count < 0 || count > cfg.x() - 1) {
    throw Error(Errc::OutOfAlphabet, "device count " + std::to_string(count) + " out of range");
  }
  return count - cfg.zero_count();
}

namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

double cell_conductance(CrosspointCell cell, const RadixConfig& cfg, const DeviceModel& dev,
                        std::optional<NoiseKey> key) {
  const int slots = cfg.x() - 1;
  if (cell.active_count < 0 || cell.active_count > slots) {
    throw Error(Errc::OutOfAlphabet, "active_count outside [0, X-1]");
  }
  const bool leak = dev.hrs_leak && std::isfinite(dev.hrs_ratio);
  const int inactive = leak ? slots - cell.active_count : 0;

  // Sum of per-device conductance multipliers, in units of 1 / r_m. With no
  // variation every LRS multiplier is exactly 1, so this reduces to count / r_m.
  double units = 0.0;
  if (!key || dev.sigma_g == 0.0) {
    units = cell.active_count + (inactive > 0 ? inactive / dev.hrs_ratio : 0.0);
  } else {
    std::seed_seq seq{lo32(key->seed), hi32(key->seed), lo32(key->run),    hi32(key->run),
                      lo32(key->column), hi32(key->column), lo32(key->row), hi32(key->row)};
    std::mt19937_64 engine(seq);
    // Mean-one lognormal with the requested relative standard deviation.
    const double s = std::sqrt(std::log1p(dev.sigma_g * dev.sigma_g));
    std::lognormal_distribution<double> factor(-0.5 * s * s, s);
    double active = 0.0;
    double hrs = 0.0;
    for (int d = 0; d < slots; ++d) {
      const double f = factor(engine);  // drawn for every slot so streams line up
      if (d < cell.active_count) {
        active += f;
      } else if (d < cell.active_count + inactive) {
        hrs += f;
      }
    }
    units = active + hrs / dev.hrs_ratio;
  }
  return units / dev.r_m;
}

CrossbarProgram::CrossbarProgram(RadixConfig cfg, Counts cells)
    : cfg_(cfg), cells_(std::move(cells)) {
  if (cells_.size() > 0 && (cells_.minCoeff() < 0 || cells_.maxCoeff() > cfg_.x() - 1)) {
    throw Error(Errc::OutOfAlphabet, "crosspoint counts must lie in [0, X-1]");
  }
  reference_ = Eigen::VectorXi::Constant(cells_.rows(), cfg_.zero_count());
}

Eigen::MatrixXi CrossbarProgram::weights() const {
  return cells_.array() - cfg_.zero_count();
}

long CrossbarProgram::total_devices() const {
  return static_cast<long>(cells_.cast<long>().sum() + reference_.cast<long>().sum());
}

CrossbarProgram program_crossbar(const QuantizedTensor& w_q, const RadixConfig& cfg) {
  if (w_q.rank() != 2) {
    throw Error(Errc::ShapeMismatch, "crossbar weights must be 2-D, got " + shape_string(w_q.shape));
  }
  return program_crossbar(w_q.matrix(), cfg);
}

Conductances realize_conductances(const CrossbarProgram& program, const DeviceModel& dev,
                                  std::optional<std::uint64_t> noise_seed, std::uint64_t run) {
  dev.validate();
  const auto& cfg = program.config();
  const Eigen::Index n = program.rows();
  const Eigen::Index m = program.cols();
  auto key = [&](Eigen::Index col, Eigen::Index row) -> std::optional<NoiseKey> {
    if (!noise_seed) return std::nullopt;
    return NoiseKey{*noise_seed, run, static_cast<std::uint64_t>(col),
                    static_cast<std::uint64_t>(row)};
  };
  Conductances g{Eigen::MatrixXd(n, m), Eigen::VectorXd(n)};
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      g.signal(i, j) = cell_conductance(program.cell(i, j), cfg, dev, key(j, i));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    g.reference[i] = cell_conductance({program.reference()[i]}, cfg, dev, key(m, i));
  }
  return g;
}

void write_program(std::ostream& out, const CrossbarProgram& program) {
  out << "XBAR x=" << program.config().x() << " n=" << program.rows() << " m=" << program.cols()
      << '\n';
  for (Eigen::Index i = 0; i < program.rows(); ++i) {
    for (Eigen::Index j = 0; j < program.cols(); ++j) out << program.cells()(i, j) << ' ';
    out << program.reference()[i] << '\n';
  }
}

CrossbarProgram read_program(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(Errc::Parse, "missing XBAR header");
  static const std::regex re(R"(^XBAR x=(\d+) n=(\d+) m=(\d+)\s*$)");
  std::smatch match;
  if (!std::regex_match(header, match, re)) throw Error(Errc::Parse, "malformed XBAR header");
  const RadixConfig cfg(std::stoi(match[1]));
  const long n = std::stol(match[2]);
  const long m = std::stol(match[3]);

  Eigen::MatrixXi counts(n, m);
  for (long i = 0; i < n; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::Parse, "XBAR body has too few rows");
    std::istringstream row(line);
    for (long j = 0; j < m; ++j) {
      if (!(row >> counts(i, j))) throw Error(Errc::Parse, "XBAR row has too few cells");
    }
    int ref = 0;
    if (!(row >> ref)) throw Error(Errc::Parse, "XBAR row is missing its reference cell");
    if (ref != cfg.zero_count()) {
      throw Error(Errc::Parse, "reference cell must hold " + std::to_string(cfg.zero_count()) +
                                   " devices");
    }
    std::string extra;
    if (row >> extra) throw Error(Errc::Parse, "XBAR row has trailing data");
  }
  return CrossbarProgram(cfg, std::move(counts));
}

}  // namespace radix
