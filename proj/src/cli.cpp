#include "radix/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "radix/analog.hpp"
#include "radix/conv.hpp"
#include "radix/cost.hpp"
#include "radix/crossbar.hpp"
#include "radix/error.hpp"
#include "radix/image.hpp"
#include "radix/quantizer.hpp"
#include "radix/tensor.hpp"
#include "radix/trainer.hpp"

namespace radix {

namespace {

constexpr double kReferencePeakCurrent = 4.0e-6;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

template <typename T>
T load_as(const std::string& path, const char* what) {
  AnyTensor t = load_rxt(path);
  if (auto* p = std::get_if<T>(&t)) return std::move(*p);
  throw Error(Errc::Parse, path + ": expected " + what);
}

std::optional<std::uint64_t> noise_seed(double sigma, std::uint64_t seed) {
  if (sigma > 0.0) return seed;
  return std::nullopt;
}

struct QuantizeArgs {
  std::string in, out, mode = "eq7";
  int radix = 5;
};

int cmd_quantize(const QuantizeArgs& a, std::ostream& out) {
  const RadixConfig cfg(a.radix);
  if (a.mode != "eq7" && a.mode != "alg1") {
    throw Error(Errc::InvalidArgument, "--mode must be eq7 or alg1");
  }
  const RealTensor w = load_as<RealTensor>(a.in, "an f64 tensor");
  const QuantizedTensor q =
      quantize_weights(w, cfg, a.mode == "eq7" ? QuantMode::EqualWidth : QuantMode::Truncate);
  save_rxt(a.out, static_cast<const IntTensor&>(q));
  const auto hist = level_histogram(q);
  out << "level,count\n";
  for (Eigen::Index i = 0; i < hist.size(); ++i) {
    out << (cfg.w_min() + static_cast<int>(i)) << ',' << hist(i) << '\n';
  }
  return 0;
}

struct SimulateArgs {
  std::string weights, inputs;
  int radix = 5;
  double r_m = 100e3, r_fb = 10.0, s = 10.0, sigma = 0.0, v_th = 0.5;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const RadixConfig cfg(a.radix);
  CircuitParams params;
  params.dev.r_m = a.r_m;
  params.dev.sigma_g = a.sigma;
  params.dev.v_th = a.v_th;
  params.r_fb = a.r_fb;
  params.s = a.s;
  params.validate(cfg);

  const IntTensor w = load_as<IntTensor>(a.weights, "an i32 weight tensor");
  const IntTensor x = load_as<IntTensor>(a.inputs, "an i32 input tensor");
  if (w.rank() != 2) throw Error(Errc::ShapeMismatch, "weights must be rank-2 (rows x columns)");
  const CrossbarProgram program = program_crossbar(w.matrix(), cfg);

  Eigen::MatrixXi pulses;
  if (x.rank() == 1) {
    pulses = x.matrix().transpose();
  } else if (x.rank() == 2) {
    pulses = x.matrix();
  } else {
    throw Error(Errc::ShapeMismatch, "inputs must be rank-1 or rank-2 (pulses x rows)");
  }
  if (pulses.cols() != program.rows()) {
    throw Error(Errc::DimensionMismatch, "inputs have " + std::to_string(pulses.cols()) +
                                             " values per pulse, crossbar has " +
                                             std::to_string(program.rows()) + " rows");
  }

  const Conductances g = realize_conductances(program, params.dev, noise_seed(a.sigma, a.seed));
  std::vector<Eigen::VectorXi> decoded;
  for (Eigen::Index p = 0; p < pulses.rows(); ++p) {
    const Eigen::VectorXi xp = pulses.row(p).transpose();
    const AnalogReadout r = simulate_mvm(g, xp, cfg, params);
    decoded.push_back(decode_output(r, params));
    out << "# pulse " << p << '\n';
    write_readout_csv(out, r, decoded.back());
  }
  out << "# decoded\n";
  for (const auto& y : decoded) {
    for (Eigen::Index j = 0; j < y.size(); ++j) out << (j ? "," : "") << y(j);
    out << '\n';
  }
  return 0;
}

struct ConvolveArgs {
  std::string idx, kernel, outdir;
  std::size_t count = 100;
  int radix = 5, columns = 4, tile_rows = 64;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  bool flip = false;
};

int cmd_convolve(const ConvolveArgs& a, std::ostream& out) {
  const RadixConfig cfg(a.radix);
  CircuitParams params;
  params.dev.sigma_g = a.sigma;
  params.validate(cfg);
  QuantizedTensor kernel = sobel_kernel();
  if (!a.kernel.empty()) {
    const IntTensor k = load_as<IntTensor>(a.kernel, "an i32 kernel tensor");
    kernel = QuantizedTensor(k, cfg.w_min(), cfg.w_max());
  }
  const auto images = read_idx_images(a.idx, a.count);
  if (images.empty()) throw Error(Errc::EmptyDataset, a.idx + ": no images");

  std::error_code ec;
  std::filesystem::create_directories(a.outdir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + a.outdir + ": " + ec.message());
  std::ofstream summary(a.outdir + "/summary.csv");
  if (!summary) throw Error(Errc::Io, "cannot write " + a.outdir + "/summary.csv");
  summary << "image,max_abs_i_tot_A,cycles,exact_match\n";

  ConvOptions opts;
  opts.columns = a.columns;
  opts.tile_rows = a.tile_rows;
  opts.flip_kernel = a.flip;
  std::size_t exact = 0;
  long cycles = 0;
  CurrentReport peak;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ConvResult r = convolve_crossbar(images[i], kernel, cfg, params, opts,
                                           noise_seed(a.sigma, a.seed + i));
    const Eigen::MatrixXi act = pixels_to_activations(images[i], cfg).matrix();
    const bool match = r.output == convolve_integer(std::span(&act, 1), kernel, a.flip);
    exact += match;
    cycles += r.plan.cycles;
    peak.peak_column_current = std::max(peak.peak_column_current, r.currents.peak_column_current);
    peak.peak_reference_current = std::max(peak.peak_reference_current, r.currents.peak_reference_current);
    peak.peak_net_current = std::max(peak.peak_net_current, r.currents.peak_net_current);
    peak.peak_device_current = std::max(peak.peak_device_current, r.currents.peak_device_current);

    char stem[32];
    std::snprintf(stem, sizeof stem, "/img_%03zu", i);
    Rescale rs;
    const ImageU8 u8 = rescale_to_u8(r.output, &rs);
    write_pgm(a.outdir + stem + ".pgm", u8);
    write_rescale_metadata(a.outdir + stem + ".json", rs);
    summary << i << ',' << fmt("%.9e", r.currents.peak_column_current) << ',' << r.plan.cycles << ','
            << (match ? "true" : "false") << '\n';
  }
  if (!summary) throw Error(Errc::Io, "write failed: " + a.outdir + "/summary.csv");

  out << "images: " << images.size() << '\n';
  out << "exact matches: " << exact << '/' << images.size() << '\n';
  out << "read cycles: " << cycles << '\n';
  out << "peak |i_tot|: " << fmt("%.6e", peak.peak_column_current) << " A (reference value "
      << fmt("%.1e", kReferencePeakCurrent) << " A, ratio "
      << fmt("%.3f", peak.peak_column_current / kReferencePeakCurrent) << ")\n";
  out << "peak i_ref: " << fmt("%.6e", peak.peak_reference_current) << " A\n";
  out << "peak |i_tot - i_ref|: " << fmt("%.6e", peak.peak_net_current) << " A\n";
  out << "peak device current: " << fmt("%.6e", peak.peak_device_current) << " A\n";
  return 0;
}

struct TrainArgs {
  std::vector<std::string> dataset;
  std::string mode = "radix", out, trace;
  int radix = 5, epochs = 20, downsample = 0, batch = 32, filters = 8;
  std::size_t train_count = 1000, val_count = 1000;
  double lr = 1e-3;
  std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const RadixConfig cfg(a.radix);
  const TrainMode mode = parse_train_mode(a.mode);
  const std::size_t need = a.train_count + a.val_count;
  const auto images = read_idx_images(a.dataset.at(0), need);
  const auto labels = read_idx_labels(a.dataset.at(1), need);
  if (images.size() < need || labels.size() < need) {
    throw Error(Errc::InvalidArgument, "dataset holds fewer than " + std::to_string(need) + " samples");
  }
  const Dataset tr = make_dataset(images, labels, 0, a.train_count, a.downsample);
  const Dataset va = make_dataset(images, labels, a.train_count, a.val_count, a.downsample);
  const int side = a.downsample > 0 ? a.downsample : images.front().height();
  const TinyNet net = TinyNet::standard(side, mode, cfg, a.filters, 10);

  TrainOptions opts;
  opts.epochs = a.epochs;
  opts.batch_size = a.batch;
  opts.seed = a.seed;
  opts.hyper.lr = a.lr;
  const TrainResult r = train(net, tr, va, opts);

  save_checkpoint(a.out, r.state);
  const std::string trace_path = a.trace.empty() ? a.out + ".csv" : a.trace;
  std::ofstream tf(trace_path);
  if (!tf) throw Error(Errc::Io, "cannot write " + trace_path);
  write_trace_csv(tf, r.trace);
  if (!tf) throw Error(Errc::Io, "write failed: " + trace_path);
  write_trace_csv(out, r.trace);
  return 0;
}

struct ReportArgs {
  long long rows = 9, cols = 1;
  int radix = 5, bits = 0;
  std::string csv;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  const RadixConfig cfg(a.radix);
  const int bits = a.bits > 0 ? a.bits : equivalent_bits(cfg);
  const CostComparison c = compare_costs(a.rows, a.cols, cfg, bits);
  write_cost_table(out, c);
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw Error(Errc::Io, "cannot write " + a.csv);
    write_cost_csv(f, c.rows);
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radix-X memristor crossbar simulator", "radixsim"};
  app.require_subcommand(1);

  QuantizeArgs qa;
  auto* q = app.add_subcommand("quantize", "Quantize an f64 RXT1 tensor to the radix-X weight alphabet");
  q->add_option("--in", qa.in, "Input tensor (RXT1 f64)")->required();
  q->add_option("--out", qa.out, "Output tensor (RXT1 i32)")->required();
  q->add_option("--radix", qa.radix, "Radix X (odd, >= 3)")->capture_default_str();
  q->add_option("--mode", qa.mode, "eq7 (equal-width bins) or alg1 (truncating)")->capture_default_str();

  SimulateArgs sa;
  auto* s = app.add_subcommand("simulate", "Analog matrix-vector multiply of integer weights and inputs");
  s->add_option("--weights", sa.weights, "Weight levels (RXT1 i32, rows x columns)")->required();
  s->add_option("--inputs", sa.inputs, "Activations (RXT1 i32, rows or pulses x rows)")->required();
  s->add_option("--radix", sa.radix)->capture_default_str();
  s->add_option("--rm", sa.r_m, "LRS resistance (ohm)")->capture_default_str();
  s->add_option("--rfb", sa.r_fb, "Amplifier feedback resistance (ohm)")->capture_default_str();
  s->add_option("--s", sa.s, "Input scaling, V = X / s")->capture_default_str();
  s->add_option("--vth", sa.v_th, "Device threshold voltage")->capture_default_str();
  s->add_option("--sigma", sa.sigma, "Lognormal conductance spread")->capture_default_str();
  s->add_option("--seed", sa.seed)->capture_default_str();

  ConvolveArgs ca;
  auto* c = app.add_subcommand("convolve", "Convolve IDX images through the crossbar path");
  c->add_option("--idx", ca.idx, "IDX image file (optionally gzipped)")->required();
  c->add_option("--kernel", ca.kernel, "Kernel levels (RXT1 i32); default Sobel");
  c->add_option("--count", ca.count)->capture_default_str();
  c->add_option("--outdir", ca.outdir)->required();
  c->add_option("--radix", ca.radix)->capture_default_str();
  c->add_option("--columns", ca.columns, "Signal columns per read cycle")->capture_default_str();
  c->add_option("--tile-rows", ca.tile_rows, "Crossbar rows per read cycle")->capture_default_str();
  c->add_flag("--flip", ca.flip, "Flip the kernel (true convolution)");
  c->add_option("--sigma", ca.sigma)->capture_default_str();
  c->add_option("--seed", ca.seed)->capture_default_str();

  TrainArgs ta;
  auto* t = app.add_subcommand("train", "Quantization-aware training of TinyNet on an IDX dataset");
  t->add_option("--dataset", ta.dataset, "IDX images and labels")->expected(2)->required();
  t->add_option("--mode", ta.mode, "real, bnn or radix")->capture_default_str();
  t->add_option("--radix", ta.radix)->capture_default_str();
  t->add_option("--epochs", ta.epochs)->capture_default_str();
  t->add_option("--seed", ta.seed)->capture_default_str();
  t->add_option("--out", ta.out, "Checkpoint path")->required();
  t->add_option("--trace", ta.trace, "Accuracy trace CSV (default <out>.csv)");
  t->add_option("--train-count", ta.train_count)->capture_default_str();
  t->add_option("--val-count", ta.val_count)->capture_default_str();
  t->add_option("--downsample", ta.downsample, "Square input size, 0 = native")->capture_default_str();
  t->add_option("--batch", ta.batch)->capture_default_str();
  t->add_option("--filters", ta.filters)->capture_default_str();
  t->add_option("--lr", ta.lr)->capture_default_str();

  ReportArgs ra;
  auto* r = app.add_subcommand("report", "Column/device cost of radix-X versus differential arrays");
  r->add_option("--rows", ra.rows)->capture_default_str();
  r->add_option("--cols", ra.cols)->capture_default_str();
  r->add_option("--radix", ra.radix)->capture_default_str();
  r->add_option("--bits", ra.bits, "Binary weight width (default: largest with 2^b <= X)");
  r->add_option("--csv", ra.csv, "Also write the rows as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*q) return cmd_quantize(qa, out);
    if (*s) return cmd_simulate(sa, out);
    if (*c) return cmd_convolve(ca, out);
    if (*t) return cmd_train(ta, out);
    if (*r) return cmd_report(ra, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_io() ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace radix
