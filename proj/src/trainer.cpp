#include "radix/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "byte_io.hpp"
#include "radix/error.hpp"
#include "radix/quantizer.hpp"
#include "radix/tensor.hpp"

namespace radix {

namespace {

using Eigen::MatrixXd;

constexpr double kCalibrationMomentum = 0.9;
constexpr int kEvalBatch = 256;

// Patch rows for a conv layer: (batch * positions) x (kh * kw * C), taps
// ordered (u, v, channel) to match the channels-last activation layout.
MatrixXd lower(const MatrixXd& a, const LayerSpec& s) {
  const int oh = s.out_h(), ow = s.out_w(), c = s.in_channels;
  const Eigen::Index b = a.rows();
  const int p = oh * ow;
  MatrixXd out(b * p, s.weight_rows());
  for (Eigen::Index n = 0; n < b; ++n) {
    for (int r = 0; r < oh; ++r) {
      for (int q = 0; q < ow; ++q) {
        const Eigen::Index row = n * p + r * ow + q;
        int k = 0;
        for (int u = 0; u < s.kh; ++u) {
          for (int v = 0; v < s.kw; ++v) {
            const int base = ((r + u) * s.in_w + (q + v)) * c;
            for (int ch = 0; ch < c; ++ch) out(row, k++) = a(n, base + ch);
          }
        }
      }
    }
  }
  return out;
}

// Inverse of lower(): scatter-add patch gradients back onto the input grid.
MatrixXd unlower(const MatrixXd& g, const LayerSpec& s, Eigen::Index batch) {
  const int oh = s.out_h(), ow = s.out_w(), c = s.in_channels;
  const int p = oh * ow;
  MatrixXd out = MatrixXd::Zero(batch, s.input_size());
  for (Eigen::Index n = 0; n < batch; ++n) {
    for (int r = 0; r < oh; ++r) {
      for (int q = 0; q < ow; ++q) {
        const Eigen::Index row = n * p + r * ow + q;
        int k = 0;
        for (int u = 0; u < s.kh; ++u) {
          for (int v = 0; v < s.kw; ++v) {
            const int base = ((r + u) * s.in_w + (q + v)) * c;
            for (int ch = 0; ch < c; ++ch) out(n, base + ch) += g(row, k++);
          }
        }
      }
    }
  }
  return out;
}

// (batch * positions) x F  <->  batch x (positions * F)
MatrixXd fold(const MatrixXd& z, Eigen::Index batch) {
  const Eigen::Index p = z.rows() / batch, f = z.cols();
  MatrixXd out(batch, p * f);
  for (Eigen::Index n = 0; n < batch; ++n)
    for (Eigen::Index i = 0; i < p; ++i) out.row(n).segment(i * f, f) = z.row(n * p + i);
  return out;
}

MatrixXd unfold(const MatrixXd& z, Eigen::Index f) {
  const Eigen::Index batch = z.rows(), p = z.cols() / f;
  MatrixXd out(batch * p, f);
  for (Eigen::Index n = 0; n < batch; ++n)
    for (Eigen::Index i = 0; i < p; ++i) out.row(n * p + i) = z.row(n).segment(i * f, f);
  return out;
}

bool hidden_quantized(const TinyNet& net) {
  return net.quantize_activations && net.activation != ActivationMode::RealRelu;
}

MatrixXd activate(const TinyNet& net, const MatrixXd& z, double pmax) {
  if (!hidden_quantized(net)) return z.cwiseMax(0.0);
  if (net.activation == ActivationMode::BnnSign) {
    return z.unaryExpr([](double v) { return static_cast<double>(sign_level(v)); });
  }
  const double step = pmax / net.cfg.a_max();
  return radix_relu_levels(z, pmax, net.cfg).cast<double>() * step;
}

MatrixXd activation_mask(const TinyNet& net, const MatrixXd& z, double pmax) {
  if (!hidden_quantized(net)) return (z.array() > 0.0).cast<double>().matrix();
  if (net.activation == ActivationMode::BnnSign) {
    return (z.array().abs() <= 1.0).cast<double>().matrix();
  }
  return (z.array() > 0.0 && z.array() < pmax).cast<double>().matrix();
}

Batch slice(const Dataset& data, const std::vector<std::size_t>& order, std::size_t first,
            std::size_t count) {
  Batch b;
  b.inputs.resize(static_cast<Eigen::Index>(count), data.inputs.cols());
  b.labels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = order[first + i];
    b.inputs.row(static_cast<Eigen::Index>(i)) = data.inputs.row(static_cast<Eigen::Index>(k));
    b.labels[i] = data.labels[k];
  }
  return b;
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

int argmax_row(const MatrixXd& m, Eigen::Index r) {
  Eigen::Index best = 0;
  m.row(r).maxCoeff(&best);
  return static_cast<int>(best);
}

void write_matrix(std::ostream& out, const MatrixXd& m) { write_rxt(out, RealTensor::from_matrix(m)); }

MatrixXd read_matrix(std::istream& in) {
  AnyTensor t = read_rxt(in);
  auto* real = std::get_if<RealTensor>(&t);
  if (!real || real->rank() != 2) throw Error(Errc::Parse, "checkpoint tensor must be rank-2 f64");
  return real->matrix();
}

}  // namespace

const char* to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::Real: return "real";
    case TrainMode::Bnn: return "bnn";
    case TrainMode::Radix: return "radix";
  }
  return "?";
}

TrainMode parse_train_mode(const std::string& s) {
  if (s == "real") return TrainMode::Real;
  if (s == "bnn") return TrainMode::Bnn;
  if (s == "radix") return TrainMode::Radix;
  throw Error(Errc::InvalidArgument, "unknown training mode '" + s + "' (real|bnn|radix)");
}

LayerSpec LayerSpec::conv(int in_channels, int in_h, int in_w, int kh, int kw, int filters) {
  LayerSpec s;
  s.kind = LayerKind::Conv;
  s.in_channels = in_channels;
  s.in_h = in_h;
  s.in_w = in_w;
  s.kh = kh;
  s.kw = kw;
  s.out_channels = filters;
  return s;
}

LayerSpec LayerSpec::dense(int inputs, int outputs) {
  LayerSpec s;
  s.kind = LayerKind::Dense;
  s.inputs = inputs;
  s.outputs = outputs;
  return s;
}

int LayerSpec::input_size() const {
  return kind == LayerKind::Conv ? in_channels * in_h * in_w : inputs;
}

int LayerSpec::output_size() const {
  return kind == LayerKind::Conv ? out_channels * out_h() * out_w() : outputs;
}

int LayerSpec::weight_rows() const {
  return kind == LayerKind::Conv ? kh * kw * in_channels : inputs;
}

int LayerSpec::weight_cols() const { return kind == LayerKind::Conv ? out_channels : outputs; }

void TinyNet::set_mode(TrainMode mode) {
  switch (mode) {
    case TrainMode::Real:
      activation = ActivationMode::RealRelu;
      quantizer = WeightQuant::None;
      break;
    case TrainMode::Bnn:
      activation = ActivationMode::BnnSign;
      quantizer = WeightQuant::Binarize;
      break;
    case TrainMode::Radix:
      activation = ActivationMode::RadixRelu;
      quantizer = WeightQuant::RadixX;
      break;
  }
}

TrainMode TinyNet::mode() const {
  if (quantizer == WeightQuant::Binarize) return TrainMode::Bnn;
  if (quantizer == WeightQuant::RadixX) return TrainMode::Radix;
  return TrainMode::Real;
}

void TinyNet::validate() const {
  if (layers.empty()) throw Error(Errc::InvalidArgument, "network has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerSpec& s = layers[l];
    if (s.weight_rows() <= 0 || s.weight_cols() <= 0) {
      throw Error(Errc::InvalidArgument, "layer " + std::to_string(l) + " has an empty weight matrix");
    }
    if (s.kind == LayerKind::Conv && (s.out_h() <= 0 || s.out_w() <= 0)) {
      throw Error(Errc::KernelTooLarge, "layer " + std::to_string(l) + " kernel exceeds its input");
    }
    if (l > 0 && layers[l - 1].output_size() != s.input_size()) {
      throw Error(Errc::ShapeMismatch, "layer " + std::to_string(l) + " expects " +
                                           std::to_string(s.input_size()) + " inputs, previous layer gives " +
                                           std::to_string(layers[l - 1].output_size()));
    }
  }
}

TinyNet TinyNet::standard(int image_size, TrainMode mode, RadixConfig cfg, int filters, int classes) {
  TinyNet net;
  net.cfg = cfg;
  net.set_mode(mode);
  net.layers.push_back(LayerSpec::conv(1, image_size, image_size, 3, 3, filters));
  net.layers.push_back(LayerSpec::dense(net.layers[0].output_size(), classes));
  net.validate();
  return net;
}

bool QatState::operator==(const QatState& o) const {
  auto same = [](const std::vector<MatrixXd>& a, const std::vector<MatrixXd>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols() || a[i] != b[i]) return false;
    }
    return true;
  };
  return same(w_real, o.w_real) && same(adam_m, o.adam_m) && same(adam_v, o.adam_v) &&
         act_max == o.act_max && step == o.step && hyper.lr == o.hyper.lr &&
         hyper.beta1 == o.hyper.beta1 && hyper.beta2 == o.hyper.beta2 && hyper.eps == o.hyper.eps;
}

QatState init_state(const TinyNet& net, std::uint64_t seed, AdamHyper hyper) {
  net.validate();
  std::mt19937_64 rng(seed);
  QatState st;
  st.hyper = hyper;
  for (const LayerSpec& s : net.layers) {
    const double limit = std::sqrt(6.0 / s.weight_rows());
    std::uniform_real_distribution<double> dist(-limit, limit);
    MatrixXd w(s.weight_rows(), s.weight_cols());
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
    st.w_real.push_back(w);
    st.adam_m.push_back(MatrixXd::Zero(w.rows(), w.cols()));
    st.adam_v.push_back(MatrixXd::Zero(w.rows(), w.cols()));
  }
  st.act_max.assign(net.layers.size() - 1, 0.0);
  return st;
}

MatrixXd effective_weights(const TinyNet& net, const MatrixXd& w_real, double* lo, double* hi) {
  const double wlo = w_real.minCoeff(), whi = w_real.maxCoeff();
  if (lo) *lo = wlo;
  if (hi) *hi = whi;
  switch (net.quantizer) {
    case WeightQuant::None:
      return w_real;
    case WeightQuant::Binarize: {
      const double alpha = w_real.cwiseAbs().mean();
      return w_real.unaryExpr([&](double v) { return alpha * sign_level(v); });
    }
    case WeightQuant::RadixX:
      if (!(whi > wlo)) return w_real;
      return quantize_in_range(w_real, wlo, whi, net.cfg).cast<double>() *
             weight_step(wlo, whi, net.cfg);
  }
  return w_real;
}

Eigen::MatrixXi radix_weight_levels(const TinyNet& net, const MatrixXd& w_real) {
  const double lo = w_real.minCoeff(), hi = w_real.maxCoeff();
  if (!(hi > lo)) throw Error(Errc::ConstantTensor, "constant tensor cannot be quantized");
  return quantize_in_range(w_real, lo, hi, net.cfg);
}

ForwardResult forward(const TinyNet& net, const QatState& state, const Batch& batch) {
  net.validate();
  if (state.w_real.size() != net.layers.size()) {
    throw Error(Errc::ShapeMismatch, "state has " + std::to_string(state.w_real.size()) +
                                         " layers, network has " + std::to_string(net.layers.size()));
  }
  if (batch.inputs.cols() != net.input_size()) {
    throw Error(Errc::ShapeMismatch, "batch has " + std::to_string(batch.inputs.cols()) +
                                         " features, network expects " + std::to_string(net.input_size()));
  }
  ForwardResult res;
  res.cache.step = state.step;
  MatrixXd a = batch.inputs;
  const Eigen::Index b = a.rows();
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const LayerSpec& s = net.layers[l];
    LayerCache lc;
    lc.input = a;
    lc.w_eff = effective_weights(net, state.w_real[l], &lc.w_lo, &lc.w_hi);
    if (s.kind == LayerKind::Conv) {
      lc.pre = fold(lower(a, s) * lc.w_eff, b);
    } else {
      lc.pre = a * lc.w_eff;
    }
    if (l + 1 < net.layers.size()) {
      lc.observed_max = lc.pre.size() ? std::max(lc.pre.maxCoeff(), 0.0) : 0.0;
      lc.act_max = state.act_max[l] > 0.0 ? state.act_max[l] : lc.observed_max;
      if (!(lc.act_max > 0.0)) lc.act_max = 1.0;
      a = activate(net, lc.pre, lc.act_max);
    } else {
      res.logits = lc.pre;
    }
    res.cache.layers.push_back(std::move(lc));
  }
  return res;
}

double softmax_cross_entropy(const MatrixXd& logits, const std::vector<int>& labels, MatrixXd* grad) {
  if (static_cast<Eigen::Index>(labels.size()) != logits.rows()) {
    throw Error(Errc::ShapeMismatch, "label count does not match batch size");
  }
  if (labels.empty()) throw Error(Errc::EmptyDataset, "empty batch");
  const Eigen::Index n = logits.rows();
  MatrixXd p = logits;
  double loss = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const int y = labels[static_cast<std::size_t>(r)];
    if (y < 0 || y >= logits.cols()) throw Error(Errc::InvalidArgument, "label out of range");
    const double m = p.row(r).maxCoeff();
    p.row(r) = (p.row(r).array() - m).exp().matrix();
    const double z = p.row(r).sum();
    p.row(r) /= z;
    loss -= logits(r, y) - m - std::log(z);
  }
  if (grad) {
    *grad = p;
    for (Eigen::Index r = 0; r < n; ++r) (*grad)(r, labels[static_cast<std::size_t>(r)]) -= 1.0;
    *grad /= static_cast<double>(n);
  }
  return loss / static_cast<double>(n);
}

std::vector<MatrixXd> backward_ste(const TinyNet& net, const QatState& state, const ForwardCache& cache,
                                   const MatrixXd& loss_grad) {
  if (cache.step != state.step || cache.layers.size() != net.layers.size()) {
    throw Error(Errc::StaleCache, "forward cache does not belong to the current weights");
  }
  std::vector<MatrixXd> grads(net.layers.size());
  MatrixXd g = loss_grad;
  for (std::size_t l = net.layers.size(); l-- > 0;) {
    const LayerSpec& s = net.layers[l];
    const LayerCache& lc = cache.layers[l];
    if (g.rows() != lc.pre.rows() || g.cols() != lc.pre.cols()) {
      throw Error(Errc::ShapeMismatch, "gradient shape does not match layer output");
    }
    if (l + 1 < net.layers.size()) g = g.cwiseProduct(activation_mask(net, lc.pre, lc.act_max));

    MatrixXd dw, da;
    if (s.kind == LayerKind::Conv) {
      const MatrixXd gl = unfold(g, s.out_channels);
      dw = lower(lc.input, s).transpose() * gl;
      if (l > 0) da = unlower(gl * lc.w_eff.transpose(), s, g.rows());
    } else {
      dw = lc.input.transpose() * g;
      if (l > 0) da = g * lc.w_eff.transpose();
    }

    const MatrixXd& w = state.w_real[l];
    if (net.quantizer == WeightQuant::RadixX) {
      dw = dw.cwiseProduct((w.array() >= lc.w_lo && w.array() <= lc.w_hi).cast<double>().matrix());
    } else if (net.quantizer == WeightQuant::Binarize) {
      dw = dw.cwiseProduct((w.array().abs() <= 1.0).cast<double>().matrix());
    }
    grads[l] = std::move(dw);
    g = std::move(da);
  }
  return grads;
}

void adam_step(QatState& state, const std::vector<MatrixXd>& grads) {
  if (grads.size() != state.w_real.size()) {
    throw Error(Errc::ShapeMismatch, "gradient count does not match layer count");
  }
  const AdamHyper& h = state.hyper;
  const double t = static_cast<double>(state.step) + 1.0;
  const double c1 = 1.0 - std::pow(h.beta1, t);
  const double c2 = 1.0 - std::pow(h.beta2, t);
  for (std::size_t l = 0; l < grads.size(); ++l) {
    const MatrixXd& g = grads[l];
    if (g.rows() != state.w_real[l].rows() || g.cols() != state.w_real[l].cols()) {
      throw Error(Errc::ShapeMismatch, "gradient shape mismatch at layer " + std::to_string(l));
    }
    state.adam_m[l] = h.beta1 * state.adam_m[l] + (1.0 - h.beta1) * g;
    state.adam_v[l] = h.beta2 * state.adam_v[l] + (1.0 - h.beta2) * g.cwiseProduct(g);
    state.w_real[l].array() -= h.lr * (state.adam_m[l].array() / c1) /
                               ((state.adam_v[l].array() / c2).sqrt() + h.eps);
  }
  ++state.step;
}

Dataset make_dataset(const std::vector<ImageU8>& images, const std::vector<std::uint8_t>& labels,
                     std::size_t first, std::size_t count, int size) {
  if (images.size() != labels.size()) {
    throw Error(Errc::ShapeMismatch, "image and label counts differ");
  }
  if (first + count > images.size()) {
    throw Error(Errc::InvalidArgument, "requested " + std::to_string(first + count) +
                                           " samples, dataset holds " + std::to_string(images.size()));
  }
  Dataset d;
  if (count == 0) return d;
  const ImageU8 probe = size > 0 ? downsample(images[first], size) : images[first];
  const Eigen::Index n_px = probe.pixels.size();
  d.inputs.resize(static_cast<Eigen::Index>(count), n_px);
  d.labels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ImageU8 img = size > 0 ? downsample(images[first + i], size) : images[first + i];
    if (img.pixels.size() != n_px) throw Error(Errc::ShapeMismatch, "images differ in size");
    for (Eigen::Index k = 0; k < n_px; ++k) {
      d.inputs(static_cast<Eigen::Index>(i), k) = img.pixels.data()[k] / 255.0;
    }
    d.labels[i] = labels[first + i];
  }
  return d;
}

double accuracy(const TinyNet& net, const QatState& state, const Dataset& data) {
  if (data.size() == 0) return 0.0;
  const auto order = identity_order(data.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); i += kEvalBatch) {
    const std::size_t n = std::min<std::size_t>(kEvalBatch, data.size() - i);
    const Batch b = slice(data, order, i, n);
    const MatrixXd logits = forward(net, state, b).logits;
    for (std::size_t r = 0; r < n; ++r) {
      if (argmax_row(logits, static_cast<Eigen::Index>(r)) == b.labels[r]) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double mean_loss(const TinyNet& net, const QatState& state, const Dataset& data) {
  if (data.size() == 0) throw Error(Errc::EmptyDataset, "empty dataset");
  const auto order = identity_order(data.size());
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); i += kEvalBatch) {
    const std::size_t n = std::min<std::size_t>(kEvalBatch, data.size() - i);
    const Batch b = slice(data, order, i, n);
    total += softmax_cross_entropy(forward(net, state, b).logits, b.labels) * static_cast<double>(n);
  }
  return total / static_cast<double>(data.size());
}

TrainResult train(const TinyNet& net, const Dataset& train_set, const Dataset& val_set,
                  const TrainOptions& opts) {
  net.validate();
  if (train_set.size() == 0) throw Error(Errc::EmptyDataset, "training set is empty");
  if (opts.epochs < 0 || opts.batch_size <= 0) {
    throw Error(Errc::InvalidArgument, "epochs must be >= 0 and batch size > 0");
  }
  TrainResult res;
  res.state = init_state(net, opts.seed, opts.hyper);
  QatState& st = res.state;

  std::seed_seq shuffle_seed{opts.seed, std::uint64_t{1}};
  std::mt19937_64 rng(shuffle_seed);
  auto order = identity_order(train_set.size());

  auto record = [&](int epoch, double loss) {
    EpochRecord r;
    r.epoch = epoch;
    r.mode = net.mode();
    r.train_acc = accuracy(net, st, train_set);
    r.val_acc = accuracy(net, st, val_set);
    r.train_loss = loss;
    res.trace.push_back(r);
  };
  record(0, mean_loss(net, st, train_set));

  const std::size_t bs = static_cast<std::size_t>(opts.batch_size);
  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t i = 0; i < order.size(); i += bs) {
      const std::size_t n = std::min(bs, order.size() - i);
      const Batch b = slice(train_set, order, i, n);
      ForwardResult fr = forward(net, st, b);
      MatrixXd g;
      loss_sum += softmax_cross_entropy(fr.logits, b.labels, &g) * static_cast<double>(n);
      const auto grads = backward_ste(net, st, fr.cache, g);
      for (std::size_t l = 0; l < st.act_max.size(); ++l) {
        const double seen = fr.cache.layers[l].observed_max;
        st.act_max[l] = st.act_max[l] > 0.0
                            ? kCalibrationMomentum * st.act_max[l] + (1.0 - kCalibrationMomentum) * seen
                            : seen;
      }
      adam_step(st, grads);
      if (!opts.keep_shadow_weights) {
        for (auto& w : st.w_real) w = effective_weights(net, w);
      }
    }
    record(epoch, loss_sum / static_cast<double>(order.size()));
  }
  return res;
}

void write_checkpoint(std::ostream& out, const QatState& state) {
  out.write("QAT1", 4);
  detail::put_u32(out, static_cast<std::uint32_t>(state.w_real.size()));
  for (std::size_t l = 0; l < state.w_real.size(); ++l) {
    write_matrix(out, state.w_real[l]);
    write_matrix(out, state.adam_m[l]);
    write_matrix(out, state.adam_v[l]);
  }
  detail::put_u32(out, state.step);
  detail::put_f64(out, state.hyper.lr);
  detail::put_f64(out, state.hyper.beta1);
  detail::put_f64(out, state.hyper.beta2);
  detail::put_f64(out, state.hyper.eps);
  detail::put_u32(out, static_cast<std::uint32_t>(state.act_max.size()));
  for (double v : state.act_max) detail::put_f64(out, v);
}

QatState read_checkpoint(std::istream& in) {
  detail::expect_magic(in, "QAT1");
  QatState st;
  const std::uint32_t n = detail::get_u32(in, "layer count");
  for (std::uint32_t l = 0; l < n; ++l) {
    st.w_real.push_back(read_matrix(in));
    st.adam_m.push_back(read_matrix(in));
    st.adam_v.push_back(read_matrix(in));
    const auto& w = st.w_real.back();
    if (st.adam_m.back().rows() != w.rows() || st.adam_m.back().cols() != w.cols() ||
        st.adam_v.back().rows() != w.rows() || st.adam_v.back().cols() != w.cols()) {
      throw Error(Errc::Parse, "optimizer moments do not match weight shape");
    }
  }
  st.step = detail::get_u32(in, "step");
  st.hyper.lr = detail::get_f64(in, "lr");
  st.hyper.beta1 = detail::get_f64(in, "beta1");
  st.hyper.beta2 = detail::get_f64(in, "beta2");
  st.hyper.eps = detail::get_f64(in, "eps");
  const std::uint32_t na = detail::get_u32(in, "calibration count");
  if (na > n) throw Error(Errc::Parse, "more calibrations than layers");
  for (std::uint32_t i = 0; i < na; ++i) st.act_max.push_back(detail::get_f64(in, "calibration"));
  return st;
}

void save_checkpoint(const std::string& path, const QatState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path + " for writing");
  write_checkpoint(out, state);
  if (!out) throw Error(Errc::Io, "write failed: " + path);
}

QatState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return read_checkpoint(in);
}

void write_trace_csv(std::ostream& out, const std::vector<EpochRecord>& trace) {
  out << "epoch,mode,train_acc,val_acc\n";
  char buf[128];
  for (const EpochRecord& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%s,%.4f,%.4f\n", r.epoch, to_string(r.mode), r.train_acc,
                  r.val_acc);
    out << buf;
  }
}

}  // namespace radix
