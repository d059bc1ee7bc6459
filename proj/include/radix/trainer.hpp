#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "radix/config.hpp"
#include "radix/image.hpp"

namespace radix {

enum class TrainMode { Real, Bnn, Radix };
enum class ActivationMode { RealRelu, BnnSign, RadixRelu };
enum class WeightQuant { None, Binarize, RadixX };

const char* to_string(TrainMode mode);
TrainMode parse_train_mode(const std::string& s);

enum class LayerKind { Conv, Dense };

/// One weight layer. Weights are stored crossbar-style: rows are inputs
/// (for conv: kh * kw * in_channels taps), columns are outputs.
struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  int in_channels = 1;
  int in_h = 0;
  int in_w = 0;
  int kh = 0;
  int kw = 0;
  int out_channels = 0;
  int inputs = 0;
  int outputs = 0;

  static LayerSpec conv(int in_channels, int in_h, int in_w, int kh, int kw, int filters);
  static LayerSpec dense(int inputs, int outputs);

  int out_h() const { return in_h - kh + 1; }
  int out_w() const { return in_w - kw + 1; }
  int input_size() const;
  int output_size() const;
  int weight_rows() const;
  int weight_cols() const;
};

/// Small feed-forward net: every layer but the last is followed by the
/// configured activation; the last layer emits logits. Activations are laid
/// out height-major, channels last.
struct TinyNet {
  std::vector<LayerSpec> layers;
  ActivationMode activation = ActivationMode::RadixRelu;
  WeightQuant quantizer = WeightQuant::RadixX;
  RadixConfig cfg{5};
  /// When false, hidden layers use a plain ReLU even in radix/BNN modes.
  bool quantize_activations = true;

  void set_mode(TrainMode mode);
  TrainMode mode() const;
  int input_size() const { return layers.front().input_size(); }
  int output_size() const { return layers.back().output_size(); }
  void validate() const;

  /// conv(filters, 3x3) -> activation -> dense(classes).
  static TinyNet standard(int image_size, TrainMode mode, RadixConfig cfg = RadixConfig(5),
                          int filters = 8, int classes = 10);
};

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Real-valued shadow weights and optimizer moments; the quantized weights are
/// always derived from w_real on the fly.
struct QatState {
  std::vector<Eigen::MatrixXd> w_real;
  std::vector<Eigen::MatrixXd> adam_m;
  std::vector<Eigen::MatrixXd> adam_v;
  std::vector<double> act_max;  ///< radix-ReLU calibration per hidden layer; 0 = uncalibrated
  std::uint32_t step = 0;
  AdamHyper hyper;

  bool operator==(const QatState& o) const;
};

/// He-uniform weights from a seeded generator, zero moments.
QatState init_state(const TinyNet& net, std::uint64_t seed, AdamHyper hyper = {});

struct Batch {
  Eigen::MatrixXd inputs;   ///< batch x input_size
  std::vector<int> labels;  ///< may be empty for pure inference
};

struct LayerCache {
  Eigen::MatrixXd input;  ///< batch x input_size, as fed to this layer
  Eigen::MatrixXd pre;    ///< batch x output_size
  Eigen::MatrixXd w_eff;  ///< weights used in the product (dequantized)
  double w_lo = 0.0;      ///< calibration interval of the quantizer
  double w_hi = 0.0;
  double act_max = 0.0;   ///< radix-ReLU bound applied to this layer's output
  double observed_max = 0.0;
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  std::uint32_t step = 0;
};

struct ForwardResult {
  Eigen::MatrixXd logits;
  ForwardCache cache;
};

ForwardResult forward(const TinyNet& net, const QatState& state, const Batch& batch);

/// Mean softmax cross-entropy and its gradient w.r.t. the logits.
double softmax_cross_entropy(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
                             Eigen::MatrixXd* grad = nullptr);

/// Gradients w.r.t. each layer's shadow weights using clipped straight-through
/// estimators for the weight quantizer and the activations.
std::vector<Eigen::MatrixXd> backward_ste(const TinyNet& net, const QatState& state,
                                          const ForwardCache& cache,
                                          const Eigen::MatrixXd& loss_grad);

/// One bias-corrected ADAM update; increments state.step.
void adam_step(QatState& state, const std::vector<Eigen::MatrixXd>& grads);

struct Dataset {
  Eigen::MatrixXd inputs;  ///< n x input_size, pixels scaled to [0, 1]
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

/// Images [first, first + count) as a dataset, optionally box-downsampled to
/// size x size (0 keeps the native resolution).
Dataset make_dataset(const std::vector<ImageU8>& images, const std::vector<std::uint8_t>& labels,
                     std::size_t first, std::size_t count, int size = 0);

struct TrainOptions {
  int epochs = 20;
  int batch_size = 32;
  std::uint64_t seed = 0;
  AdamHyper hyper;
  /// Ablation: when false, w_real is overwritten by its quantized value after
  /// every update, discarding the shadow weights.
  bool keep_shadow_weights = true;
};

struct EpochRecord {
  int epoch = 0;
  TrainMode mode = TrainMode::Radix;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double train_loss = 0.0;
};

struct TrainResult {
  QatState state;
  std::vector<EpochRecord> trace;  ///< epoch 0 holds the initial-weight accuracy
};

TrainResult train(const TinyNet& net, const Dataset& train_set, const Dataset& val_set,
                  const TrainOptions& opts);

double accuracy(const TinyNet& net, const QatState& state, const Dataset& data);
double mean_loss(const TinyNet& net, const QatState& state, const Dataset& data);

/// Effective (quantized, dequantized) weights of a layer exactly as forward uses them.
Eigen::MatrixXd effective_weights(const TinyNet& net, const Eigen::MatrixXd& w_real,
                                  double* lo = nullptr, double* hi = nullptr);

/// Integer weight levels of a radix layer (crossbar image of the layer).
Eigen::MatrixXi radix_weight_levels(const TinyNet& net, const Eigen::MatrixXd& w_real);

// Checkpoint: "QAT1", u32 layers, per layer RXT1 f64 tensors w_real, adam_m,
// adam_v; then u32 step, f64 lr, beta1, beta2, eps; then u32 count and f64
// radix-ReLU calibrations. Little-endian throughout.
void write_checkpoint(std::ostream& out, const QatState& state);
QatState read_checkpoint(std::istream& in);
void save_checkpoint(const std::string& path, const QatState& state);
QatState load_checkpoint(const std::string& path);

/// "epoch,mode,train_acc,val_acc" with one row per record.
void write_trace_csv(std::ostream& out, const std::vector<EpochRecord>& trace);

}  // namespace radix
