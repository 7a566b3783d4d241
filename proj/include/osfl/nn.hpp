#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osfl/matrix.hpp"

namespace osfl::nn {

enum class Mode { train, eval };

/// Per-BN-layer running or batch statistics, ordered by layer index.
struct BNStatSet {
  struct LayerStats {
    std::vector<double> mean;
    std::vector<double> var;
  };
  std::vector<LayerStats> layers;
};

struct LayerShape {
  std::string name;               // dense | batchnorm | leaky_relu | conv1d
  std::vector<std::size_t> dims;  // layer-specific sizing
  std::size_t param_count = 0;
  std::size_t state_count = 0;
};

class Layer {
 public:
  virtual ~Layer() = default;
  virtual Matrix forward(const Matrix& x, Mode mode) = 0;
  /// Accumulates parameter gradients (unless disabled) and returns dL/dx.
  virtual Matrix backward(const Matrix& dy, bool accumulate_param_grads) = 0;
  virtual std::unique_ptr<Layer> clone() const = 0;
  virtual LayerShape shape() const = 0;

  virtual std::size_t param_count() const = 0;
  virtual void get_params(double* dst) const = 0;
  virtual void set_params(const double* src) = 0;
  virtual void get_grads(double* dst) const = 0;
  virtual void zero_grad() = 0;

  // Non-parameter state (BN running statistics).
  virtual std::size_t state_count() const { return 0; }
  virtual void get_state(double*) const {}
  virtual void set_state(const double*) {}

  virtual bool is_batchnorm() const { return false; }
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t output_dim() const = 0;
};

class Dense final : public Layer {
 public:
  Dense(std::size_t in, std::size_t out) : in_(in), out_(out), w_(out, in), b_(out, 0.0), dw_(out, in), db_(out, 0.0) {}

  Matrix forward(const Matrix& x, Mode mode) override;
  Matrix backward(const Matrix& dy, bool accumulate_param_grads) override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Dense>(*this); }
  LayerShape shape() const override { return {"dense", {in_, out_}, param_count(), 0}; }

  std::size_t param_count() const override { return w_.size() + b_.size(); }
  void get_params(double* dst) const override;
  void set_params(const double* src) override;
  void get_grads(double* dst) const override;
  void zero_grad() override;
  std::size_t input_dim() const override { return in_; }
  std::size_t output_dim() const override { return out_; }

  Matrix& weights() { return w_; }
  std::vector<double>& bias() { return b_; }

 private:
  std::size_t in_, out_;
  Matrix w_;               // out x in
  std::vector<double> b_;  // out
  Matrix dw_;
  std::vector<double> db_;
  Matrix x_cache_;
};

/// 1D batch normalization over feature columns. Batch variance uses the
/// biased 1/b estimator; running statistics are an exponential moving average
/// with momentum 0.1 of the biased batch statistics.
class BatchNorm final : public Layer {
 public:
  explicit BatchNorm(std::size_t width);

  Matrix forward(const Matrix& x, Mode mode) override;
  Matrix backward(const Matrix& dy, bool accumulate_param_grads) override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<BatchNorm>(*this); }
  LayerShape shape() const override { return {"batchnorm", {width_}, param_count(), state_count()}; }

  std::size_t param_count() const override { return 2 * width_; }
  void get_params(double* dst) const override;
  void set_params(const double* src) override;
  void get_grads(double* dst) const override;
  void zero_grad() override;
  std::size_t state_count() const override { return 2 * width_; }
  void get_state(double* dst) const override;
  void set_state(const double* src) override;

  bool is_batchnorm() const override { return true; }
  std::size_t input_dim() const override { return width_; }
  std::size_t output_dim() const override { return width_; }

  const std::vector<double>& running_mean() const { return running_mean_; }
  const std::vector<double>& running_var() const { return running_var_; }
  const Matrix& cached_input() const { return x_cache_; }

  static constexpr double kMomentum = 0.1;
  static constexpr double kEps = 1e-5;

 private:
  std::size_t width_;
  std::vector<double> gamma_, beta_;
  std::vector<double> dgamma_, dbeta_;
  std::vector<double> running_mean_, running_var_;

  // forward caches
  Matrix x_cache_, xhat_cache_;
  std::vector<double> inv_std_cache_;
  Mode mode_cache_ = Mode::eval;
};

class LeakyRelu final : public Layer {
 public:
  LeakyRelu(std::size_t width, double slope) : width_(width), slope_(slope) {}

  Matrix forward(const Matrix& x, Mode mode) override;
  Matrix backward(const Matrix& dy, bool accumulate_param_grads) override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<LeakyRelu>(*this); }
  LayerShape shape() const override { return {"leaky_relu", {width_}, 0, 0}; }

  std::size_t param_count() const override { return 0; }
  void get_params(double*) const override {}
  void set_params(const double*) override {}
  void get_grads(double*) const override {}
  void zero_grad() override {}
  std::size_t input_dim() const override { return width_; }
  std::size_t output_dim() const override { return width_; }

 private:
  std::size_t width_;
  double slope_;
  Matrix x_cache_;
};

/// Minimal 1D convolution: input rows are single-channel signals of length
/// `length`; output is `channels` filter responses (same length, zero
/// padding), flattened channel-major to `channels * length` features.
class Conv1d final : public Layer {
 public:
  Conv1d(std::size_t length, std::size_t channels, std::size_t kernel);

  Matrix forward(const Matrix& x, Mode mode) override;
  Matrix backward(const Matrix& dy, bool accumulate_param_grads) override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Conv1d>(*this); }
  LayerShape shape() const override { return {"conv1d", {length_, channels_, kernel_}, param_count(), 0}; }

  std::size_t param_count() const override { return channels_ * kernel_ + channels_; }
  void get_params(double* dst) const override;
  void set_params(const double* src) override;
  void get_grads(double* dst) const override;
  void zero_grad() override;
  std::size_t input_dim() const override { return length_; }
  std::size_t output_dim() const override { return channels_ * length_; }

 private:
  std::size_t length_, channels_, kernel_;
  int pad_;
  std::vector<double> w_;  // channels x kernel
  std::vector<double> b_;  // channels
  std::vector<double> dw_, db_;
  Matrix x_cache_;
};

/// A differentiable model: an ordered layer stack with a flat parameter
/// vector, architecture tag, and BN running statistics as non-parameter
/// state. Instances are deep-copyable values.
class Model {
 public:
  Model() = default;
  Model(std::string tag, std::vector<std::unique_ptr<Layer>> layers);
  Model(const Model& o) { *this = o; }
  Model& operator=(const Model& o);
  Model(Model&&) = default;
  Model& operator=(Model&&) = default;

  const std::string& architecture_tag() const { return tag_; }
  std::size_t input_dim() const { return layers_.front()->input_dim(); }
  std::size_t n_outputs() const { return layers_.back()->output_dim(); }
  std::size_t n_layers() const { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return *layers_[i]; }

  Matrix forward(const Matrix& x, Mode mode);

  /// Reverse sweep from dL/dlogits. `bn_input_adjoints`, when given, holds one
  /// matrix per BN layer (in layer order) added to the adjoint at that BN
  /// layer's input; this is how losses defined on hidden-activation
  /// statistics inject their gradient. Returns dL/dinput.
  Matrix backward(const Matrix& dlogits,
                  const std::vector<Matrix>* bn_input_adjoints = nullptr,
                  bool accumulate_param_grads = true);

  std::size_t param_count() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> p);
  std::vector<double> gradients() const;
  void zero_grad();

  std::size_t state_count() const;
  std::vector<double> state() const;
  void set_state(std::span<const double> s);

  /// In-place SGD step: params -= lr * grads.
  void sgd_step(double lr);

  std::size_t bn_layer_count() const;
  /// BN-layer input activations cached by the most recent forward.
  std::vector<const Matrix*> bn_inputs() const;
  std::vector<LayerShape> layer_shapes() const;

  /// FNV-1a over tag and parameter bytes; identifies the model by content.
  std::uint64_t fingerprint() const;

 private:
  std::string tag_;
  std::vector<std::unique_ptr<Layer>> layers_;
};

// ---- builders ------------------------------------------------------------

/// Tags accepted by build_classifier.
std::vector<std::string> classifier_registry();

/// Small classifiers; every architecture includes at least one BN layer.
Model build_classifier(const std::string& architecture_tag, int feature_dim,
                       int n_classes, std::uint64_t seed);

/// Label-conditional generator: input [noise | one-hot label] (or noise alone
/// when conditional=false), one hidden BN block, linear output of output_dim.
Model build_generator(int noise_dim, int n_classes, int output_dim,
                      std::uint64_t seed, bool conditional = true);

// ---- nnkit operations ------------------------------------------------------

/// Raw pre-softmax logits for a batch.
Matrix forward_logits(Model& model, const Matrix& batch, Mode mode);

struct LossGrad {
  double loss = 0.0;
  Matrix grad;  // w.r.t. the quantity named by the context
};

/// Composable loss description for loss_and_grad: an optional term on the
/// forward logits plus an optional term directly on the flat parameters.
struct LossSpec {
  std::function<LossGrad(const Matrix& logits)> output_term;
  std::function<LossGrad(std::span<const double> params)> param_term;
  Mode mode = Mode::train;
};

std::pair<double, std::vector<double>> loss_and_grad(Model& model,
                                                     const LossSpec& spec,
                                                     const Matrix& inputs);

BNStatSet bn_running_stats(const Model& model);

/// Biased per-column mean/variance of the activations entering each BN layer
/// when `batch` is pushed through in eval mode. Requires batch size >= 2.
BNStatSet bn_batch_stats(Model& model, const Matrix& batch);

// ---- checkpoints -----------------------------------------------------------

/// Writes manifest.json plus params.f64le (flat little-endian doubles:
/// parameters followed by BN running statistics) into `dir`.
void save_model(const Model& model, const std::string& dir,
                std::uint64_t seed = 0);
Model load_model(const std::string& dir);

}  // namespace osfl::nn
