#include "osfl/nn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "osfl/kernels.hpp"
#include "osfl/rng.hpp"

namespace osfl::nn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian");

namespace {
constexpr double kLeakySlope = 0.1;
}

// ---- Dense -----------------------------------------------------------------

Matrix Dense::forward(const Matrix& x, Mode) {
  if (x.cols() != in_) throw std::invalid_argument("shape-mismatch: dense input");
  x_cache_ = x;
  Matrix y = matmul_nt(x, w_);
  for (std::size_t i = 0; i < y.rows(); ++i)
    kernels::ops().axpy(1.0, b_.data(), y.row(i), out_);
  return y;
}

Matrix Dense::backward(const Matrix& dy, bool accumulate_param_grads) {
  const auto& k = kernels::ops();
  if (accumulate_param_grads) {
    for (std::size_t i = 0; i < dy.rows(); ++i)
      for (std::size_t o = 0; o < out_; ++o) {
        k.axpy(dy(i, o), x_cache_.row(i), dw_.row(o), in_);
        db_[o] += dy(i, o);
      }
  }
  return matmul_nn(dy, w_);
}

void Dense::get_params(double* dst) const {
  std::copy(w_.data(), w_.data() + w_.size(), dst);
  std::copy(b_.begin(), b_.end(), dst + w_.size());
}

void Dense::set_params(const double* src) {
  std::copy(src, src + w_.size(), w_.data());
  std::copy(src + w_.size(), src + w_.size() + b_.size(), b_.begin());
}

void Dense::get_grads(double* dst) const {
  std::copy(dw_.data(), dw_.data() + dw_.size(), dst);
  std::copy(db_.begin(), db_.end(), dst + dw_.size());
}

void Dense::zero_grad() {
  dw_.fill(0.0);
  std::fill(db_.begin(), db_.end(), 0.0);
}

// ---- BatchNorm ---------------------------------------------------------------

BatchNorm::BatchNorm(std::size_t width)
    : width_(width),
      gamma_(width, 1.0),
      beta_(width, 0.0),
      dgamma_(width, 0.0),
      dbeta_(width, 0.0),
      running_mean_(width, 0.0),
      running_var_(width, 1.0) {}

Matrix BatchNorm::forward(const Matrix& x, Mode mode) {
  if (x.cols() != width_) throw std::invalid_argument("shape-mismatch: batchnorm input");
  x_cache_ = x;
  mode_cache_ = mode;
  const std::size_t b = x.rows();
  Matrix y(b, width_);
  xhat_cache_ = Matrix(b, width_);
  inv_std_cache_.assign(width_, 0.0);

  std::vector<double> mean(width_, 0.0), var(width_, 0.0);
  if (mode == Mode::train) {
    if (b < 2) throw std::invalid_argument("batch-too-small: batchnorm train forward needs b >= 2");
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < width_; ++j) mean[j] += x(i, j);
    for (auto& v : mean) v /= static_cast<double>(b);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < width_; ++j) {
        const double d = x(i, j) - mean[j];
        var[j] += d * d;
      }
    for (auto& v : var) v /= static_cast<double>(b);
    for (std::size_t j = 0; j < width_; ++j) {
      running_mean_[j] = (1.0 - kMomentum) * running_mean_[j] + kMomentum * mean[j];
      running_var_[j] = (1.0 - kMomentum) * running_var_[j] + kMomentum * var[j];
    }
  } else {
    mean = running_mean_;
    var = running_var_;
  }

  for (std::size_t j = 0; j < width_; ++j)
    inv_std_cache_[j] = 1.0 / std::sqrt(var[j] + kEps);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < width_; ++j) {
      const double xh = (x(i, j) - mean[j]) * inv_std_cache_[j];
      xhat_cache_(i, j) = xh;
      y(i, j) = gamma_[j] * xh + beta_[j];
    }
  return y;
}

Matrix BatchNorm::backward(const Matrix& dy, bool accumulate_param_grads) {
  const std::size_t b = dy.rows();
  Matrix dx(b, width_);

  std::vector<double> sum_dy(width_, 0.0), sum_dy_xhat(width_, 0.0);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < width_; ++j) {
      sum_dy[j] += dy(i, j);
      sum_dy_xhat[j] += dy(i, j) * xhat_cache_(i, j);
    }

  if (accumulate_param_grads) {
    for (std::size_t j = 0; j < width_; ++j) {
      dgamma_[j] += sum_dy_xhat[j];
      dbeta_[j] += sum_dy[j];
    }
  }

  if (mode_cache_ == Mode::train) {
    // normalization couples the batch through the shared mean/variance
    const double inv_b = 1.0 / static_cast<double>(b);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < width_; ++j) {
        dx(i, j) = gamma_[j] * inv_std_cache_[j] *
                   (dy(i, j) - inv_b * sum_dy[j] -
                    xhat_cache_(i, j) * inv_b * sum_dy_xhat[j]);
      }
  } else {
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < width_; ++j)
        dx(i, j) = dy(i, j) * gamma_[j] * inv_std_cache_[j];
  }
  return dx;
}

void BatchNorm::get_params(double* dst) const {
  std::copy(gamma_.begin(), gamma_.end(), dst);
  std::copy(beta_.begin(), beta_.end(), dst + width_);
}

void BatchNorm::set_params(const double* src) {
  std::copy(src, src + width_, gamma_.begin());
  std::copy(src + width_, src + 2 * width_, beta_.begin());
}

void BatchNorm::get_grads(double* dst) const {
  std::copy(dgamma_.begin(), dgamma_.end(), dst);
  std::copy(dbeta_.begin(), dbeta_.end(), dst + width_);
}

void BatchNorm::zero_grad() {
  std::fill(dgamma_.begin(), dgamma_.end(), 0.0);
  std::fill(dbeta_.begin(), dbeta_.end(), 0.0);
}

void BatchNorm::get_state(double* dst) const {
  std::copy(running_mean_.begin(), running_mean_.end(), dst);
  std::copy(running_var_.begin(), running_var_.end(), dst + width_);
}

void BatchNorm::set_state(const double* src) {
  std::copy(src, src + width_, running_mean_.begin());
  std::copy(src + width_, src + 2 * width_, running_var_.begin());
}

// ---- LeakyRelu -----------------------------------------------------------

Matrix LeakyRelu::forward(const Matrix& x, Mode) {
  if (x.cols() != width_) throw std::invalid_argument("shape-mismatch: leaky_relu input");
  x_cache_ = x;
  Matrix y(x.rows(), x.cols());
  kernels::ops().leaky_relu(x.data(), y.data(), x.size(), slope_);
  return y;
}

Matrix LeakyRelu::backward(const Matrix& dy, bool) {
  Matrix dx(dy.rows(), dy.cols());
  kernels::ops().leaky_relu_grad(x_cache_.data(), dy.data(), dx.data(),
                                 dy.size(), slope_);
  return dx;
}

// ---- Conv1d ----------------------------------------------------------------

Conv1d::Conv1d(std::size_t length, std::size_t channels, std::size_t kernel)
    : length_(length),
      channels_(channels),
      kernel_(kernel),
      pad_(static_cast<int>(kernel / 2)),
      w_(channels * kernel, 0.0),
      b_(channels, 0.0),
      dw_(channels * kernel, 0.0),
      db_(channels, 0.0) {
  if (kernel % 2 == 0) throw std::invalid_argument("invalid-argument: conv1d kernel must be odd");
}

Matrix Conv1d::forward(const Matrix& x, Mode) {
  if (x.cols() != length_) throw std::invalid_argument("shape-mismatch: conv1d input");
  x_cache_ = x;
  const int L = static_cast<int>(length_);
  Matrix y(x.rows(), channels_ * length_);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double* xi = x.row(i);
    for (std::size_t ch = 0; ch < channels_; ++ch) {
      const double* wch = w_.data() + ch * kernel_;
      double* yo = y.row(i) + ch * length_;
      for (int t = 0; t < L; ++t) {
        double acc = b_[ch];
        for (int r = 0; r < static_cast<int>(kernel_); ++r) {
          const int p = t + r - pad_;
          if (p >= 0 && p < L) acc += wch[r] * xi[p];
        }
        yo[t] = acc;
      }
    }
  }
  return y;
}

Matrix Conv1d::backward(const Matrix& dy, bool accumulate_param_grads) {
  const int L = static_cast<int>(length_);
  Matrix dx(dy.rows(), length_);
  for (std::size_t i = 0; i < dy.rows(); ++i) {
    const double* xi = x_cache_.row(i);
    double* dxi = dx.row(i);
    for (std::size_t ch = 0; ch < channels_; ++ch) {
      const double* wch = w_.data() + ch * kernel_;
      const double* dyo = dy.row(i) + ch * length_;
      double* dwch = dw_.data() + ch * kernel_;
      for (int t = 0; t < L; ++t) {
        const double g = dyo[t];
        if (accumulate_param_grads) db_[ch] += g;
        for (int r = 0; r < static_cast<int>(kernel_); ++r) {
          const int p = t + r - pad_;
          if (p >= 0 && p < L) {
            if (accumulate_param_grads) dwch[r] += g * xi[p];
            dxi[p] += g * wch[r];
          }
        }
      }
    }
  }
  return dx;
}

void Conv1d::get_params(double* dst) const {
  std::copy(w_.begin(), w_.end(), dst);
  std::copy(b_.begin(), b_.end(), dst + w_.size());
}

void Conv1d::set_params(const double* src) {
  std::copy(src, src + w_.size(), w_.begin());
  std::copy(src + w_.size(), src + w_.size() + b_.size(), b_.begin());
}

void Conv1d::get_grads(double* dst) const {
  std::copy(dw_.begin(), dw_.end(), dst);
  std::copy(db_.begin(), db_.end(), dst + dw_.size());
}

void Conv1d::zero_grad() {
  std::fill(dw_.begin(), dw_.end(), 0.0);
  std::fill(db_.begin(), db_.end(), 0.0);
}

// ---- Model -----------------------------------------------------------------

Model::Model(std::string tag, std::vector<std::unique_ptr<Layer>> layers)
    : tag_(std::move(tag)), layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("invalid-argument: empty model");
}

Model& Model::operator=(const Model& o) {
  if (this == &o) return *this;
  tag_ = o.tag_;
  layers_.clear();
  layers_.reserve(o.layers_.size());
  for (const auto& l : o.layers_) layers_.push_back(l->clone());
  return *this;
}

Matrix Model::forward(const Matrix& x, Mode mode) {
  Matrix h = x;
  for (auto& l : layers_) h = l->forward(h, mode);
  return h;
}

Matrix Model::backward(const Matrix& dlogits,
                       const std::vector<Matrix>* bn_input_adjoints,
                       bool accumulate_param_grads) {
  if (bn_input_adjoints && bn_input_adjoints->size() != bn_layer_count())
    throw std::invalid_argument("shape-mismatch: bn adjoint count");
  // ordinal of each BN layer counted from the front
  std::size_t bn_remaining = bn_layer_count();
  Matrix adj = dlogits;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    adj = layers_[i]->backward(adj, accumulate_param_grads);
    if (layers_[i]->is_batchnorm()) {
      --bn_remaining;
      if (bn_input_adjoints) {
        const Matrix& extra = (*bn_input_adjoints)[bn_remaining];
        if (!extra.empty()) {
          if (!extra.same_shape(adj))
            throw std::invalid_argument("shape-mismatch: bn adjoint");
          adj += extra;
        }
      }
    }
  }
  return adj;
}

std::size_t Model::param_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l->param_count();
  return n;
}

std::vector<double> Model::parameters() const {
  std::vector<double> p(param_count());
  std::size_t off = 0;
  for (const auto& l : layers_) {
    l->get_params(p.data() + off);
    off += l->param_count();
  }
  return p;
}

void Model::set_parameters(std::span<const double> p) {
  if (p.size() != param_count())
    throw std::invalid_argument("shape-mismatch: parameter vector length");
  std::size_t off = 0;
  for (auto& l : layers_) {
    l->set_params(p.data() + off);
    off += l->param_count();
  }
}

std::vector<double> Model::gradients() const {
  std::vector<double> g(param_count());
  std::size_t off = 0;
  for (const auto& l : layers_) {
    l->get_grads(g.data() + off);
    off += l->param_count();
  }
  return g;
}

void Model::zero_grad() {
  for (auto& l : layers_) l->zero_grad();
}

std::size_t Model::state_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l->state_count();
  return n;
}

std::vector<double> Model::state() const {
  std::vector<double> s(state_count());
  std::size_t off = 0;
  for (const auto& l : layers_) {
    l->get_state(s.data() + off);
    off += l->state_count();
  }
  return s;
}

void Model::set_state(std::span<const double> s) {
  if (s.size() != state_count())
    throw std::invalid_argument("shape-mismatch: state vector length");
  std::size_t off = 0;
  for (auto& l : layers_) {
    l->set_state(s.data() + off);
    off += l->state_count();
  }
}

void Model::sgd_step(double lr) {
  auto p = parameters();
  const auto g = gradients();
  kernels::ops().axpy(-lr, g.data(), p.data(), p.size());
  set_parameters(p);
}

std::size_t Model::bn_layer_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_)
    if (l->is_batchnorm()) ++n;
  return n;
}

std::vector<const Matrix*> Model::bn_inputs() const {
  std::vector<const Matrix*> v;
  for (const auto& l : layers_)
    if (l->is_batchnorm())
      v.push_back(&static_cast<const BatchNorm*>(l.get())->cached_input());
  return v;
}

std::vector<LayerShape> Model::layer_shapes() const {
  std::vector<LayerShape> v;
  v.reserve(layers_.size());
  for (const auto& l : layers_) v.push_back(l->shape());
  return v;
}

std::uint64_t Model::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ull;
    }
  };
  feed(tag_.data(), tag_.size());
  const auto params = parameters();
  feed(params.data(), params.size() * sizeof(double));
  return h;
}

// ---- builders ------------------------------------------------------------

namespace {

void init_dense(Dense& d, Rng& rng) {
  const double std = std::sqrt(2.0 / static_cast<double>(d.input_dim()));
  auto& w = d.weights();
  for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = std * rng.normal();
  std::fill(d.bias().begin(), d.bias().end(), 0.0);
}

void init_conv(Conv1d& c, Rng& rng) {
  std::vector<double> p(c.param_count());
  const auto sh = c.shape();
  const std::size_t n_w = sh.dims[1] * sh.dims[2];
  const double std = std::sqrt(2.0 / static_cast<double>(sh.dims[2]));
  for (std::size_t i = 0; i < n_w; ++i) p[i] = std * rng.normal();
  c.set_params(p.data());
}

Model make_mlp(const std::string& tag, int in, int hidden, int out,
               std::uint64_t seed) {
  Rng rng(mix_seed(seed, {0x6d6c70ull}));
  std::vector<std::unique_ptr<Layer>> layers;
  auto d1 = std::make_unique<Dense>(in, hidden);
  init_dense(*d1, rng);
  layers.push_back(std::move(d1));
  layers.push_back(std::make_unique<BatchNorm>(hidden));
  layers.push_back(std::make_unique<LeakyRelu>(hidden, kLeakySlope));
  auto d2 = std::make_unique<Dense>(hidden, out);
  init_dense(*d2, rng);
  layers.push_back(std::move(d2));
  return Model(tag, std::move(layers));
}

}  // namespace

std::vector<std::string> classifier_registry() {
  return {"mlp_small", "mlp_wide", "conv_small"};
}

Model build_classifier(const std::string& architecture_tag, int feature_dim,
                       int n_classes, std::uint64_t seed) {
  if (feature_dim < 1 || n_classes < 2)
    throw std::invalid_argument("invalid-argument: classifier dims");
  if (architecture_tag == "mlp_small")
    return make_mlp(architecture_tag, feature_dim, 16, n_classes, seed);
  if (architecture_tag == "mlp_wide")
    return make_mlp(architecture_tag, feature_dim, 32, n_classes, seed);
  if (architecture_tag == "conv_small") {
    Rng rng(mix_seed(seed, {0x636e76ull}));
    std::vector<std::unique_ptr<Layer>> layers;
    const std::size_t channels = 4;
    auto conv = std::make_unique<Conv1d>(feature_dim, channels, 3);
    init_conv(*conv, rng);
    layers.push_back(std::move(conv));
    const std::size_t width = channels * feature_dim;
    layers.push_back(std::make_unique<BatchNorm>(width));
    layers.push_back(std::make_unique<LeakyRelu>(width, kLeakySlope));
    auto head = std::make_unique<Dense>(width, n_classes);
    init_dense(*head, rng);
    layers.push_back(std::move(head));
    return Model(architecture_tag, std::move(layers));
  }
  throw std::invalid_argument("unknown-architecture: " + architecture_tag);
}

Model build_generator(int noise_dim, int n_classes, int output_dim,
                      std::uint64_t seed, bool conditional) {
  if (noise_dim < 1 || output_dim < 1 || n_classes < 1)
    throw std::invalid_argument("invalid-argument: generator dims");
  const int in = conditional ? noise_dim + n_classes : noise_dim;
  return make_mlp(conditional ? "gen_mlp" : "gen_mlp_uncond", in, 32,
                  output_dim, mix_seed(seed, {0x67656eull}));
}

// ---- nnkit operations --------------------------------------------------------

Matrix forward_logits(Model& model, const Matrix& batch, Mode mode) {
  if (batch.cols() != model.input_dim())
    throw std::invalid_argument("shape-mismatch: batch width " +
                                std::to_string(batch.cols()) + " vs model input " +
                                std::to_string(model.input_dim()));
  return model.forward(batch, mode);
}

std::pair<double, std::vector<double>> loss_and_grad(Model& model,
                                                     const LossSpec& spec,
                                                     const Matrix& inputs) {
  model.zero_grad();
  double loss = 0.0;
  std::vector<double> grad(model.param_count(), 0.0);

  if (spec.output_term) {
    const Matrix logits = forward_logits(model, inputs, spec.mode);
    LossGrad lg = spec.output_term(logits);
    loss += lg.loss;
    model.backward(lg.grad);
    grad = model.gradients();
  }
  if (spec.param_term) {
    const auto params = model.parameters();
    LossGrad lg = spec.param_term(params);
    loss += lg.loss;
    if (!lg.grad.empty()) {
      if (lg.grad.size() != grad.size())
        throw std::invalid_argument("shape-mismatch: param_term gradient length");
      kernels::ops().axpy(1.0, lg.grad.data(), grad.data(), grad.size());
    }
  }
  if (!std::isfinite(loss))
    throw std::runtime_error("non-finite-loss: loss_and_grad");
  return {loss, std::move(grad)};
}

BNStatSet bn_running_stats(const Model& model) {
  BNStatSet out;
  for (std::size_t i = 0; i < model.n_layers(); ++i) {
    const Layer& l = model.layer(i);
    if (l.is_batchnorm()) {
      const auto& bn = static_cast<const BatchNorm&>(l);
      out.layers.push_back({bn.running_mean(), bn.running_var()});
    }
  }
  if (out.layers.empty())
    throw std::invalid_argument("no-bn-layers: model has no batchnorm layer");
  return out;
}

BNStatSet bn_batch_stats(Model& model, const Matrix& batch) {
  if (batch.rows() < 2)
    throw std::invalid_argument("batch-too-small: bn_batch_stats needs b >= 2");
  if (model.bn_layer_count() == 0)
    throw std::invalid_argument("no-bn-layers: model has no batchnorm layer");
  (void)forward_logits(model, batch, Mode::eval);
  BNStatSet out;
  for (const Matrix* act : model.bn_inputs()) {
    const std::size_t b = act->rows(), w = act->cols();
    BNStatSet::LayerStats st;
    st.mean.assign(w, 0.0);
    st.var.assign(w, 0.0);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < w; ++j) st.mean[j] += (*act)(i, j);
    for (auto& v : st.mean) v /= static_cast<double>(b);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < w; ++j) {
        const double d = (*act)(i, j) - st.mean[j];
        st.var[j] += d * d;
      }
    for (auto& v : st.var) v /= static_cast<double>(b);
    out.layers.push_back(std::move(st));
  }
  return out;
}

// ---- checkpoints -----------------------------------------------------------

namespace {

std::unique_ptr<Layer> layer_from_shape(const LayerShape& sh) {
  if (sh.name == "dense") return std::make_unique<Dense>(sh.dims[0], sh.dims[1]);
  if (sh.name == "batchnorm") return std::make_unique<BatchNorm>(sh.dims[0]);
  if (sh.name == "leaky_relu")
    return std::make_unique<LeakyRelu>(sh.dims[0], kLeakySlope);
  if (sh.name == "conv1d")
    return std::make_unique<Conv1d>(sh.dims[0], sh.dims[1], sh.dims[2]);
  throw std::runtime_error("io-error: unknown layer kind '" + sh.name + "'");
}

}  // namespace

void save_model(const Model& model, const std::string& dir,
                std::uint64_t seed) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);

  nlohmann::json manifest;
  manifest["architecture_tag"] = model.architecture_tag();
  manifest["seed"] = seed;
  manifest["param_count"] = model.param_count();
  manifest["state_count"] = model.state_count();
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& sh : model.layer_shapes())
    layers.push_back({{"name", sh.name}, {"dims", sh.dims}});
  manifest["layers"] = layers;

  {
    std::ofstream f(dir + "/manifest.json");
    if (!f) throw std::runtime_error("io-error: cannot write " + dir + "/manifest.json");
    f << manifest.dump(2) << "\n";
  }
  {
    std::ofstream f(dir + "/params.f64le", std::ios::binary);
    if (!f) throw std::runtime_error("io-error: cannot write " + dir + "/params.f64le");
    const auto p = model.parameters();
    const auto s = model.state();
    f.write(reinterpret_cast<const char*>(p.data()),
            static_cast<std::streamsize>(p.size() * sizeof(double)));
    f.write(reinterpret_cast<const char*>(s.data()),
            static_cast<std::streamsize>(s.size() * sizeof(double)));
  }
}

Model load_model(const std::string& dir) {
  std::ifstream mf(dir + "/manifest.json");
  if (!mf) throw std::runtime_error("io-error: cannot read " + dir + "/manifest.json");
  nlohmann::json manifest;
  mf >> manifest;

  std::vector<std::unique_ptr<Layer>> layers;
  for (const auto& jl : manifest.at("layers")) {
    LayerShape sh;
    sh.name = jl.at("name").get<std::string>();
    sh.dims = jl.at("dims").get<std::vector<std::size_t>>();
    layers.push_back(layer_from_shape(sh));
  }
  Model model(manifest.at("architecture_tag").get<std::string>(), std::move(layers));

  const std::size_t n_p = manifest.at("param_count").get<std::size_t>();
  const std::size_t n_s = manifest.at("state_count").get<std::size_t>();
  if (n_p != model.param_count() || n_s != model.state_count())
    throw std::runtime_error("io-error: manifest counts do not match layers");

  std::ifstream pf(dir + "/params.f64le", std::ios::binary);
  if (!pf) throw std::runtime_error("io-error: cannot read " + dir + "/params.f64le");
  std::vector<double> buf(n_p + n_s);
  pf.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (static_cast<std::size_t>(pf.gcount()) != buf.size() * sizeof(double))
    throw std::runtime_error("io-error: truncated params.f64le");

  model.set_parameters(std::span<const double>(buf.data(), n_p));
  model.set_state(std::span<const double>(buf.data() + n_p, n_s));
  return model;
}

}  // namespace osfl::nn
