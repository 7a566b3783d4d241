#include "osfl/stratify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "osfl/losses.hpp"
#include "osfl/parallel.hpp"
#include "osfl/rng.hpp"

namespace osfl::stratify {

namespace {

/// Noise batch with every label fixed to class_j, one-hot appended when the
/// generator is conditional.
Matrix sample_probe_noise(Rng& rng, int batch, int noise_dim, int n_classes,
                          int class_j, bool conditional) {
  const int width = conditional ? noise_dim + n_classes : noise_dim;
  Matrix z(batch, width);
  for (int i = 0; i < batch; ++i) {
    double* row = z.row(i);
    for (int d = 0; d < noise_dim; ++d) row[d] = rng.normal();
    if (conditional) row[noise_dim + class_j] = 1.0;
  }
  return z;
}

}  // namespace

LossTrace guidance_loss_trace(const nn::Model& client_model, int class_j,
                              std::uint64_t gen_seed, int t_g_steps,
                              double eta_g, int batch, const GenArch& arch) {
  const int c = static_cast<int>(client_model.n_outputs());
  if (class_j < 0 || class_j >= c)
    throw std::invalid_argument("label-out-of-range: class_j");
  if (t_g_steps < 2) throw std::invalid_argument("invalid-argument: T_G must be >= 2");
  if (batch < 2) throw std::invalid_argument("batch-too-small: probe batch");

  const int out_dim = static_cast<int>(client_model.input_dim());
  nn::Model generator = nn::build_generator(arch.noise_dim, c, out_dim,
                                            gen_seed, arch.conditional);
  Rng rng(mix_seed(gen_seed, {0x70726f62ull}));
  const Matrix z = sample_probe_noise(rng, batch, arch.noise_dim, c, class_j,
                                      arch.conditional);
  const std::vector<int> y(batch, class_j);

  // guidance loop never mutates the client, so forward through a scratch copy
  nn::Model client = client_model;

  LossTrace trace;
  trace.values.reserve(t_g_steps);
  trace.class_id = class_j;
  for (int t = 0; t < t_g_steps; ++t) {
    const Matrix xhat = generator.forward(z, nn::Mode::train);
    const Matrix logits = client.forward(xhat, nn::Mode::eval);
    auto ce = losses::ce_softmax(logits, y);
    if (!std::isfinite(ce.loss))
      throw std::runtime_error("non-finite-loss: guidance trace class " +
                               std::to_string(class_j) + " step " +
                               std::to_string(t));
    trace.values.push_back(ce.loss);

    const Matrix dxhat = client.backward(ce.dlogits, nullptr,
                                         /*accumulate_param_grads=*/false);
    generator.zero_grad();
    generator.backward(dxhat);
    generator.sgd_step(eta_g);
  }
  return trace;
}

double guidance_capability(const LossTrace& trace, double epsilon) {
  if (trace.values.empty()) throw std::invalid_argument("invalid-argument: empty trace");
  if (epsilon <= 0.0) throw std::invalid_argument("invalid-argument: epsilon must be > 0");
  const auto [lo, hi] = std::minmax_element(trace.values.begin(), trace.values.end());
  return (*hi - *lo) / (*lo + epsilon);
}

CapabilityMatrices normalize_capabilities(const Matrix& u, double epsilon) {
  const std::size_t c = u.rows(), m = u.cols();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = u.data()[i];
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("invalid-argument: capability entries must be finite and >= 0");
  }

  CapabilityMatrices caps;
  caps.U = u;
  caps.epsilon = epsilon;
  caps.U_row = Matrix(c, m);
  caps.U_col = Matrix(c, m);

  for (std::size_t j = 0; j < c; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) sum += u(j, k);
    if (sum <= 0.0) {
      std::fprintf(stderr,
                   "warning: degenerate-row: class %zu has zero capability for "
                   "every client; using uniform weights\n",
                   j);
      for (std::size_t k = 0; k < m; ++k)
        caps.U_row(j, k) = 1.0 / static_cast<double>(m);
    } else {
      for (std::size_t k = 0; k < m; ++k) caps.U_row(j, k) = u(j, k) / sum;
    }
  }

  for (std::size_t k = 0; k < m; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += u(j, k);
    if (sum <= 0.0) {
      for (std::size_t j = 0; j < c; ++j)
        caps.U_col(j, k) = 1.0 / static_cast<double>(c);
    } else {
      for (std::size_t j = 0; j < c; ++j) caps.U_col(j, k) = u(j, k) / sum;
    }
  }
  return caps;
}

CapabilityMatrices model_stratification(
    std::span<const nn::Model* const> client_models, int n_classes,
    const StratifyConfig& cfg, std::uint64_t seed) {
  const std::size_t m = client_models.size();
  if (m == 0) throw std::invalid_argument("invalid-argument: no client models");
  for (const auto* model : client_models)
    if (model->n_outputs() != static_cast<std::size_t>(n_classes))
      throw std::invalid_argument("shape-mismatch: client outputs vs n_classes");

  Matrix u(n_classes, m);
  // cell seeds follow the model content, not its position in the list
  std::vector<std::uint64_t> fp(m);
  for (std::size_t k = 0; k < m; ++k) fp[k] = client_models[k]->fingerprint();

  parallel_for(m * n_classes, cfg.threads, [&](std::size_t cell) {
    const std::size_t k = cell / n_classes;
    const int j = static_cast<int>(cell % n_classes);
    const std::uint64_t cell_seed =
        mix_seed(seed, {fp[k], static_cast<std::uint64_t>(j)});
    const LossTrace trace =
        guidance_loss_trace(*client_models[k], j, cell_seed, cfg.t_g_steps,
                            cfg.eta_g, cfg.batch, cfg.gen);
    u(j, k) = guidance_capability(trace, cfg.epsilon);
  });

  return normalize_capabilities(u, cfg.epsilon);
}

CapabilityMatrices uniform_capabilities(int n_classes, int n_clients) {
  CapabilityMatrices caps;
  caps.U = Matrix(n_classes, n_clients, 1.0);
  caps.U_row = Matrix(n_classes, n_clients, 1.0 / n_clients);
  caps.U_col = Matrix(n_classes, n_clients, 1.0 / n_classes);
  return caps;
}

std::string caps_to_csv(const Matrix& m) {
  std::ostringstream os;
  for (std::size_t k = 0; k < m.cols(); ++k)
    os << (k ? "," : "") << "client_" << k;
  os << "\n";
  char buf[64];
  for (std::size_t j = 0; j < m.rows(); ++j) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
      std::snprintf(buf, sizeof buf, "%.12g", m(j, k));
      os << (k ? "," : "") << buf;
    }
    os << "\n";
  }
  return os.str();
}

Matrix caps_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("io-error: empty caps csv");
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("io-error: caps csv has no data rows");
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != m.cols())
      throw std::runtime_error("io-error: ragged caps csv");
    for (std::size_t k = 0; k < m.cols(); ++k) m(j, k) = rows[j][k];
  }
  return m;
}

}  // namespace osfl::stratify
