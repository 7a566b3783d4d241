#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "osfl/matrix.hpp"
#include "osfl/nn.hpp"

namespace osfl::stratify {

/// Per-step cross-entropy values from one generator probe of one
/// (client, class) cell.
struct LossTrace {
  std::vector<double> values;  // length T_G
  int client_id = -1;
  int class_id = -1;
};

/// Raw capability matrix U (classes x clients) with its row- and
/// column-stochastic normalizations.
struct CapabilityMatrices {
  Matrix U;      // c x m, U(j, k) = u_{k,j}
  Matrix U_row;  // rows sum to 1: weights across clients per class
  Matrix U_col;  // columns sum to 1: weights across classes per client
  double epsilon = 1e-8;

  std::size_t n_classes() const { return U.rows(); }
  std::size_t n_clients() const { return U.cols(); }
};

/// Generator sizing used for capability probes and data generation.
struct GenArch {
  int noise_dim = 16;
  bool conditional = true;
};

/// Trains a fresh generator for T_G steps to synthesize class_j samples under
/// the client model's cross-entropy guidance, recording the loss at every
/// step. One noise batch is sampled up front and reused across all steps. The
/// client model is treated as read-only.
LossTrace guidance_loss_trace(const nn::Model& client_model, int class_j,
                              std::uint64_t gen_seed, int t_g_steps,
                              double eta_g, int batch,
                              const GenArch& arch = {});

/// Range-over-minimum capability statistic of a loss trace.
double guidance_capability(const LossTrace& trace, double epsilon);

/// Row/column normalization of a raw capability matrix. An all-zero row (no
/// client guided that class) falls back to uniform 1/m with a warning;
/// all-zero columns symmetrically fall back to 1/c.
CapabilityMatrices normalize_capabilities(const Matrix& u, double epsilon);

struct StratifyConfig {
  int t_g_steps = 30;    // generator steps per cell
  double eta_g = 0.01;   // generator learning rate
  int batch = 32;        // probe batch size
  double epsilon = 1e-8;
  GenArch gen;
  int threads = 1;
};

/// Model Stratification: probes every (client, class) cell and assembles the
/// capability matrices. Cells run independently; each cell's generator seed
/// is derived from the client model's content fingerprint and the class id,
/// so a permutation of the client list permutes the columns and nothing else.
CapabilityMatrices model_stratification(
    std::span<const nn::Model* const> client_models, int n_classes,
    const StratifyConfig& cfg, std::uint64_t seed);

/// Uniform matrices (1/m rows, 1/c columns) for baseline ensembling paths.
CapabilityMatrices uniform_capabilities(int n_classes, int n_clients);

/// c rows x m columns, header "client_0,client_1,...".
std::string caps_to_csv(const Matrix& m);
Matrix caps_from_csv(const std::string& text);

}  // namespace osfl::stratify
