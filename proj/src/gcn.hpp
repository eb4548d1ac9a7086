#pragma once

#include <cstdint>
#include <vector>

#include "metrics.hpp"

namespace fairgf {

/// Two-layer graph convolutional classifier for binary labels:
///   logits = A_hat * relu(A_hat * X * W0) * W1,
/// no bias terms, two output logits with softmax cross-entropy.
struct GcnModel {
  Matrix w0;  // F x H
  Matrix w1;  // H x 2

  int input_dim() const noexcept { return static_cast<int>(w0.rows()); }
  int hidden_dim() const noexcept { return static_cast<int>(w0.cols()); }
};

struct TrainConfig {
  int hidden_dim = 16;
  double learning_rate = 0.05;
  int epochs = 300;
  double weight_decay = 5e-4;
  std::uint64_t seed = 1;
  int early_stop_patience = 30;

  void validate() const;
};

/// Glorot-uniform init, entries in +-sqrt(6/(fan_in+fan_out)) per layer.
/// Bit-identical for the same (dims, seed).
GcnModel init_model(int input_dim, int hidden_dim, std::uint64_t seed);

/// N x 2 logits.
Matrix gcn_forward(const Matrix& a_hat, const Matrix& features,
                   const GcnModel& model);

/// Mean masked softmax cross-entropy plus (weight_decay/2) * ||W||_F^2 over
/// both layers.
double gcn_loss(const Matrix& logits, const std::vector<int>& labels,
                const IndexSet& mask, const GcnModel& model,
                double weight_decay);

struct GcnGradients {
  Matrix w0;
  Matrix w1;
  double loss = 0.0;  // loss at the evaluated weights
};

/// Analytic gradients of gcn_loss with respect to both weight matrices.
GcnGradients gcn_gradients(const Matrix& a_hat, const Matrix& features,
                           const std::vector<int>& labels,
                           const IndexSet& mask, const GcnModel& model,
                           double weight_decay);

struct TrainHistory {
  std::vector<double> loss;          // loss at the start of each epoch
  std::vector<double> val_accuracy;  // after each epoch's update
  int best_epoch = -1;               // -1 means the initial weights won
};

/// Full-batch gradient descent with early stopping on validation accuracy.
/// Returns the weights with the best validation accuracy seen (the initial
/// model counts). Deterministic under cfg.seed.
GcnModel train_gcn(const Matrix& a_hat, const Matrix& features,
                   const std::vector<int>& labels, const IndexSet& train_mask,
                   const IndexSet& val_mask, const TrainConfig& cfg,
                   TrainHistory* history = nullptr);

/// Argmax over the two logits per node; ties go to class 0.
std::vector<int> predict(const GcnModel& model, const Matrix& a_hat,
                         const Matrix& features);

/// Weights with explicit dimensions, full precision; the inverse of
/// model_from_json.
std::string model_to_json(const GcnModel& model);
GcnModel model_from_json(const std::string& text);

}  // namespace fairgf
