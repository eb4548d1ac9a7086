#include "gcn.hpp"

#include <cmath>
#include <json.hpp>
#include <random>
#include <string>

namespace fairgf {

namespace {

void check_chain(const Matrix& a_hat, const Matrix& features,
                 const GcnModel& model) {
  if (a_hat.rows() != a_hat.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "aggregation matrix not square");
  }
  if (features.rows() != a_hat.rows()) {
    throw Error(ErrorKind::dimension_mismatch,
                "feature rows " + std::to_string(features.rows()) +
                    " != number of nodes " + std::to_string(a_hat.rows()));
  }
  if (model.w0.rows() != features.cols() || model.w1.rows() != model.w0.cols() ||
      model.w1.cols() != 2) {
    throw Error(ErrorKind::dimension_mismatch,
                "weight shapes do not chain with the features");
  }
}

// Row-wise softmax with the usual max shift.
Matrix softmax_rows(const Matrix& logits) {
  Matrix probs(logits.rows(), logits.cols());
  for (int i = 0; i < logits.rows(); ++i) {
    const double shift = logits.row(i).maxCoeff();
    double denom = 0.0;
    for (int c = 0; c < logits.cols(); ++c) {
      probs(i, c) = std::exp(logits(i, c) - shift);
      denom += probs(i, c);
    }
    probs.row(i) /= denom;
  }
  return probs;
}

Matrix glorot(int rows, int cols, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix w(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      w(r, c) = dist(rng);
    }
  }
  return w;
}

}  // namespace

void TrainConfig::validate() const {
  if (hidden_dim < 1 || epochs < 1 || early_stop_patience < 1 ||
      !(learning_rate >= 0.0) || learning_rate >= 10.0 || weight_decay < 0.0) {
    throw Error(ErrorKind::invalid_config, "bad training configuration");
  }
}

GcnModel init_model(int input_dim, int hidden_dim, std::uint64_t seed) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw Error(ErrorKind::invalid_config, "model dimensions must be >= 1");
  }
  std::mt19937_64 rng(seed);
  GcnModel model;
  model.w0 = glorot(input_dim, hidden_dim, rng);
  model.w1 = glorot(hidden_dim, 2, rng);
  return model;
}

Matrix gcn_forward(const Matrix& a_hat, const Matrix& features,
                   const GcnModel& model) {
  check_chain(a_hat, features, model);
  const Matrix hidden =
      ((a_hat * features) * model.w0).cwiseMax(0.0);
  return (a_hat * hidden) * model.w1;
}

double gcn_loss(const Matrix& logits, const std::vector<int>& labels,
                const IndexSet& mask, const GcnModel& model,
                double weight_decay) {
  if (mask.empty()) {
    throw Error(ErrorKind::empty_mask, "loss mask is empty");
  }
  double total = 0.0;
  for (int i : mask) {
    if (i < 0 || i >= logits.rows() ||
        i >= static_cast<int>(labels.size())) {
      throw Error(ErrorKind::dimension_mismatch,
                  "mask index " + std::to_string(i) + " out of range");
    }
    const double shift = logits.row(i).maxCoeff();
    const double denom = std::exp(logits(i, 0) - shift) +
                         std::exp(logits(i, 1) - shift);
    total += -(logits(i, labels[i]) - shift - std::log(denom));
  }
  double loss = total / static_cast<double>(mask.size());
  loss += 0.5 * weight_decay *
          (model.w0.squaredNorm() + model.w1.squaredNorm());
  return loss;
}

GcnGradients gcn_gradients(const Matrix& a_hat, const Matrix& features,
                           const std::vector<int>& labels,
                           const IndexSet& mask, const GcnModel& model,
                           double weight_decay) {
  check_chain(a_hat, features, model);
  if (mask.empty()) {
    throw Error(ErrorKind::empty_mask, "loss mask is empty");
  }
  const Matrix ax = a_hat * features;          // N x F
  const Matrix pre = ax * model.w0;            // N x H
  const Matrix hidden = pre.cwiseMax(0.0);     // relu
  const Matrix ah = a_hat * hidden;            // N x H
  const Matrix logits = ah * model.w1;         // N x 2

  const Matrix probs = softmax_rows(logits);
  Matrix d_logits = Matrix::Zero(logits.rows(), 2);
  const double inv = 1.0 / static_cast<double>(mask.size());
  for (int i : mask) {
    d_logits(i, 0) = probs(i, 0) * inv;
    d_logits(i, 1) = probs(i, 1) * inv;
    d_logits(i, labels[i]) -= inv;
  }

  GcnGradients grads;
  // a_hat is symmetric, so A^T = A in the backward pass.
  const Matrix a_dlogits = a_hat * d_logits;   // N x 2
  grads.w1 = hidden.transpose() * a_dlogits + weight_decay * model.w1;
  Matrix d_hidden = a_dlogits * model.w1.transpose();
  // relu gradient; an exactly-zero preactivation counts as inactive.
  for (int i = 0; i < d_hidden.rows(); ++i) {
    for (int h = 0; h < d_hidden.cols(); ++h) {
      if (pre(i, h) <= 0.0) d_hidden(i, h) = 0.0;
    }
  }
  grads.w0 = ax.transpose() * d_hidden + weight_decay * model.w0;
  grads.loss = gcn_loss(logits, labels, mask, model, weight_decay);
  return grads;
}

GcnModel train_gcn(const Matrix& a_hat, const Matrix& features,
                   const std::vector<int>& labels, const IndexSet& train_mask,
                   const IndexSet& val_mask, const TrainConfig& cfg,
                   TrainHistory* history) {
  cfg.validate();
  if (train_mask.empty() || val_mask.empty()) {
    throw Error(ErrorKind::empty_mask, "train and validation masks must be non-empty");
  }
  GcnModel model = init_model(static_cast<int>(features.cols()),
                              cfg.hidden_dim, cfg.seed);

  auto val_accuracy = [&](const GcnModel& m) {
    return accuracy(predict(m, a_hat, features), labels, val_mask);
  };

  GcnModel best = model;
  double best_acc = val_accuracy(model);
  int best_epoch = -1;
  int stale = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const GcnGradients grads = gcn_gradients(a_hat, features, labels,
                                             train_mask, model,
                                             cfg.weight_decay);
    model.w0 -= cfg.learning_rate * grads.w0;
    model.w1 -= cfg.learning_rate * grads.w1;
    const double acc = val_accuracy(model);
    if (history) {
      history->loss.push_back(grads.loss);
      history->val_accuracy.push_back(acc);
    }
    if (acc > best_acc) {
      best_acc = acc;
      best = model;
      best_epoch = epoch;
      stale = 0;
    } else {
      stale += 1;
      if (stale >= cfg.early_stop_patience) break;
    }
  }
  if (history) history->best_epoch = best_epoch;
  return best;
}

std::vector<int> predict(const GcnModel& model, const Matrix& a_hat,
                         const Matrix& features) {
  const Matrix logits = gcn_forward(a_hat, features, model);
  std::vector<int> labels(logits.rows());
  for (int i = 0; i < logits.rows(); ++i) {
    labels[i] = logits(i, 1) > logits(i, 0) ? 1 : 0;
  }
  return labels;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& rows, int expected_cols) {
  const int r = static_cast<int>(rows.size());
  if (r == 0) {
    throw Error(ErrorKind::parse_error, "weight matrix has no rows");
  }
  const int c = static_cast<int>(rows.at(0).size());
  if (expected_cols >= 0 && c != expected_cols) {
    throw Error(ErrorKind::parse_error, "weight matrix column count mismatch");
  }
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows.at(i).size()) != c) {
      throw Error(ErrorKind::parse_error, "ragged weight matrix");
    }
    for (int j = 0; j < c; ++j) m(i, j) = rows.at(i).at(j).get<double>();
  }
  return m;
}

}  // namespace

std::string model_to_json(const GcnModel& model) {
  nlohmann::json j;
  j["input_dim"] = model.input_dim();
  j["hidden_dim"] = model.hidden_dim();
  j["num_classes"] = 2;
  j["w0"] = matrix_to_json(model.w0);
  j["w1"] = matrix_to_json(model.w1);
  return j.dump(2);
}

GcnModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse_error,
                std::string("model JSON is malformed: ") + e.what());
  }
  try {
    GcnModel model;
    model.w0 = matrix_from_json(j.at("w0"), -1);
    model.w1 = matrix_from_json(j.at("w1"), 2);
    if (model.w0.rows() != j.at("input_dim").get<int>() ||
        model.w0.cols() != j.at("hidden_dim").get<int>() ||
        model.w1.rows() != model.w0.cols()) {
      throw Error(ErrorKind::parse_error,
                  "model dimensions disagree with the stored weights");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error,
                std::string("model JSON is missing fields: ") + e.what());
  }
}

}  // namespace fairgf
