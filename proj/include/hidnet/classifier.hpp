#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hidnet/diffusion.hpp"
#include "hidnet/homophily.hpp"
#include "hidnet/metrics.hpp"

namespace hidnet {

// Two-layer perceptron: relu(X W1 + b1) W2 + b2.
struct MlpParams {
  Eigen::MatrixXd w1;     // q × h
  Eigen::RowVectorXd b1;  // h
  Eigen::MatrixXd w2;     // h × C
  Eigen::RowVectorXd b2;  // C
  double dropout_rate = 0.0;

  Eigen::Index input_dim() const { return w1.rows(); }
  Eigen::Index hidden_dim() const { return w1.cols(); }
  Eigen::Index num_classes() const { return w2.cols(); }
};

// Glorot-uniform weights in ±sqrt(6/(fan_in+fan_out)), zero biases.
MlpParams init_params(Eigen::Index input_dim, Eigen::Index hidden, Eigen::Index classes,
                      double dropout_rate, std::uint64_t seed);

void validate_params(const MlpParams& params);

struct TrainConfig {
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  int epochs = 1000;
  int patience = 100;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int hidden = 64;
  double dropout = 0.5;
  std::uint64_t seed = 0;
};

void validate(const TrainConfig& cfg);

struct LabeledSplit {
  LabelVector labels;
  std::vector<char> train, val, test;
};

// Masks match the label count, are pairwise disjoint, and train is nonempty.
void validate_split(const LabeledSplit& split, Index n);

// logits = propagate(MLP(X)). With `training` set, inverted dropout is applied
// to the input and hidden activations using masks drawn from `seed`.
FeatureMatrix forward(const FeatureMatrix& x, const MlpParams& params,
                      const NormalizedOperator& op, const DiffusionConfig& cfg,
                      bool training = false, std::uint64_t seed = 0);

struct Gradients {
  Eigen::MatrixXd w1;
  Eigen::RowVectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::RowVectorXd b2;
};

struct LossGradient {
  double loss = 0.0;
  Gradients grad;
  FeatureMatrix logits;
};

// Mean softmax cross-entropy over the nodes in `mask`, and its exact gradient.
// Dropout masks are the ones `forward` draws for the same (training, seed).
LossGradient loss_and_gradient(const FeatureMatrix& x, const MlpParams& params,
                               const NormalizedOperator& op, const DiffusionConfig& cfg,
                               const LabelVector& labels, std::span<const char> mask,
                               bool training = false, std::uint64_t seed = 0);

// Gradient of the training-mask loss without dropout.
Gradients backward(const FeatureMatrix& x, const MlpParams& params, const NormalizedOperator& op,
                   const DiffusionConfig& cfg, const LabeledSplit& split);

double cross_entropy(const FeatureMatrix& logits, const LabelVector& labels,
                     std::span<const char> mask);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainResult {
  MlpParams params;  // parameters at the best validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_acc = 0.0;
};

// Adam with L2 weight decay on the weight matrices. Stops after `patience`
// epochs without a better validation accuracy (ties go to lower validation
// loss). Throws Divergence on a non-finite loss.
TrainResult train(const FeatureMatrix& x, const NormalizedOperator& op,
                  const LabeledSplit& split, const DiffusionConfig& cfg,
                  const TrainConfig& train_cfg);

// Test-mask metrics.
ClassificationMetrics evaluate(const FeatureMatrix& logits, const LabeledSplit& split);

void write_history_csv(std::ostream& out, const std::vector<EpochRecord>& history);

// Text checkpoint: a `key value` config block followed by each tensor as
// `name rows cols` and its values.
void save_checkpoint(const std::string& path, const MlpParams& params,
                     const DiffusionConfig& cfg, const TrainConfig& train_cfg);
MlpParams load_checkpoint(const std::string& path);

}  // namespace hidnet
