#include "hidnet/classifier.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "hidnet/error.hpp"
#include "hidnet/rng.hpp"

namespace hidnet {

namespace {

Eigen::MatrixXd glorot(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Eigen::MatrixXd w(fan_in, fan_out);
  // Row-major fill order so the draw sequence is independent of storage order.
  for (Eigen::Index i = 0; i < fan_in; ++i)
    for (Eigen::Index j = 0; j < fan_out; ++j) w(i, j) = (2.0 * rng.uniform() - 1.0) * limit;
  return w;
}

// Inverted-dropout mask: 0 or 1/(1-p).
Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  const double keep = 1.0 / (1.0 - p);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform() < p ? 0.0 : keep;
  return m;
}

struct ForwardCache {
  FeatureMatrix input;  // X after dropout
  Eigen::MatrixXd pre;  // X W1 + b1
  Eigen::MatrixXd hidden_mask;
  Eigen::MatrixXd hidden;  // relu(pre) after dropout
  FeatureMatrix mlp_out;
  FeatureMatrix logits;
  bool dropped = false;
};

void check_dims(const FeatureMatrix& x, const MlpParams& p, const NormalizedOperator& op) {
  if (x.rows() != op.size()) {
    throw Error(ErrorKind::DimensionMismatch, "feature rows " + std::to_string(x.rows()) +
                                                  " differ from node count " +
                                                  std::to_string(op.size()));
  }
  if (x.cols() != p.input_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "feature columns " + std::to_string(x.cols()) +
                                                  " differ from input dimension " +
                                                  std::to_string(p.input_dim()));
  }
  validate_params(p);
}

ForwardCache run_forward(const FeatureMatrix& x, const MlpParams& p,
                         const NormalizedOperator& op, const DiffusionConfig& cfg,
                         bool training, std::uint64_t seed) {
  check_dims(x, p, op);
  ForwardCache c;
  c.dropped = training && p.dropout_rate > 0.0;
  Rng rng(seed);
  if (c.dropped) {
    c.input = x.cwiseProduct(dropout_mask(x.rows(), x.cols(), p.dropout_rate, rng));
  } else {
    c.input = x;
  }
  c.pre = c.input * p.w1;
  c.pre.rowwise() += p.b1;
  c.hidden = c.pre.cwiseMax(0.0);
  if (c.dropped) {
    c.hidden_mask = dropout_mask(c.hidden.rows(), c.hidden.cols(), p.dropout_rate, rng);
    c.hidden = c.hidden.cwiseProduct(c.hidden_mask);
  }
  c.mlp_out = c.hidden * p.w2;
  c.mlp_out.rowwise() += p.b2;
  c.logits = propagate(c.mlp_out, op, cfg);
  return c;
}

std::string mode_name(const PropagationMode& mode) {
  struct {
    std::string operator()(const HidMode&) const { return "hid"; }
    std::string operator()(const SgcMode&) const { return "sgc"; }
    std::string operator()(const AppnpMode&) const { return "appnp"; }
    std::string operator()(const GatMode&) const { return "gat"; }
    std::string operator()(const AmpMode&) const { return "amp"; }
    std::string operator()(const DagnnMode&) const { return "dagnn"; }
  } visitor;
  return std::visit(visitor, mode);
}

std::size_t mask_count(std::span<const char> mask) {
  std::size_t n = 0;
  for (char m : mask) n += m != 0;
  return n;
}

}  // namespace

MlpParams init_params(Eigen::Index input_dim, Eigen::Index hidden, Eigen::Index classes,
                      double dropout_rate, std::uint64_t seed) {
  if (input_dim <= 0 || hidden <= 0 || classes <= 0) {
    throw Error(ErrorKind::InvalidArgument, "layer sizes must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "dropout rate must be in [0, 1)");
  }
  Rng rng(seed);
  MlpParams p;
  p.w1 = glorot(input_dim, hidden, rng);
  p.b1 = Eigen::RowVectorXd::Zero(hidden);
  p.w2 = glorot(hidden, classes, rng);
  p.b2 = Eigen::RowVectorXd::Zero(classes);
  p.dropout_rate = dropout_rate;
  return p;
}

void validate_params(const MlpParams& p) {
  if (p.hidden_dim() <= 0 || p.w2.rows() != p.hidden_dim() || p.b1.size() != p.hidden_dim() ||
      p.b2.size() != p.num_classes()) {
    throw Error(ErrorKind::DimensionMismatch, "inconsistent parameter shapes");
  }
  if (!p.w1.allFinite() || !p.w2.allFinite() || !p.b1.allFinite() || !p.b2.allFinite()) {
    throw Error(ErrorKind::NonFinite, "non-finite parameter");
  }
  if (!(p.dropout_rate >= 0.0 && p.dropout_rate < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "dropout rate must be in [0, 1)");
  }
}

void validate(const TrainConfig& cfg) {
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate))
    throw Error(ErrorKind::InvalidArgument, "learning_rate must be >= 0");
  if (cfg.epochs < 1) throw Error(ErrorKind::InvalidArgument, "epochs must be >= 1");
  if (cfg.patience < 1) throw Error(ErrorKind::InvalidArgument, "patience must be >= 1");
  if (cfg.hidden < 1) throw Error(ErrorKind::InvalidArgument, "hidden must be >= 1");
  if (!(cfg.weight_decay >= 0.0)) throw Error(ErrorKind::InvalidArgument, "weight_decay < 0");
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0))
    throw Error(ErrorKind::InvalidArgument, "dropout must be in [0, 1)");
  if (!(cfg.adam_beta1 >= 0.0 && cfg.adam_beta1 < 1.0) ||
      !(cfg.adam_beta2 >= 0.0 && cfg.adam_beta2 < 1.0) || !(cfg.adam_eps > 0.0))
    throw Error(ErrorKind::InvalidArgument, "invalid Adam moments");
}

void validate_split(const LabeledSplit& split, Index n) {
  validate_labels(split.labels, n);
  const auto size = static_cast<std::size_t>(n);
  if (split.train.size() != size || split.val.size() != size || split.test.size() != size) {
    throw Error(ErrorKind::DimensionMismatch, "split masks must have one entry per node");
  }
  std::size_t train = 0;
  for (std::size_t i = 0; i < size; ++i) {
    const int used = (split.train[i] != 0) + (split.val[i] != 0) + (split.test[i] != 0);
    if (used > 1) {
      throw Error(ErrorKind::InvalidArgument,
                  "node " + std::to_string(i) + " belongs to more than one mask");
    }
    train += split.train[i] != 0;
  }
  if (train == 0) throw Error(ErrorKind::InvalidArgument, "empty training mask");
}

FeatureMatrix forward(const FeatureMatrix& x, const MlpParams& params,
                      const NormalizedOperator& op, const DiffusionConfig& cfg, bool training,
                      std::uint64_t seed) {
  return run_forward(x, params, op, cfg, training, seed).logits;
}

double cross_entropy(const FeatureMatrix& logits, const LabelVector& labels,
                     std::span<const char> mask) {
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const auto row = logits.row(static_cast<Eigen::Index>(i));
    const double top = row.maxCoeff();
    const double lse = top + std::log((row.array() - top).exp().sum());
    total += lse - row(labels.y[i]);
    ++count;
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

LossGradient loss_and_gradient(const FeatureMatrix& x, const MlpParams& params,
                               const NormalizedOperator& op, const DiffusionConfig& cfg,
                               const LabelVector& labels, std::span<const char> mask,
                               bool training, std::uint64_t seed) {
  if (labels.y.size() != static_cast<std::size_t>(x.rows()) || mask.size() != labels.y.size()) {
    throw Error(ErrorKind::DimensionMismatch, "labels or mask size differs from node count");
  }
  if (labels.num_classes != params.num_classes()) {
    throw Error(ErrorKind::DimensionMismatch, "class count differs from output dimension");
  }
  ForwardCache c = run_forward(x, params, op, cfg, training, seed);

  LossGradient out;
  out.loss = cross_entropy(c.logits, labels, mask);

  // d loss / d logits = (softmax - onehot) / |mask| on masked rows.
  const std::size_t count = mask_count(mask);
  FeatureMatrix d_logits = FeatureMatrix::Zero(c.logits.rows(), c.logits.cols());
  if (count > 0) {
    const double scale = 1.0 / static_cast<double>(count);
    const FeatureMatrix prob = softmax_rows(c.logits);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      const auto r = static_cast<Eigen::Index>(i);
      d_logits.row(r) = prob.row(r) * scale;
      d_logits(r, labels.y[i]) -= scale;
    }
  }

  // Propagation is linear in the MLP output: pull the residual back with Hᵀ.
  const FeatureMatrix d_out = propagate_transpose(d_logits, op, cfg);

  out.grad.w2 = c.hidden.transpose() * d_out;
  out.grad.b2 = d_out.colwise().sum();
  Eigen::MatrixXd d_hidden = d_out * params.w2.transpose();
  if (c.dropped) d_hidden = d_hidden.cwiseProduct(c.hidden_mask);
  d_hidden = (c.pre.array() > 0.0).select(d_hidden, 0.0);
  out.grad.w1 = c.input.transpose() * d_hidden;
  out.grad.b1 = d_hidden.colwise().sum();
  out.logits = std::move(c.logits);
  return out;
}

Gradients backward(const FeatureMatrix& x, const MlpParams& params, const NormalizedOperator& op,
                   const DiffusionConfig& cfg, const LabeledSplit& split) {
  return loss_and_gradient(x, params, op, cfg, split.labels, split.train).grad;
}

namespace {

struct AdamSlot {
  Eigen::MatrixXd m, v;
  explicit AdamSlot(Eigen::Index r, Eigen::Index c)
      : m(Eigen::MatrixXd::Zero(r, c)), v(Eigen::MatrixXd::Zero(r, c)) {}

  template <class Param, class Grad>
  void step(Param& p, const Grad& g, const TrainConfig& cfg, int t) {
    m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
    v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * g.cwiseAbs2();
    const double c1 = 1.0 - std::pow(cfg.adam_beta1, t);
    const double c2 = 1.0 - std::pow(cfg.adam_beta2, t);
    p.array() -= cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.adam_eps);
  }
};

}  // namespace

TrainResult train(const FeatureMatrix& x, const NormalizedOperator& op,
                  const LabeledSplit& split, const DiffusionConfig& cfg,
                  const TrainConfig& tc) {
  validate(tc);
  validate(cfg);
  validate_split(split, op.size());
  if (x.rows() != op.size()) {
    throw Error(ErrorKind::DimensionMismatch, "feature rows differ from node count");
  }

  MlpParams params = init_params(x.cols(), tc.hidden, split.labels.num_classes, tc.dropout,
                                 Rng::derive(tc.seed, 0));
  AdamSlot s_w1(params.w1.rows(), params.w1.cols()), s_b1(1, params.b1.size());
  AdamSlot s_w2(params.w2.rows(), params.w2.cols()), s_b2(1, params.b2.size());

  TrainResult result;
  result.params = params;
  double best_val_loss = std::numeric_limits<double>::infinity();
  bool have_best = false;
  int since_best = 0;

  for (int epoch = 0; epoch < tc.epochs; ++epoch) {
    LossGradient lg;
    try {
      lg = loss_and_gradient(x, params, op, cfg, split.labels, split.train, true,
                             Rng::derive(tc.seed, 1 + static_cast<std::uint64_t>(epoch)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonFinite) throw;
      throw Error(ErrorKind::Divergence, "non-finite values at epoch " + std::to_string(epoch) +
                                             ": " + e.what());
    }
    if (!std::isfinite(lg.loss)) {
      throw Error(ErrorKind::Divergence, "non-finite training loss at epoch " +
                                             std::to_string(epoch));
    }
    lg.grad.w1 += tc.weight_decay * params.w1;
    lg.grad.w2 += tc.weight_decay * params.w2;
    s_w1.step(params.w1, lg.grad.w1, tc, epoch + 1);
    s_b1.step(params.b1, lg.grad.b1, tc, epoch + 1);
    s_w2.step(params.w2, lg.grad.w2, tc, epoch + 1);
    s_b2.step(params.b2, lg.grad.b2, tc, epoch + 1);

    const FeatureMatrix logits = forward(x, params, op, cfg);
    const double val_acc = evaluate_mask(logits, split.labels, split.val).accuracy;
    const double val_loss = cross_entropy(logits, split.labels, split.val);
    result.history.push_back({epoch, lg.loss, val_acc});

    if (!have_best || val_acc > result.best_val_acc ||
        (val_acc == result.best_val_acc && val_loss < best_val_loss)) {
      have_best = true;
      result.best_val_acc = val_acc;
      best_val_loss = val_loss;
      result.best_epoch = epoch;
      result.params = params;
      since_best = 0;
    } else if (++since_best >= tc.patience) {
      break;
    }
  }
  return result;
}

ClassificationMetrics evaluate(const FeatureMatrix& logits, const LabeledSplit& split) {
  return evaluate_mask(logits, split.labels, split.test);
}

void write_history_csv(std::ostream& out, const std::vector<EpochRecord>& history) {
  out << "epoch,train_loss,val_acc\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : history) out << r.epoch << ',' << r.train_loss << ',' << r.val_acc << '\n';
}

void save_checkpoint(const std::string& path, const MlpParams& params,
                     const DiffusionConfig& cfg, const TrainConfig& tc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "hidnet-checkpoint 1\n";
  out << "mode " << mode_name(cfg.mode) << "\nalpha " << cfg.alpha << "\nbeta " << cfg.beta
      << "\ngamma " << cfg.gamma << "\ndt " << cfg.dt << "\nsteps " << cfg.steps
      << "\nlearning_rate " << tc.learning_rate << "\nweight_decay " << tc.weight_decay
      << "\nepochs " << tc.epochs << "\npatience " << tc.patience << "\nseed " << tc.seed
      << "\ndropout " << params.dropout_rate << "\n";
  auto dump = [&](const char* name, const auto& m) {
    out << "tensor " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
      out << '\n';
    }
  };
  dump("w1", params.w1);
  dump("b1", params.b1);
  dump("w2", params.w2);
  dump("b2", params.b2);
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path);
}

MlpParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::string key;
  int version = 0;
  if (!(in >> key >> version) || key != "hidnet-checkpoint" || version != 1) {
    throw Error(ErrorKind::Parse, path + ": not a checkpoint");
  }
  MlpParams p;
  int tensors = 0;
  while (in >> key) {
    if (key != "tensor") {
      std::string value;
      in >> value;
      if (key == "dropout") p.dropout_rate = std::stod(value);
      continue;
    }
    std::string name;
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> name >> rows >> cols) || rows < 0 || cols < 0) {
      throw Error(ErrorKind::Parse, path + ": bad tensor header");
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        if (!(in >> m(i, j))) throw Error(ErrorKind::Parse, path + ": truncated tensor " + name);
    if (name == "w1") p.w1 = m;
    else if (name == "w2") p.w2 = m;
    else if (name == "b1" && rows == 1) p.b1 = m.row(0);
    else if (name == "b2" && rows == 1) p.b2 = m.row(0);
    else throw Error(ErrorKind::Parse, path + ": unexpected tensor " + name);
    ++tensors;
  }
  if (tensors != 4) throw Error(ErrorKind::Parse, path + ": expected 4 tensors");
  validate_params(p);
  return p;
}

}  // namespace hidnet
