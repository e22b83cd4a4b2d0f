#include "hidnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hidnet/error.hpp"

namespace hidnet {

std::vector<int> predict(const FeatureMatrix& logits) {
  std::vector<int> out(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    int best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c)
      if (logits(i, c) > logits(i, best)) best = static_cast<int>(c);
    out[i] = best;
  }
  return out;
}

FeatureMatrix softmax_rows(const FeatureMatrix& logits) {
  FeatureMatrix p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double top = logits.row(i).maxCoeff();
    p.row(i) = (logits.row(i).array() - top).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

double roc_auc(std::span<const double> scores, std::span<const char> positive) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  // Mann–Whitney U with average ranks for ties.
  double rank_sum = 0.0;
  std::size_t pos = 0;
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi + 1 < order.size() && scores[order[hi + 1]] == scores[order[lo]]) ++hi;
    const double avg_rank = 0.5 * static_cast<double>(lo + hi) + 1.0;
    for (std::size_t k = lo; k <= hi; ++k) {
      if (positive[order[k]]) {
        rank_sum += avg_rank;
        ++pos;
      }
    }
    lo = hi + 1;
  }
  const std::size_t neg = scores.size() - pos;
  if (pos == 0 || neg == 0) return std::numeric_limits<double>::quiet_NaN();
  const double u = rank_sum - 0.5 * static_cast<double>(pos) * static_cast<double>(pos + 1);
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

ClassificationMetrics evaluate_mask(const FeatureMatrix& logits, const LabelVector& labels,
                                    std::span<const char> mask) {
  if (static_cast<std::size_t>(logits.rows()) != labels.y.size() ||
      mask.size() != labels.y.size()) {
    throw Error(ErrorKind::DimensionMismatch, "logits, labels and mask disagree on node count");
  }
  if (logits.cols() != labels.num_classes) {
    throw Error(ErrorKind::DimensionMismatch, "logit columns differ from class count");
  }
  const int classes = labels.num_classes;
  const auto pred = predict(logits);
  const FeatureMatrix prob = softmax_rows(logits);

  std::vector<std::size_t> tp(classes, 0), fp(classes, 0), fn(classes, 0);
  std::vector<std::size_t> nodes;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    nodes.push_back(i);
    const int y = labels.y[i], p = pred[i];
    if (y == p) {
      ++correct;
      ++tp[y];
    } else {
      ++fp[p];
      ++fn[y];
    }
  }
  ClassificationMetrics m;
  m.support = nodes.size();
  if (nodes.empty()) return m;

  m.accuracy = static_cast<double>(correct) / static_cast<double>(nodes.size());
  // Single-label multiclass: micro precision = micro recall = accuracy.
  m.f1_micro = m.accuracy;

  double f1_sum = 0.0, auc_sum = 0.0;
  int f1_classes = 0, auc_classes = 0;
  std::vector<double> scores(nodes.size());
  std::vector<char> positive(nodes.size());
  for (int c = 0; c < classes; ++c) {
    if (tp[c] + fn[c] == 0) continue;  // class absent from the mask
    const double precision = tp[c] + fp[c] ? double(tp[c]) / double(tp[c] + fp[c]) : 0.0;
    const double recall = double(tp[c]) / double(tp[c] + fn[c]);
    f1_sum += precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    ++f1_classes;

    for (std::size_t k = 0; k < nodes.size(); ++k) {
      scores[k] = prob(nodes[k], c);
      positive[k] = labels.y[nodes[k]] == c;
    }
    const double auc = roc_auc(scores, positive);
    if (!std::isnan(auc)) {
      auc_sum += auc;
      ++auc_classes;
    }
  }
  m.f1_macro = f1_classes ? f1_sum / f1_classes : 0.0;
  m.auc = auc_classes ? auc_sum / auc_classes : std::numeric_limits<double>::quiet_NaN();
  return m;
}

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::stddev() const { return std::sqrt(variance()); }

}  // namespace hidnet
