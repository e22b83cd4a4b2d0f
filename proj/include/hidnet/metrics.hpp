#pragma once

#include <span>
#include <vector>

#include "hidnet/homophily.hpp"
#include "hidnet/sparse.hpp"

namespace hidnet {

struct ClassificationMetrics {
  double accuracy = 0.0;
  double f1_macro = 0.0;
  double f1_micro = 0.0;
  double auc = 0.0;  // one-vs-rest ROC AUC, macro-averaged
  std::size_t support = 0;
};

// Row-wise argmax; the lowest class index wins ties.
std::vector<int> predict(const FeatureMatrix& logits);

FeatureMatrix softmax_rows(const FeatureMatrix& logits);

// Metrics over nodes with mask[i] != 0. Classes with no true instance in the
// mask are skipped in the macro averages.
ClassificationMetrics evaluate_mask(const FeatureMatrix& logits, const LabelVector& labels,
                                    std::span<const char> mask);

// Area under the ROC curve of `scores` for the positive set; ties count half
// (trapezoidal rule). Returns NaN when either class is empty.
double roc_auc(std::span<const double> scores, std::span<const char> positive);

// Welford running mean / variance (population variance, divisor n).
class RunningStats {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ ? m2_ / static_cast<double>(n_) : 0.0; }
  double stddev() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace hidnet
