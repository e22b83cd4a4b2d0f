#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hidnet/classifier.hpp"
#include "hidnet/dataset.hpp"
#include "hidnet/perturbation.hpp"

namespace hidnet {

struct ExperimentConfig {
  DiffusionConfig diffusion;
  TrainConfig train;
  int repeats = 5;
};

// Row-normalized Ã (mean over N_1(i) ∪ {i}); the attention used for GAT mode
// when no learned attention is available.
CsrMatrix mean_attention(const Graph& g);

// Fills graph-dependent mode data (GAT attention) for `g`.
DiffusionConfig bind_mode(const DiffusionConfig& cfg, const Graph& g);

struct RunSummary {
  std::vector<ClassificationMetrics> runs;
  double mean_accuracy = 0.0, std_accuracy = 0.0;
  double mean_f1_macro = 0.0, mean_f1_micro = 0.0, std_f1_micro = 0.0;
  double mean_auc = 0.0;
};

// `repeats` trainings with seeds derived from train.seed; metrics on the test mask.
RunSummary run_node_classification(const DatasetBundle& data, const ExperimentConfig& cfg);

struct SweepRow {
  double x = 0.0;  // k or attack rate
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  int repeats = 0;
};

// Trains at each propagation depth; k = 0 is the plain MLP.
std::vector<SweepRow> run_oversmoothing_sweep(const DatasetBundle& data,
                                              const ExperimentConfig& cfg,
                                              const std::vector<int>& k_list);

// For each rate, `repeats` seeded attacks followed by retraining. Rate 0 is the
// clean baseline. Attack r uses the same seed for every mode, so different
// propagation modes see identical perturbations.
std::vector<SweepRow> run_robustness_curve(const DatasetBundle& data, const ExperimentConfig& cfg,
                                           AttackKind kind, const std::vector<double>& rates);

struct BenchRow {
  Index n = 0;
  std::size_t edges = 0;
  Index feature_dim = 0;
  int steps = 0;
  double seconds_per_step = 0.0;
};

// Times HID propagation steps on random sparse graphs. Graph construction and
// the Â² precompute are excluded; the fastest of `reps` runs is kept.
std::vector<BenchRow> bench_propagation(const std::vector<Index>& n_list, double avg_degree,
                                        Index feature_dim, int steps, int reps,
                                        std::uint64_t seed);

// Least-squares slope of log(seconds_per_step) against log(n).
double scaling_exponent(const std::vector<BenchRow>& rows);

// Population mean and standard deviation (Welford over the sorted values).
std::pair<double, double> mean_std(std::vector<double> values);

void write_sweep_csv(std::ostream& out, const char* x_name, const std::vector<SweepRow>& rows);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace hidnet
