#include "hidnet/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

#include "hidnet/error.hpp"
#include "hidnet/rng.hpp"

namespace hidnet {

CsrMatrix mean_attention(const Graph& g) {
  CsrMatrix f = g.augmented_adjacency();
  for (Index i = 0; i < f.rows; ++i) {
    const double inv = 1.0 / static_cast<double>(f.row_ptr[i + 1] - f.row_ptr[i]);
    for (auto k = f.row_ptr[i]; k < f.row_ptr[i + 1]; ++k) f.values[k] = inv;
  }
  return f;
}

DiffusionConfig bind_mode(const DiffusionConfig& cfg, const Graph& g) {
  DiffusionConfig out = cfg;
  if (auto* gat = std::get_if<GatMode>(&out.mode); gat && gat->attention.rows != g.num_nodes())
    gat->attention = mean_attention(g);
  return out;
}

std::pair<double, double> mean_std(std::vector<double> values) {
  if (values.empty()) return {0.0, 0.0};
  // Sorted first so the result does not depend on the order runs finished in.
  std::sort(values.begin(), values.end());
  RunningStats stats;
  for (double v : values) stats.add(v);
  return {stats.mean(), stats.stddev()};
}

namespace {

ClassificationMetrics train_and_test(const FeatureMatrix& x, const Graph& g,
                                     const LabeledSplit& split, const ExperimentConfig& cfg,
                                     std::uint64_t seed) {
  const NormalizedOperator op = normalize(g);
  const DiffusionConfig dc = bind_mode(cfg.diffusion, g);
  TrainConfig tc = cfg.train;
  tc.seed = seed;
  const TrainResult r = train(x, op, split, dc, tc);
  return evaluate(forward(x, r.params, op, dc), split);
}

SweepRow summarize(double x, const std::vector<ClassificationMetrics>& runs) {
  std::vector<double> acc;
  for (const auto& m : runs) acc.push_back(m.accuracy);
  const auto [mean, sd] = mean_std(acc);
  return {x, mean, sd, static_cast<int>(runs.size())};
}

void check_repeats(const ExperimentConfig& cfg) {
  if (cfg.repeats < 1) throw Error(ErrorKind::InvalidArgument, "repeats must be >= 1");
}

}  // namespace

RunSummary run_node_classification(const DatasetBundle& data, const ExperimentConfig& cfg) {
  check_repeats(cfg);
  RunSummary s;
  for (int r = 0; r < cfg.repeats; ++r) {
    s.runs.push_back(train_and_test(data.features, data.graph, data.split, cfg,
                                    Rng::derive(cfg.train.seed, static_cast<std::uint64_t>(r))));
  }
  std::vector<double> acc, f1_macro, f1_micro, auc;
  for (const auto& m : s.runs) {
    acc.push_back(m.accuracy);
    f1_macro.push_back(m.f1_macro);
    f1_micro.push_back(m.f1_micro);
    auc.push_back(m.auc);
  }
  std::tie(s.mean_accuracy, s.std_accuracy) = mean_std(acc);
  std::tie(s.mean_f1_micro, s.std_f1_micro) = mean_std(f1_micro);
  s.mean_f1_macro = mean_std(f1_macro).first;
  s.mean_auc = mean_std(auc).first;
  return s;
}

std::vector<SweepRow> run_oversmoothing_sweep(const DatasetBundle& data,
                                              const ExperimentConfig& cfg,
                                              const std::vector<int>& k_list) {
  if (k_list.empty()) throw Error(ErrorKind::InvalidArgument, "k list is empty");
  check_repeats(cfg);
  std::vector<SweepRow> rows;
  for (int k : k_list) {
    if (k < 0) throw Error(ErrorKind::InvalidArgument, "negative propagation depth");
    ExperimentConfig at = cfg;
    at.diffusion.steps = k;
    std::vector<ClassificationMetrics> runs;
    for (int r = 0; r < cfg.repeats; ++r) {
      runs.push_back(train_and_test(data.features, data.graph, data.split, at,
                                    Rng::derive(cfg.train.seed, static_cast<std::uint64_t>(r))));
    }
    rows.push_back(summarize(k, runs));
  }
  return rows;
}

std::vector<SweepRow> run_robustness_curve(const DatasetBundle& data, const ExperimentConfig& cfg,
                                           AttackKind kind, const std::vector<double>& rates) {
  if (rates.empty()) throw Error(ErrorKind::InvalidArgument, "rate list is empty");
  check_repeats(cfg);
  std::vector<SweepRow> rows;
  for (double rate : rates) {
    if (!(rate >= 0.0) || (kind != AttackKind::FeatureNoise && rate >= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "attack rate out of range");
    }
    std::vector<ClassificationMetrics> runs;
    for (int r = 0; r < cfg.repeats; ++r) {
      const auto run = static_cast<std::uint64_t>(r);
      const std::uint64_t train_seed = Rng::derive(cfg.train.seed, run);
      const std::uint64_t attack_seed = Rng::derive(cfg.train.seed ^ 0x9e3779b97f4a7c15ULL, run);
      if (rate == 0.0) {
        runs.push_back(train_and_test(data.features, data.graph, data.split, cfg, train_seed));
      } else if (kind == AttackKind::FeatureNoise) {
        const FeatureMatrix noisy = attack_features(data.features, rate, attack_seed);
        runs.push_back(train_and_test(noisy, data.graph, data.split, cfg, train_seed));
      } else {
        const auto attacked = attack_edges(data.graph, {kind, rate, attack_seed});
        runs.push_back(train_and_test(data.features, attacked.graph, data.split, cfg, train_seed));
      }
    }
    rows.push_back(summarize(rate, runs));
  }
  return rows;
}

std::vector<BenchRow> bench_propagation(const std::vector<Index>& n_list, double avg_degree,
                                        Index feature_dim, int steps, int reps,
                                        std::uint64_t seed) {
  if (steps < 1 || reps < 1 || feature_dim < 1) {
    throw Error(ErrorKind::InvalidArgument, "bench needs steps, reps and feature_dim >= 1");
  }
  std::vector<BenchRow> rows;
  for (std::size_t s = 0; s < n_list.size(); ++s) {
    const Index n = n_list[s];
    const Graph g = random_sparse_graph(n, avg_degree, Rng::derive(seed, s));
    const NormalizedOperator op = normalize(g);
    Rng rng(Rng::derive(seed, 1000 + s));
    FeatureMatrix x0(n, feature_dim);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < feature_dim; ++j) x0(i, j) = rng.normal();
    DiffusionConfig cfg;
    cfg.steps = steps;

    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < reps; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const FeatureMatrix y = propagate(x0, op, cfg);
      const auto t1 = std::chrono::steady_clock::now();
      if (!std::isfinite(y(0, 0))) throw Error(ErrorKind::NonFinite, "bench produced NaN");
      best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    rows.push_back({n, g.num_edges(), feature_dim, steps, best / steps});
  }
  return rows;
}

double scaling_exponent(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.n)), y = std::log(r.seconds_per_step);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(rows.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void write_sweep_csv(std::ostream& out, const char* x_name, const std::vector<SweepRow>& rows) {
  out << x_name << ",mean_acc,std_acc,repeats\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : rows)
    out << r.x << ',' << r.mean_accuracy << ',' << r.std_accuracy << ',' << r.repeats << '\n';
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "n,edges,feature_dim,steps,seconds_per_step\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.edges << ',' << r.feature_dim << ',' << r.steps << ','
        << r.seconds_per_step << '\n';
}

}  // namespace hidnet
