#include "hidnet/random_walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hidnet/error.hpp"
#include "hidnet/rng.hpp"

namespace hidnet {

namespace {

constexpr std::int64_t kTrialsPerStream = 4096;

void require_distribution(const NormalizedOperator& op, const WalkKernel& k) {
  if (k.self_prob < 0.0 || k.restart_prob < 0.0 || k.first_weight < 0.0 || k.second_weight < 0.0) {
    throw Error(ErrorKind::NotStochastic,
                "walk weights must be non-negative; need (alpha+beta)*dt <= 1");
  }
  const auto mass = column_mass(op, k);
  for (std::size_t j = 0; j < mass.size(); ++j) {
    if (std::abs(mass[j] - 1.0) > 1e-9) {
      throw Error(ErrorKind::NotStochastic,
                  "column " + std::to_string(j) + " carries mass " + std::to_string(mass[j]) +
                      "; the walk is a distribution only on regular graphs");
    }
  }
}

// Draws i with probability m_ij / Σ_i m_ij. Â and Â² are symmetric, so
// column j is stored as row j.
Index sample_column(const CsrMatrix& m, Index j, double u) {
  const auto idx = m.row_indices(j);
  const auto val = m.row_values(j);
  double total = 0.0;
  for (double v : val) total += v;
  double target = u * total;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    target -= val[k];
    if (target < 0.0) return idx[k];
  }
  return idx.back();
}

struct Move {
  Index next;
  bool restarted;
};

Move transition(const NormalizedOperator& op, const WalkKernel& k, Index root, Index at, Rng& rng) {
  double u = rng.uniform();
  if (u < k.self_prob) return {at, false};
  u -= k.self_prob;
  if (u < k.restart_prob) return {root, true};
  u -= k.restart_prob;
  if (u < k.first_weight) return {sample_column(op.a_hat, at, rng.uniform()), false};
  return {sample_column(op.a_hat_sq, at, rng.uniform()), false};
}

}  // namespace

WalkKernel walk_kernel(const DiffusionConfig& cfg) {
  const StepCoefficients c = hid_coefficients(cfg);
  return {c.self, c.anchor, c.first, c.second};
}

std::vector<double> column_mass(const NormalizedOperator& op, const WalkKernel& k) {
  const auto first = op.a_hat.row_sums();
  const auto second = op.a_hat_sq.row_sums();
  std::vector<double> mass(op.size());
  for (Index j = 0; j < op.size(); ++j)
    mass[j] = k.self_prob + k.restart_prob + k.first_weight * first[j] + k.second_weight * second[j];
  return mass;
}

WalkTrace simulate_walk(const NormalizedOperator& op, const DiffusionConfig& cfg, Index root,
                        int steps, std::uint64_t seed) {
  if (root < 0 || root >= op.size()) throw Error(ErrorKind::IndexOutOfRange, "root out of range");
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "steps must be >= 0");
  const WalkKernel k = walk_kernel(cfg);
  require_distribution(op, k);
  WalkTrace trace{root, {root}, {}, seed};
  Rng rng(seed);
  Index at = root;
  for (int s = 1; s <= steps; ++s) {
    const Move m = transition(op, k, root, at, rng);
    if (m.restarted) trace.restarts.push_back(s);
    at = m.next;
    trace.positions.push_back(at);
  }
  return trace;
}

double expectation_equivalence(const NormalizedOperator& op, const DiffusionConfig& cfg,
                               const FeatureMatrix& x_0, int steps) {
  DiffusionConfig hid = cfg;
  hid.mode = HidMode{};
  hid.steps = steps;
  const PropagationKernel kernel = build_kernel(op, hid);
  const FeatureMatrix iterated = propagate(x_0, op, hid);
  const Eigen::MatrixXd via_kernel = kernel.h * Eigen::MatrixXd(x_0);
  return (Eigen::MatrixXd(iterated) - via_kernel).cwiseAbs().maxCoeff();
}

std::vector<double> monte_carlo_estimate(const Graph& g, const DiffusionConfig& cfg, Index root,
                                         int steps, std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "steps must be >= 0");
  if (root < 0 || root >= g.num_nodes()) throw Error(ErrorKind::IndexOutOfRange, "root out of range");
  validate(cfg);
  const NormalizedOperator op = normalize(g);
  const WalkKernel k = walk_kernel(cfg);
  require_distribution(op, k);

  const Index n = g.num_nodes();
  const std::int64_t blocks = (trials + kTrialsPerStream - 1) / kTrialsPerStream;
  std::vector<std::int64_t> counts(n, 0);

#pragma omp parallel
  {
    std::vector<std::int64_t> local(n, 0);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < blocks; ++b) {
      Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(b)));
      const std::int64_t end = std::min(trials, (b + 1) * kTrialsPerStream);
      for (std::int64_t t = b * kTrialsPerStream; t < end; ++t) {
        Index at = root;
        for (int s = 0; s < steps; ++s) at = transition(op, k, root, at, rng).next;
        ++local[at];
      }
    }
#pragma omp critical
    for (Index i = 0; i < n; ++i) counts[i] += local[i];
  }

  std::vector<double> freq(n);
  for (Index i = 0; i < n; ++i) freq[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
  return freq;
}

}  // namespace hidnet
