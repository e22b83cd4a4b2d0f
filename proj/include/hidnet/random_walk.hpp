#pragma once

#include <cstdint>
#include <vector>

#include "hidnet/diffusion.hpp"

namespace hidnet {

// Transition weights of the second-order walk with restart. From node j the
// walker stays with `self_prob`, teleports to its root with `restart_prob`,
// moves to i with first_weight·Â_ij or with second_weight·(Â²)_ij.
struct WalkKernel {
  double self_prob = 0.0;     // 1 - (α+β)Δt
  double restart_prob = 0.0;  // αΔt
  double first_weight = 0.0;  // (β - βγ)Δt
  double second_weight = 0.0; // βγΔt
};

WalkKernel walk_kernel(const DiffusionConfig& cfg);

// Total outgoing mass of every column (equals 1 only when Â has unit rowsums).
std::vector<double> column_mass(const NormalizedOperator& op, const WalkKernel& k);

struct WalkTrace {
  Index root = 0;
  std::vector<Index> positions;  // positions[0] == root
  std::vector<int> restarts;     // step indices at which the walker teleported
  std::uint64_t rng_seed = 0;
};

// Single seeded trajectory. Requires a proper distribution (see monte_carlo_estimate).
WalkTrace simulate_walk(const NormalizedOperator& op, const DiffusionConfig& cfg, Index root,
                        int steps, std::uint64_t seed);

// max |propagate(x_0) - H^(t) x_0| with H built by the kernel recursion (HID mode).
double expectation_equivalence(const NormalizedOperator& op, const DiffusionConfig& cfg,
                               const FeatureMatrix& x_0, int steps);

// Empirical distribution of X_steps given X_0 = root over `trials` walkers.
// Trials are grouped in fixed blocks, each with a stream derived from
// (seed, block), so the result does not depend on thread scheduling.
std::vector<double> monte_carlo_estimate(const Graph& g, const DiffusionConfig& cfg, Index root,
                                         int steps, std::int64_t trials, std::uint64_t seed);

}  // namespace hidnet
