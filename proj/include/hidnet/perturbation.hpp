#pragma once

#include <cstdint>
#include <string>

#include "hidnet/graph.hpp"

namespace hidnet {

enum class AttackKind { EdgeAdd, EdgeDelete, FeatureNoise };

std::string to_string(AttackKind kind);
AttackKind parse_attack_kind(const std::string& name);

struct AttackSpec {
  AttackKind kind = AttackKind::EdgeAdd;
  double rate = 0.0;  // edge fraction, or noise ratio μ for feature noise
  std::uint64_t seed = 0;
};

struct EdgeAttackResult {
  Graph graph;
  std::size_t requested = 0;  // ⌈rate·|E|⌉
  std::size_t achieved = 0;
  bool feasible = true;  // false when deletion ran out of non-bridge candidates
};

// Adds ⌈rate·|E|⌉ uniformly sampled non-edges, or removes that many edges
// without increasing the number of connected components. A deletion shortfall
// is reported through `feasible`/`achieved`, not thrown.
EdgeAttackResult attack_edges(const Graph& g, const AttackSpec& spec);

// X + μ·r·M with r the mean over rows of the row maximum and M ~ N(0, 1).
FeatureMatrix attack_features(const FeatureMatrix& x, double mu, std::uint64_t seed);

}  // namespace hidnet
