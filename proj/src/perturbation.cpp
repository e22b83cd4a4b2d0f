#include "hidnet/perturbation.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include "hidnet/error.hpp"
#include "hidnet/rng.hpp"

namespace hidnet {

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::EdgeAdd: return "edge_add";
    case AttackKind::EdgeDelete: return "edge_delete";
    case AttackKind::FeatureNoise: return "feature_noise";
  }
  return "unknown";
}

AttackKind parse_attack_kind(const std::string& name) {
  if (name == "edge_add") return AttackKind::EdgeAdd;
  if (name == "edge_delete") return AttackKind::EdgeDelete;
  if (name == "feature_noise") return AttackKind::FeatureNoise;
  throw Error(ErrorKind::InvalidArgument, "unknown attack kind '" + name + "'");
}

namespace {

std::uint64_t key(Index u, Index v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

// Adjacency lists over the live edge set, with O(1) removal by id.
struct LiveGraph {
  std::vector<std::vector<std::pair<Index, std::size_t>>> adj;  // (neighbor, edge id)
  std::vector<char> alive;

  LiveGraph(Index n, const std::vector<Edge>& edges) : adj(n), alive(edges.size(), 1) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      adj[edges[e].u].push_back({edges[e].v, e});
      adj[edges[e].v].push_back({edges[e].u, e});
    }
  }

  // Is v reachable from u without using edge `skip`?
  bool connected_without(Index u, Index v, std::size_t skip, std::vector<int>& mark,
                         int stamp) const {
    std::vector<Index> stack{u};
    mark[u] = stamp;
    while (!stack.empty()) {
      const Index x = stack.back();
      stack.pop_back();
      for (auto [y, e] : adj[x]) {
        if (e == skip || !alive[e] || mark[y] == stamp) continue;
        if (y == v) return true;
        mark[y] = stamp;
        stack.push_back(y);
      }
    }
    return false;
  }
};

}  // namespace

EdgeAttackResult attack_edges(const Graph& g, const AttackSpec& spec) {
  if (spec.kind == AttackKind::FeatureNoise) {
    throw Error(ErrorKind::InvalidArgument, "attack_edges needs edge_add or edge_delete");
  }
  if (!(spec.rate >= 0.0 && spec.rate < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "edge attack rate must be in [0, 1)");
  }
  const auto& edges = g.edges();
  const Index n = g.num_nodes();
  EdgeAttackResult res;
  res.requested = static_cast<std::size_t>(
      std::ceil(spec.rate * static_cast<double>(edges.size()) - 1e-9));
  Rng rng(spec.seed);

  if (res.requested == 0) {
    res.graph = g;
    return res;
  }

  std::vector<Edge> out = edges;
  if (spec.kind == AttackKind::EdgeAdd) {
    const std::uint64_t possible =
        static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2 - edges.size();
    if (res.requested > possible) {
      throw Error(ErrorKind::Infeasible, "requested " + std::to_string(res.requested) +
                                             " new edges but only " + std::to_string(possible) +
                                             " non-edges exist");
    }
    std::unordered_set<std::uint64_t> present;
    present.reserve(edges.size() + res.requested);
    for (const auto& e : edges) present.insert(key(e.u, e.v));
    while (res.achieved < res.requested) {
      const auto u = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
      const auto v = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
      if (u == v || !present.insert(key(u, v)).second) continue;
      out.push_back({std::min(u, v), std::max(u, v)});
      ++res.achieved;
    }
    res.graph = build_graph(out, n);
    return res;
  }

  // Deletion: visit edges in a seeded random order; an edge is removed unless
  // it is currently a bridge. Removing a non-bridge never disconnects
  // anything, so the component count is preserved throughout.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  LiveGraph live(n, edges);
  std::vector<int> mark(n, 0);
  int stamp = 0;
  for (std::size_t e : order) {
    if (res.achieved == res.requested) break;
    if (live.connected_without(edges[e].u, edges[e].v, e, mark, ++stamp)) {
      live.alive[e] = 0;
      ++res.achieved;
    }
  }
  res.feasible = res.achieved == res.requested;
  std::vector<Edge> kept;
  kept.reserve(edges.size() - res.achieved);
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (live.alive[e]) kept.push_back(edges[e]);
  res.graph = build_graph(kept, n);
  return res;
}

FeatureMatrix attack_features(const FeatureMatrix& x, double mu, std::uint64_t seed) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorKind::InvalidArgument, "noise ratio must be finite and >= 0");
  }
  if (mu == 0.0 || x.size() == 0) return x;
  double r = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) r += x.row(i).maxCoeff();
  r /= static_cast<double>(x.rows());
  Rng rng(seed);
  FeatureMatrix out = x;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) += mu * r * rng.normal();
  return out;
}

}  // namespace hidnet
