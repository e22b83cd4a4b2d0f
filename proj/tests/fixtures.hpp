#pragma once

#include <Eigen/Dense>
#include <numeric>
#include <vector>

#include "hidnet/graph.hpp"
#include "hidnet/rng.hpp"

namespace fx {

using hidnet::Edge;
using hidnet::FeatureMatrix;
using hidnet::Graph;
using hidnet::Index;

inline std::vector<Edge> random_edges(Index n, double p, hidnet::Rng& rng) {
  std::vector<Edge> e;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (rng.uniform() < p) e.push_back({i, j});
  return e;
}

inline Graph random_graph(Index n, double p, std::uint64_t seed) {
  hidnet::Rng rng(seed);
  return hidnet::build_graph(random_edges(n, p, rng), n);
}

// Random graph that is connected (spanning path through a random permutation).
inline Graph random_connected(Index n, double p, std::uint64_t seed) {
  hidnet::Rng rng(seed);
  auto e = random_edges(n, p, rng);
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (Index k = n; k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
  for (Index k = 1; k < n; ++k) e.push_back({perm[k - 1], perm[k]});
  return hidnet::build_graph(e, n);
}

inline Graph chain(Index n) {
  std::vector<Edge> e;
  for (Index i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return hidnet::build_graph(e, n);
}

inline Graph cycle(Index n) {
  std::vector<Edge> e;
  for (Index i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return hidnet::build_graph(e, n);
}

inline FeatureMatrix random_matrix(Index n, Index q, std::uint64_t seed) {
  hidnet::Rng rng(seed);
  FeatureMatrix x(n, q);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < q; ++j) x(i, j) = rng.normal();
  return x;
}

// D̃^{-1/2}(A+I)D̃^{-1/2} built densely from the edge list.
inline Eigen::MatrixXd dense_a_hat(const Graph& g) {
  const Index n = g.num_nodes();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (const auto& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = 1.0;
  const Eigen::VectorXd d = a.rowwise().sum();
  const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  return s.asDiagonal() * a * s.asDiagonal();
}

// All-pairs hop distances by repeated relaxation (Floyd–Warshall), -1 = unreachable.
inline std::vector<std::vector<int>> all_distances(const Graph& g) {
  const Index n = g.num_nodes();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (Index i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (auto& row : d)
    for (auto& v : row)
      if (v >= inf) v = -1;
  return d;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  int components() {
    int c = 0;
    for (int i = 0; i < static_cast<int>(parent.size()); ++i) c += find(i) == i;
    return c;
  }
};

inline int components(const Graph& g) {
  UnionFind uf(g.num_nodes());
  for (const auto& e : g.edges()) uf.unite(e.u, e.v);
  return uf.components();
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace fx
