#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hidnet/sparse.hpp"

namespace hidnet {

struct Edge {
  Index u = 0;
  Index v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable undirected graph. Stores the deduplicated edge set (u < v, no
// self-loops) and the CSR pattern of Ã = A + I with unit weights.
class Graph {
 public:
  Graph() = default;

  Index num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  // Ã = A + I, values all 1, each row contains its diagonal exactly once.
  const CsrMatrix& augmented_adjacency() const { return adj_; }
  // d̃_i = Σ_j Ã_ij
  const std::vector<double>& degrees() const { return degrees_; }

  // 1-hop neighbors of i, excluding i itself.
  std::vector<Index> neighbors(Index i) const;
  bool has_edge(Index u, Index v) const;

 private:
  friend Graph build_graph(std::span<const Edge> edges, Index n);

  Index n_ = 0;
  std::vector<Edge> edges_;
  CsrMatrix adj_;
  std::vector<double> degrees_;
};

// Accepts duplicates, both orientations and self-loops; self-loops in the
// input are dropped before the identity is added.
Graph build_graph(std::span<const Edge> edges, Index n);

// Â = D̃^{-1/2} Ã D̃^{-1/2} and its square, computed once.
struct NormalizedOperator {
  CsrMatrix a_hat;
  CsrMatrix a_hat_sq;

  Index size() const { return a_hat.rows; }
};

NormalizedOperator normalize(const Graph& g);

struct NeighborSet {
  Index node = 0;
  int hop = 1;
  std::vector<Index> members;  // sorted
};

// Nodes at shortest-path distance exactly `hop` from `node`.
NeighborSet khop_neighbors(const Graph& g, Index node, int hop);

// Unweighted BFS distances from `source`, -1 beyond `max_depth` or unreachable.
std::vector<int> bfs_distances(const Graph& g, Index source, int max_depth);

std::size_t count_components(const Graph& g);

// Edge-list text: one `u<TAB>v` pair per line, 0-based, `#` starts a comment.
std::vector<Edge> read_edge_list(std::istream& in);
std::vector<Edge> read_edge_list(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list(const std::string& path, const Graph& g);

}  // namespace hidnet
