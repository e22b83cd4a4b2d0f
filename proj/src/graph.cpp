#include "hidnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

#include "hidnet/error.hpp"

namespace hidnet {

std::vector<Index> Graph::neighbors(Index i) const {
  if (i < 0 || i >= n_) {
    throw Error(ErrorKind::IndexOutOfRange, "node " + std::to_string(i) + " out of range");
  }
  std::vector<Index> out;
  for (Index j : adj_.row_indices(i))
    if (j != i) out.push_back(j);
  return out;
}

bool Graph::has_edge(Index u, Index v) const {
  if (u == v) return false;
  return adj_.at(u, v) != 0.0;
}

Graph build_graph(std::span<const Edge> edges, Index n) {
  if (n <= 0) throw Error(ErrorKind::InvalidArgument, "graph needs at least one node");

  Graph g;
  g.n_ = n;
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw Error(ErrorKind::IndexOutOfRange,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") outside [0," + std::to_string(n) + ")");
    }
    if (e.u == e.v) continue;
    g.edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  std::vector<std::vector<Index>> rows(n);
  for (Index i = 0; i < n; ++i) rows[i].push_back(i);
  for (const Edge& e : g.edges_) {
    rows[e.u].push_back(e.v);
    rows[e.v].push_back(e.u);
  }

  CsrMatrix& adj = g.adj_;
  adj.rows = adj.cols = n;
  adj.row_ptr.assign(1, 0);
  g.degrees_.resize(n);
  for (Index i = 0; i < n; ++i) {
    std::sort(rows[i].begin(), rows[i].end());
    adj.col_idx.insert(adj.col_idx.end(), rows[i].begin(), rows[i].end());
    adj.values.insert(adj.values.end(), rows[i].size(), 1.0);
    adj.row_ptr.push_back(static_cast<std::int64_t>(adj.col_idx.size()));
    g.degrees_[i] = static_cast<double>(rows[i].size());
  }
  return g;
}

NormalizedOperator normalize(const Graph& g) {
  const CsrMatrix& adj = g.augmented_adjacency();
  const auto& deg = g.degrees();
  std::vector<double> inv_sqrt(deg.size());
  std::transform(deg.begin(), deg.end(), inv_sqrt.begin(),
                 [](double d) { return 1.0 / std::sqrt(d); });

  NormalizedOperator op;
  op.a_hat = adj;
  for (Index i = 0; i < adj.rows; ++i) {
    for (std::int64_t k = adj.row_ptr[i]; k < adj.row_ptr[i + 1]; ++k) {
      op.a_hat.values[k] = adj.values[k] * inv_sqrt[i] * inv_sqrt[adj.col_idx[k]];
    }
  }
  op.a_hat_sq = multiply(op.a_hat, op.a_hat);
  return op;
}

std::vector<int> bfs_distances(const Graph& g, Index source, int max_depth) {
  const Index n = g.num_nodes();
  if (source < 0 || source >= n) {
    throw Error(ErrorKind::IndexOutOfRange, "node " + std::to_string(source) + " out of range");
  }
  const CsrMatrix& adj = g.augmented_adjacency();
  std::vector<int> dist(n, -1);
  std::queue<Index> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const Index u = frontier.front();
    frontier.pop();
    if (dist[u] >= max_depth) continue;
    for (Index v : adj.row_indices(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

NeighborSet khop_neighbors(const Graph& g, Index node, int hop) {
  if (hop < 1) throw Error(ErrorKind::InvalidArgument, "hop must be >= 1");
  const auto dist = bfs_distances(g, node, hop);
  NeighborSet set{node, hop, {}};
  for (Index v = 0; v < g.num_nodes(); ++v)
    if (dist[v] == hop) set.members.push_back(v);
  return set;
}

std::size_t count_components(const Graph& g) {
  const Index n = g.num_nodes();
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = static_cast<std::size_t>(n);
  for (const Edge& e : g.edges()) {
    const Index a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

std::vector<Edge> read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long long u = 0, v = 0;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra)) {
      throw Error(ErrorKind::Parse, "edge list line " + std::to_string(line_no) +
                                        ": expected two integer node ids");
    }
    edges.push_back({static_cast<Index>(u), static_cast<Index>(v)});
  }
  return edges;
}

std::vector<Edge> read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open edge list " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const Edge& e : g.edges()) out << e.u << '\t' << e.v << '\n';
}

void write_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write edge list " + path);
  write_edge_list(out, g);
}

}  // namespace hidnet
