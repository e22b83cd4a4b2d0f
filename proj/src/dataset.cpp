#include "hidnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "hidnet/error.hpp"
#include "hidnet/matrix_io.hpp"
#include "hidnet/rng.hpp"

namespace fs = std::filesystem;

namespace hidnet {

void validate_bundle(const DatasetBundle& b) {
  const Index n = b.graph.num_nodes();
  if (b.features.rows() != n) {
    throw Error(ErrorKind::ShapeMismatch, "features have " + std::to_string(b.features.rows()) +
                                              " rows but the graph has " + std::to_string(n) +
                                              " nodes");
  }
  if (b.split.labels.y.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::ShapeMismatch, "labels have " +
                                              std::to_string(b.split.labels.y.size()) +
                                              " entries but the graph has " + std::to_string(n) +
                                              " nodes");
  }
  if (b.split.train.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::ShapeMismatch, "split has " + std::to_string(b.split.train.size()) +
                                              " entries but the graph has " + std::to_string(n) +
                                              " nodes");
  }
  if (!all_finite(b.features)) throw Error(ErrorKind::NonFinite, "non-finite feature value");
  validate_split(b.split, n);
}

namespace {

fs::path require(const fs::path& dir, const char* name) {
  fs::path p = dir / name;
  if (!fs::exists(p)) throw Error(ErrorKind::Io, "missing file " + p.string());
  return p;
}

}  // namespace

DatasetBundle load_dataset(const std::string& dir_str) {
  const fs::path dir(dir_str);
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "not a directory: " + dir_str);
  const auto edges_path = require(dir, "edges.tsv");
  const auto features_path = require(dir, "features.txt");
  const auto labels_path = require(dir, "labels.txt");
  const auto split_path = require(dir, "split.txt");

  DatasetBundle b;
  b.name = dir.filename().string();
  if (b.name.empty()) b.name = dir.parent_path().filename().string();
  b.features = read_matrix(features_path.string());

  {
    std::ifstream in(labels_path);
    long long v = 0;
    int max_label = -1;
    while (in >> v) {
      if (v < 0 || v > 1'000'000) {
        throw Error(ErrorKind::InvalidArgument, "label " + std::to_string(v) + " out of range");
      }
      b.split.labels.y.push_back(static_cast<int>(v));
      max_label = std::max(max_label, static_cast<int>(v));
    }
    if (!in.eof()) throw Error(ErrorKind::Parse, labels_path.string() + ": non-integer label");
    b.split.labels.num_classes = max_label + 1;
  }
  {
    std::ifstream in(split_path);
    std::string tok;
    while (in >> tok) {
      const char t = tok == "train", v = tok == "val", s = tok == "test";
      if (!t && !v && !s && tok != "none") {
        throw Error(ErrorKind::Parse, split_path.string() + ": unknown split token '" + tok + "'");
      }
      b.split.train.push_back(t);
      b.split.val.push_back(v);
      b.split.test.push_back(s);
    }
  }

  const auto n = static_cast<Index>(b.features.rows());
  if (b.split.labels.y.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::ShapeMismatch, "labels.txt has " +
                                              std::to_string(b.split.labels.y.size()) +
                                              " entries but features.txt has " +
                                              std::to_string(n) + " rows");
  }
  if (b.split.train.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::ShapeMismatch, "split.txt has " +
                                              std::to_string(b.split.train.size()) +
                                              " entries but features.txt has " +
                                              std::to_string(n) + " rows");
  }
  const auto edges = read_edge_list(edges_path.string());
  b.graph = build_graph(edges, n);
  validate_bundle(b);
  return b;
}

void save_dataset(const std::string& dir_str, const DatasetBundle& b) {
  validate_bundle(b);
  const fs::path dir(dir_str);
  fs::create_directories(dir);
  write_edge_list((dir / "edges.tsv").string(), b.graph);
  write_matrix((dir / "features.txt").string(), b.features);
  std::ofstream labels(dir / "labels.txt");
  for (int y : b.split.labels.y) labels << y << '\n';
  std::ofstream split(dir / "split.txt");
  for (std::size_t i = 0; i < b.split.train.size(); ++i) {
    split << (b.split.train[i] ? "train" : b.split.val[i] ? "val" : b.split.test[i] ? "test" : "none")
          << '\n';
  }
  if (!labels || !split) throw Error(ErrorKind::Io, "failed writing dataset to " + dir_str);
}

DatasetBundle generate_synthetic(const SyntheticSpec& s) {
  if (s.classes < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 classes");
  if (s.n < s.classes) {
    throw Error(ErrorKind::InvalidArgument, "n = " + std::to_string(s.n) + " is below the class count " +
                                                std::to_string(s.classes));
  }
  if (!(s.p_in >= 0.0 && s.p_in <= 1.0 && s.p_out >= 0.0 && s.p_out <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "p_in and p_out must be in [0, 1]");
  }
  if (s.feature_dim < s.classes) {
    throw Error(ErrorKind::InvalidArgument, "feature_dim must be at least the class count");
  }
  if (s.train_per_class < 1 || s.val_per_class < 0) {
    throw Error(ErrorKind::InvalidArgument, "invalid per-class split sizes");
  }

  const Index n = s.n;
  DatasetBundle b;
  b.name = "sbm";
  auto& labels = b.split.labels;
  labels.num_classes = s.classes;
  labels.y.resize(n);
  for (Index i = 0; i < n; ++i)
    labels.y[i] = static_cast<int>(static_cast<std::int64_t>(i) * s.classes / n);

  Rng graph_rng(Rng::derive(s.seed, 0));
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double p = labels.y[i] == labels.y[j] ? s.p_in : s.p_out;
      if (graph_rng.uniform() < p) edges.push_back({i, j});
    }
  }
  b.graph = build_graph(edges, n);

  Rng feature_rng(Rng::derive(s.seed, 1));
  b.features.resize(n, s.feature_dim);
  const double mean = s.signal / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < s.feature_dim; ++j) b.features(i, j) = feature_rng.normal();
    b.features(i, labels.y[i]) += mean;
  }

  Rng split_rng(Rng::derive(s.seed, 2));
  b.split.train.assign(n, 0);
  b.split.val.assign(n, 0);
  b.split.test.assign(n, 0);
  for (int c = 0; c < s.classes; ++c) {
    std::vector<Index> members;
    for (Index i = 0; i < n; ++i)
      if (labels.y[i] == c) members.push_back(i);
    for (std::size_t k = members.size(); k > 1; --k)
      std::swap(members[k - 1], members[split_rng.below(k)]);
    if (members.size() < static_cast<std::size_t>(s.train_per_class + s.val_per_class + 1)) {
      throw Error(ErrorKind::InvalidArgument, "class " + std::to_string(c) +
                                                  " is too small for the requested split");
    }
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto i = members[k];
      if (k < static_cast<std::size_t>(s.train_per_class)) b.split.train[i] = 1;
      else if (k < static_cast<std::size_t>(s.train_per_class + s.val_per_class)) b.split.val[i] = 1;
      else b.split.test[i] = 1;
    }
  }
  return b;
}

Graph random_sparse_graph(Index n, double avg_degree, std::uint64_t seed) {
  if (n < 2 || !(avg_degree > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "random graph needs n >= 2 and positive degree");
  }
  const auto target = static_cast<std::size_t>(std::llround(avg_degree * n / 2.0));
  const auto possible = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  if (target > possible) throw Error(ErrorKind::InvalidArgument, "degree too high for n");
  Rng rng(seed);
  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> edges;
  edges.reserve(target);
  while (edges.size() < target) {
    auto u = static_cast<Index>(rng.below(n)), v = static_cast<Index>(rng.below(n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (seen.insert((static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v)).second)
      edges.push_back({u, v});
  }
  return build_graph(edges, n);
}

}  // namespace hidnet
