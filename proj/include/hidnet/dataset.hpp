#pragma once

#include <cstdint>
#include <string>

#include "hidnet/classifier.hpp"
#include "hidnet/graph.hpp"

namespace hidnet {

struct DatasetBundle {
  std::string name;
  Graph graph;
  FeatureMatrix features;
  LabeledSplit split;
};

// Node counts agree across graph, features, labels and masks; masks disjoint.
void validate_bundle(const DatasetBundle& bundle);

// Reads edges.tsv, features.txt, labels.txt and split.txt from `dir`.
// The class count is one more than the largest label.
DatasetBundle load_dataset(const std::string& dir);
void save_dataset(const std::string& dir, const DatasetBundle& bundle);

// Stochastic block model with contiguous equal-size blocks, one per class.
// Class c has feature mean (signal/√2)·e_c, so class means are `signal`
// apart, plus N(0, 1) noise in every coordinate.
struct SyntheticSpec {
  Index n = 600;
  int classes = 3;
  double p_in = 0.05;
  double p_out = 0.01;
  Index feature_dim = 16;
  double signal = 1.0;
  std::uint64_t seed = 0;
  int train_per_class = 20;
  int val_per_class = 30;  // the remaining nodes form the test set
};

DatasetBundle generate_synthetic(const SyntheticSpec& spec);

// Erdős–Rényi-style graph with ~avg_degree·n/2 edges sampled uniformly.
Graph random_sparse_graph(Index n, double avg_degree, std::uint64_t seed);

}  // namespace hidnet
