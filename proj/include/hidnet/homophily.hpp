#pragma once

#include <vector>

#include "hidnet/graph.hpp"

namespace hidnet {

// One class id per node, classes in [0, C).
struct LabelVector {
  std::vector<int> y;
  int num_classes = 0;
};

// Validates labels against the node count: every id in [0, C), C ≥ 2.
void validate_labels(const LabelVector& labels, Index n);

struct SimilarityReport {
  double h1 = 0.0;
  double h2 = 0.0;
  double h12 = 0.0;
  std::size_t counted1 = 0;   // nodes with nonempty N_1
  std::size_t counted2 = 0;   // nodes with nonempty N_2
  std::size_t counted12 = 0;  // nodes with nonempty N_1 ∪ N_2
};

// Fraction of nodes (among those with a nonempty exact-k-hop set) whose label
// is a most frequent label of that set. A tie counts as a match when the
// node's own label is among the tied labels. k ∈ {1, 2}.
double khop_similarity(const Graph& g, const LabelVector& labels, int k);

// Same score with the mode taken over N_1(i) ∪ N_2(i).
double combined_similarity(const Graph& g, const LabelVector& labels);

// All three scores in one pass over depth-2 BFS balls.
SimilarityReport similarity_report(const Graph& g, const LabelVector& labels);

}  // namespace hidnet
