#include "hidnet/homophily.hpp"

#include <algorithm>
#include <string>

#include "hidnet/error.hpp"

namespace hidnet {

void validate_labels(const LabelVector& labels, Index n) {
  if (labels.num_classes < 2) throw Error(ErrorKind::InvalidArgument, "need at least two classes");
  if (static_cast<Index>(labels.y.size()) != n) {
    throw Error(ErrorKind::ShapeMismatch, "label count " + std::to_string(labels.y.size()) +
                                              " differs from node count " + std::to_string(n));
  }
  for (std::size_t i = 0; i < labels.y.size(); ++i) {
    if (labels.y[i] < 0 || labels.y[i] >= labels.num_classes) {
      throw Error(ErrorKind::InvalidArgument, "label of node " + std::to_string(i) +
                                                  " outside [0," +
                                                  std::to_string(labels.num_classes) + ")");
    }
  }
}

namespace {

// Per-node label histograms for N_1, N_2 (exact distance) built from a
// depth-limited BFS. Node-parallel; each node owns its own scratch.
struct Tally {
  std::size_t matched[3] = {0, 0, 0};
  std::size_t counted[3] = {0, 0, 0};
};

bool own_label_is_mode(const std::vector<int>& hist, int own) {
  int best = 0;
  for (int c : hist) best = std::max(best, c);
  return best > 0 && hist[own] == best;
}

Tally tally(const Graph& g, const LabelVector& labels) {
  const Index n = g.num_nodes();
  validate_labels(labels, n);
  const CsrMatrix& adj = g.augmented_adjacency();
  Tally total;

#pragma omp parallel
  {
    Tally local;
    std::vector<int> h1(labels.num_classes), h2(labels.num_classes), h12(labels.num_classes);
    std::vector<Index> ring1, ring2;
    std::vector<char> seen(n, 0);
#pragma omp for schedule(dynamic, 64)
    for (Index i = 0; i < n; ++i) {
      ring1.clear();
      ring2.clear();
      seen[i] = 1;
      for (Index j : adj.row_indices(i)) {
        if (!seen[j]) {
          seen[j] = 1;
          ring1.push_back(j);
        }
      }
      for (Index j : ring1) {
        for (Index k : adj.row_indices(j)) {
          if (!seen[k]) {
            seen[k] = 1;
            ring2.push_back(k);
          }
        }
      }
      seen[i] = 0;
      for (Index j : ring1) seen[j] = 0;
      for (Index k : ring2) seen[k] = 0;

      std::fill(h1.begin(), h1.end(), 0);
      std::fill(h2.begin(), h2.end(), 0);
      for (Index j : ring1) ++h1[labels.y[j]];
      for (Index k : ring2) ++h2[labels.y[k]];
      for (int c = 0; c < labels.num_classes; ++c) h12[c] = h1[c] + h2[c];

      const int own = labels.y[i];
      if (!ring1.empty()) {
        ++local.counted[0];
        local.matched[0] += own_label_is_mode(h1, own);
      }
      if (!ring2.empty()) {
        ++local.counted[1];
        local.matched[1] += own_label_is_mode(h2, own);
      }
      if (!ring1.empty() || !ring2.empty()) {
        ++local.counted[2];
        local.matched[2] += own_label_is_mode(h12, own);
      }
    }
#pragma omp critical
    for (int s = 0; s < 3; ++s) {
      total.matched[s] += local.matched[s];
      total.counted[s] += local.counted[s];
    }
  }
  return total;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

SimilarityReport similarity_report(const Graph& g, const LabelVector& labels) {
  const Tally t = tally(g, labels);
  return {ratio(t.matched[0], t.counted[0]), ratio(t.matched[1], t.counted[1]),
          ratio(t.matched[2], t.counted[2]), t.counted[0], t.counted[1], t.counted[2]};
}

double khop_similarity(const Graph& g, const LabelVector& labels, int k) {
  if (k != 1 && k != 2) throw Error(ErrorKind::InvalidArgument, "hop must be 1 or 2");
  const SimilarityReport r = similarity_report(g, labels);
  return k == 1 ? r.h1 : r.h2;
}

double combined_similarity(const Graph& g, const LabelVector& labels) {
  return similarity_report(g, labels).h12;
}

}  // namespace hidnet
