#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hidnet {

using Index = std::int32_t;

// Node states: one row per node, one column per feature channel.
using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Compressed sparse row matrix of doubles. Column indices are sorted within
// each row and unique.
struct CsrMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::int64_t> row_ptr{0};
  std::vector<Index> col_idx;
  std::vector<double> values;

  std::int64_t nnz() const { return static_cast<std::int64_t>(col_idx.size()); }

  std::span<const Index> row_indices(Index i) const {
    return {col_idx.data() + row_ptr[i],
            static_cast<std::size_t>(row_ptr[i + 1] - row_ptr[i])};
  }
  std::span<const double> row_values(Index i) const {
    return {values.data() + row_ptr[i],
            static_cast<std::size_t>(row_ptr[i + 1] - row_ptr[i])};
  }

  // Stored value at (i, j), or 0 when the entry is structurally absent.
  double at(Index i, Index j) const;

  std::vector<double> row_sums() const;
  Eigen::MatrixXd to_dense() const;
  bool is_symmetric(double tol = 0.0) const;
};

CsrMatrix csr_from_dense(const Eigen::MatrixXd& dense, double drop_tol = 0.0);
CsrMatrix transpose(const CsrMatrix& a);

// Sparse-sparse product (Gustavson, dense accumulator per row).
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);

}  // namespace hidnet
