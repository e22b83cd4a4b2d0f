#include "hidnet/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "hidnet/error.hpp"

namespace hidnet {

double CsrMatrix::at(Index i, Index j) const {
  const auto idx = row_indices(i);
  const auto it = std::lower_bound(idx.begin(), idx.end(), j);
  if (it == idx.end() || *it != j) return 0.0;
  return values[row_ptr[i] + (it - idx.begin())];
}

std::vector<double> CsrMatrix::row_sums() const {
  std::vector<double> sums(rows, 0.0);
  for (Index i = 0; i < rows; ++i)
    for (double v : row_values(i)) sums[i] += v;
  return sums;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto idx = row_indices(i);
    const auto val = row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) dense(i, idx[k]) = val[k];
  }
  return dense;
}

bool CsrMatrix::is_symmetric(double tol) const {
  if (rows != cols) return false;
  for (Index i = 0; i < rows; ++i) {
    const auto idx = row_indices(i);
    const auto val = row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (std::abs(at(idx[k], i) - val[k]) > tol) return false;
    }
  }
  return true;
}

CsrMatrix csr_from_dense(const Eigen::MatrixXd& dense, double drop_tol) {
  CsrMatrix m;
  m.rows = static_cast<Index>(dense.rows());
  m.cols = static_cast<Index>(dense.cols());
  m.row_ptr.assign(1, 0);
  for (Index i = 0; i < m.rows; ++i) {
    for (Index j = 0; j < m.cols; ++j) {
      const double v = dense(i, j);
      if (v != 0.0 && std::abs(v) > drop_tol) {
        m.col_idx.push_back(j);
        m.values.push_back(v);
      }
    }
    m.row_ptr.push_back(static_cast<std::int64_t>(m.col_idx.size()));
  }
  return m;
}

CsrMatrix transpose(const CsrMatrix& a) {
  CsrMatrix t;
  t.rows = a.cols;
  t.cols = a.rows;
  t.row_ptr.assign(static_cast<std::size_t>(t.rows) + 1, 0);
  for (Index j : a.col_idx) ++t.row_ptr[j + 1];
  for (Index i = 0; i < t.rows; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
  t.col_idx.resize(a.col_idx.size());
  t.values.resize(a.values.size());
  std::vector<std::int64_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
  // Rows of `a` are visited in order, so each output row stays sorted.
  for (Index i = 0; i < a.rows; ++i) {
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const auto dst = cursor[a.col_idx[k]]++;
      t.col_idx[dst] = i;
      t.values[dst] = a.values[k];
    }
  }
  return t;
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.cols != b.rows) {
    throw Error(ErrorKind::DimensionMismatch, "sparse product: inner dimensions differ");
  }
  CsrMatrix c;
  c.rows = a.rows;
  c.cols = b.cols;
  c.row_ptr.assign(1, 0);

  std::vector<double> accum(b.cols, 0.0);
  std::vector<char> occupied(b.cols, 0);
  std::vector<Index> pattern;
  for (Index i = 0; i < a.rows; ++i) {
    pattern.clear();
    for (std::int64_t ka = a.row_ptr[i]; ka < a.row_ptr[i + 1]; ++ka) {
      const Index k = a.col_idx[ka];
      const double av = a.values[ka];
      for (std::int64_t kb = b.row_ptr[k]; kb < b.row_ptr[k + 1]; ++kb) {
        const Index j = b.col_idx[kb];
        if (!occupied[j]) {
          occupied[j] = 1;
          pattern.push_back(j);
        }
        accum[j] += av * b.values[kb];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (Index j : pattern) {
      c.col_idx.push_back(j);
      c.values.push_back(accum[j]);
      accum[j] = 0.0;
      occupied[j] = 0;
    }
    c.row_ptr.push_back(static_cast<std::int64_t>(c.col_idx.size()));
  }
  return c;
}

}  // namespace hidnet
