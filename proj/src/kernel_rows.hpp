#pragma once

// Row bodies shared by the serial and OpenMP kernels. Keeping a single body
// guarantees both paths accumulate in the same order.

#include <string>

#include "hidnet/error.hpp"
#include "hidnet/kernels.hpp"

namespace hidnet::kernels::detail {

inline void check_spmm(const CsrMatrix& a, const FeatureMatrix& x) {
  if (a.cols != x.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "spmm: matrix has " + std::to_string(a.cols) + " columns, operand has " +
                    std::to_string(x.rows()) + " rows");
  }
}

inline void check_fused(const CsrMatrix& first, const CsrMatrix* second,
                        const FeatureMatrix& x, const FeatureMatrix* x0,
                        std::span<const StepCoefficients> coeffs) {
  check_spmm(first, x);
  if (first.rows != x.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "fused step: operator must be square in x");
  }
  if (second && (second->rows != first.rows || second->cols != first.cols)) {
    throw Error(ErrorKind::DimensionMismatch, "fused step: operator shapes differ");
  }
  if (x0 && (x0->rows() != x.rows() || x0->cols() != x.cols())) {
    throw Error(ErrorKind::DimensionMismatch, "fused step: anchor shape differs from state");
  }
  if (coeffs.size() != 1 && coeffs.size() != static_cast<std::size_t>(x.rows())) {
    throw Error(ErrorKind::DimensionMismatch, "fused step: coefficient count must be 1 or n");
  }
  for (const auto& c : coeffs) {
    if (c.anchor != 0.0 && !x0) {
      throw Error(ErrorKind::InvalidArgument, "fused step: anchor weight without anchor");
    }
    if (c.second != 0.0 && !second) {
      throw Error(ErrorKind::InvalidArgument, "fused step: second-order weight without operator");
    }
  }
}

inline void spmm_row(const CsrMatrix& a, const FeatureMatrix& x, FeatureMatrix& out,
                     Index i) {
  const Eigen::Index q = x.cols();
  double* dst = out.data() + static_cast<std::int64_t>(i) * q;
  for (Eigen::Index c = 0; c < q; ++c) dst[c] = 0.0;
  for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
    const double w = a.values[k];
    const double* src = x.data() + static_cast<std::int64_t>(a.col_idx[k]) * q;
    for (Eigen::Index c = 0; c < q; ++c) dst[c] += w * src[c];
  }
}

inline void accumulate_row(const CsrMatrix& m, double scale, const FeatureMatrix& x,
                           double* dst, Index i) {
  const Eigen::Index q = x.cols();
  for (std::int64_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
    const double w = scale * m.values[k];
    const double* src = x.data() + static_cast<std::int64_t>(m.col_idx[k]) * q;
    for (Eigen::Index c = 0; c < q; ++c) dst[c] += w * src[c];
  }
}

inline void fused_row(const CsrMatrix& first, const CsrMatrix* second,
                      const FeatureMatrix& x, const FeatureMatrix* x0,
                      std::span<const StepCoefficients> coeffs, FeatureMatrix& out,
                      Index i) {
  const StepCoefficients& c = coeffs.size() == 1 ? coeffs[0] : coeffs[i];
  const Eigen::Index q = x.cols();
  const std::int64_t offset = static_cast<std::int64_t>(i) * q;
  double* dst = out.data() + offset;
  const double* xi = x.data() + offset;
  if (c.anchor != 0.0) {
    const double* ai = x0->data() + offset;
    for (Eigen::Index k = 0; k < q; ++k) dst[k] = c.self * xi[k] + c.anchor * ai[k];
  } else {
    for (Eigen::Index k = 0; k < q; ++k) dst[k] = c.self * xi[k];
  }
  if (c.first != 0.0) accumulate_row(first, c.first, x, dst, i);
  if (c.second != 0.0) accumulate_row(*second, c.second, x, dst, i);
}

}  // namespace hidnet::kernels::detail
