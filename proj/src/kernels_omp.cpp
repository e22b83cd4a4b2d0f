#include "hidnet/kernels.hpp"
#include "kernel_rows.hpp"

namespace hidnet::kernels::omp {

void spmm(const CsrMatrix& a, const FeatureMatrix& x, FeatureMatrix& out) {
  detail::check_spmm(a, x);
  out.resize(a.rows, x.cols());
  const std::int64_t rows = a.rows;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < rows; ++i)
    detail::spmm_row(a, x, out, static_cast<Index>(i));
}

void fused_step(const CsrMatrix& first, const CsrMatrix* second,
                const FeatureMatrix& x, const FeatureMatrix* x0,
                std::span<const StepCoefficients> coeffs, FeatureMatrix& out) {
  detail::check_fused(first, second, x, x0, coeffs);
  out.resize(x.rows(), x.cols());
  const std::int64_t rows = first.rows;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < rows; ++i)
    detail::fused_row(first, second, x, x0, coeffs, out, static_cast<Index>(i));
}

}  // namespace hidnet::kernels::omp
