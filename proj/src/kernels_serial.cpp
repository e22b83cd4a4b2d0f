#include <atomic>

#include "hidnet/error.hpp"
#include "hidnet/kernels.hpp"
#include "kernel_rows.hpp"

namespace hidnet {

namespace {
std::atomic<Exec> g_default_exec{Exec::Parallel};
}  // namespace

void set_default_exec(Exec exec) { g_default_exec.store(exec); }
Exec default_exec() { return g_default_exec.load(); }

namespace kernels {

namespace serial {

void spmm(const CsrMatrix& a, const FeatureMatrix& x, FeatureMatrix& out) {
  detail::check_spmm(a, x);
  out.resize(a.rows, x.cols());
  for (Index i = 0; i < a.rows; ++i) detail::spmm_row(a, x, out, i);
}

void fused_step(const CsrMatrix& first, const CsrMatrix* second,
                const FeatureMatrix& x, const FeatureMatrix* x0,
                std::span<const StepCoefficients> coeffs, FeatureMatrix& out) {
  detail::check_fused(first, second, x, x0, coeffs);
  out.resize(x.rows(), x.cols());
  for (Index i = 0; i < first.rows; ++i)
    detail::fused_row(first, second, x, x0, coeffs, out, i);
}

}  // namespace serial

void spmm(const CsrMatrix& a, const FeatureMatrix& x, FeatureMatrix& out, Exec exec) {
  if (exec == Exec::Serial) {
    serial::spmm(a, x, out);
  } else {
    omp::spmm(a, x, out);
  }
}

void fused_step(const CsrMatrix& first, const CsrMatrix* second,
                const FeatureMatrix& x, const FeatureMatrix* x0,
                std::span<const StepCoefficients> coeffs, FeatureMatrix& out,
                Exec exec) {
  if (exec == Exec::Serial) {
    serial::fused_step(first, second, x, x0, coeffs, out);
  } else {
    omp::fused_step(first, second, x, x0, coeffs, out);
  }
}

}  // namespace kernels
}  // namespace hidnet
