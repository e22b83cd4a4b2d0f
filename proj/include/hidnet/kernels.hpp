#pragma once

#include <span>

#include "hidnet/sparse.hpp"

namespace hidnet {

// Execution path for the row-parallel kernels. Serial is the reference; the
// OpenMP path computes every row with the same summation order and therefore
// reproduces it bit-for-bit.
enum class Exec { Serial, Parallel };

void set_default_exec(Exec exec);
Exec default_exec();

// Per-row weights of one fused propagation step
//   out_i = self*x_i + anchor*x0_i + first*(A1 x)_i + second*(A2 x)_i
struct StepCoefficients {
  double self = 0.0;
  double anchor = 0.0;
  double first = 0.0;
  double second = 0.0;
};

namespace kernels {

namespace serial {
void spmm(const CsrMatrix& a, const FeatureMatrix& x, FeatureMatrix& out);
void fused_step(const CsrMatrix& first, const CsrMatrix* second,
                const FeatureMatrix& x, const FeatureMatrix* x0,
                std::span<const StepCoefficients> coeffs, FeatureMatrix& out);
}  // namespace serial

namespace omp {
void spmm(const CsrMatrix& a, const FeatureMatrix& x, FeatureMatrix& out);
void fused_step(const CsrMatrix& first, const CsrMatrix* second,
                const FeatureMatrix& x, const FeatureMatrix* x0,
                std::span<const StepCoefficients> coeffs, FeatureMatrix& out);
}  // namespace omp

// out = a * x. `out` must not alias `x`.
void spmm(const CsrMatrix& a, const FeatureMatrix& x, FeatureMatrix& out,
          Exec exec = default_exec());

// `coeffs` holds either one entry (broadcast to every row) or one per row.
// Terms whose coefficient is exactly zero are skipped, so `second` and `x0`
// may be null when their coefficients are zero. `out` must not alias inputs.
void fused_step(const CsrMatrix& first, const CsrMatrix* second,
                const FeatureMatrix& x, const FeatureMatrix* x0,
                std::span<const StepCoefficients> coeffs, FeatureMatrix& out,
                Exec exec = default_exec());

}  // namespace kernels
}  // namespace hidnet
