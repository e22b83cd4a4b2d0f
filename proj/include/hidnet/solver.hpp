#pragma once

#include "hidnet/graph.hpp"

namespace hidnet {

// M = identity*I + first*Â + second*Â²
struct OperatorPolynomial {
  double identity = 0.0;
  double first = 0.0;
  double second = 0.0;
};

struct SolverOptions {
  double relative_tolerance = 1e-12;
  int max_iterations = 0;  // 0 selects 10*n + 1000
  Index dense_fallback_limit = 2000;
};

struct SolveReport {
  int iterations = 0;
  double max_relative_residual = 0.0;
  bool dense_fallback = false;
};

FeatureMatrix apply_polynomial(const NormalizedOperator& op, const OperatorPolynomial& p,
                               const FeatureMatrix& x);

// Solves M·Y = rhs for a symmetric positive-definite polynomial M with block
// conjugate gradients (one search direction per column). When CG stalls and
// n is within the dense limit, falls back to a dense LDLT factorization.
FeatureMatrix solve_spd(const NormalizedOperator& op, const OperatorPolynomial& p,
                        const FeatureMatrix& rhs, const SolverOptions& options = {},
                        SolveReport* report = nullptr);

}  // namespace hidnet
