#include "hidnet/solver.hpp"

#include <cmath>
#include <vector>

#include "hidnet/error.hpp"
#include "hidnet/kernels.hpp"

namespace hidnet {

FeatureMatrix apply_polynomial(const NormalizedOperator& op, const OperatorPolynomial& p,
                               const FeatureMatrix& x) {
  const StepCoefficients c{p.identity, 0.0, p.first, p.second};
  FeatureMatrix out;
  kernels::fused_step(op.a_hat, &op.a_hat_sq, x, nullptr, {&c, 1}, out);
  return out;
}

namespace {

FeatureMatrix dense_solve(const NormalizedOperator& op, const OperatorPolynomial& p,
                          const FeatureMatrix& rhs) {
  const Index n = op.size();
  Eigen::MatrixXd m = p.identity * Eigen::MatrixXd::Identity(n, n);
  if (p.first != 0.0) m += p.first * op.a_hat.to_dense();
  if (p.second != 0.0) m += p.second * op.a_hat_sq.to_dense();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-14 * ldlt.vectorD().cwiseAbs().maxCoeff()) {
    throw Error(ErrorKind::SingularSystem, "diffusion system is singular or indefinite");
  }
  Eigen::MatrixXd solution = ldlt.solve(Eigen::MatrixXd(rhs));
  return solution;
}

}  // namespace

FeatureMatrix solve_spd(const NormalizedOperator& op, const OperatorPolynomial& p,
                        const FeatureMatrix& rhs, const SolverOptions& options,
                        SolveReport* report) {
  const Index n = op.size();
  if (rhs.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "solve: right-hand side has " +
                                                  std::to_string(rhs.rows()) + " rows, system " +
                                                  std::to_string(n));
  }
  const Eigen::Index q = rhs.cols();
  const int max_iter = options.max_iterations > 0 ? options.max_iterations : 10 * n + 1000;

  FeatureMatrix x = FeatureMatrix::Zero(n, q);
  FeatureMatrix r = rhs;
  FeatureMatrix dir = r;
  Eigen::VectorXd rr = r.colwise().squaredNorm().transpose();
  const Eigen::VectorXd target =
      (rhs.colwise().norm().transpose() * options.relative_tolerance).array().square();
  std::vector<char> active(q);
  for (Eigen::Index c = 0; c < q; ++c) active[c] = rr[c] > target[c];

  int iter = 0;
  auto any_active = [&] {
    for (char a : active)
      if (a) return true;
    return false;
  };
  while (any_active() && iter < max_iter) {
    ++iter;
    const FeatureMatrix md = apply_polynomial(op, p, dir);
    for (Eigen::Index c = 0; c < q; ++c) {
      if (!active[c]) continue;
      const double curvature = dir.col(c).dot(md.col(c));
      if (!(curvature > 0.0)) {
        active[c] = 0;  // left for the residual check below
        continue;
      }
      const double step = rr[c] / curvature;
      x.col(c) += step * dir.col(c);
      r.col(c) -= step * md.col(c);
      const double rr_new = r.col(c).squaredNorm();
      dir.col(c) = r.col(c) + (rr_new / rr[c]) * dir.col(c);
      rr[c] = rr_new;
      if (rr_new <= target[c]) active[c] = 0;
    }
  }

  // Recompute true residuals; recurrence drift can hide a stall.
  const FeatureMatrix residual = rhs - apply_polynomial(op, p, x);
  double worst = 0.0;
  bool converged = true;
  for (Eigen::Index c = 0; c < q; ++c) {
    const double bnorm = rhs.col(c).norm();
    const double rel = bnorm > 0.0 ? residual.col(c).norm() / bnorm : residual.col(c).norm();
    worst = std::max(worst, rel);
    if (!(rel <= 10.0 * options.relative_tolerance)) converged = false;
  }

  if (report) *report = {iter, worst, false};
  if (converged) return x;

  if (n > options.dense_fallback_limit) {
    throw Error(ErrorKind::SingularSystem,
                "conjugate gradients did not converge (relative residual " +
                    std::to_string(worst) + ") and n exceeds the dense fallback limit");
  }
  FeatureMatrix dense = dense_solve(op, p, rhs);
  if (report) {
    const FeatureMatrix res = rhs - apply_polynomial(op, p, dense);
    double rel = 0.0;
    for (Eigen::Index c = 0; c < q; ++c) {
      const double bnorm = rhs.col(c).norm();
      rel = std::max(rel, bnorm > 0.0 ? res.col(c).norm() / bnorm : res.col(c).norm());
    }
    *report = {iter, rel, true};
  }
  return dense;
}

}  // namespace hidnet
