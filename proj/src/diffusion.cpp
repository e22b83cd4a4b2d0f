#include "hidnet/diffusion.hpp"

#include <cmath>
#include <string>

#include "hidnet/error.hpp"
#include "hidnet/kernels.hpp"
#include "hidnet/matrix_io.hpp"

namespace hidnet {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(name) + " must lie in [0,1], got " + std::to_string(v));
  }
}

void require_shape(const FeatureMatrix& x, const NormalizedOperator& op, const char* what) {
  if (x.rows() != op.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " has " + std::to_string(x.rows()) + " rows, graph has " +
                    std::to_string(op.size()) + " nodes");
  }
}

void require_same_shape(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    ", anchor is " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void require_finite(const FeatureMatrix& x, const char* what) {
  if (!all_finite(x)) throw Error(ErrorKind::NonFinite, std::string(what) + " has non-finite entries");
}

StepCoefficients fused_from(const FrameworkCoefficients& f) {
  return {1.0 - (f.alpha + f.beta) * f.dt, f.alpha * f.dt, (f.beta - f.beta * f.gamma) * f.dt,
          f.beta * f.gamma * f.dt};
}

// Linear modes written as X_{t+1} = anchor·X_0 + C·X_t.
struct LinearRecursion {
  double anchor = 0.0;
  StepCoefficients step;             // used when attention is null
  const CsrMatrix* attention = nullptr;
};

LinearRecursion linear_recursion(const DiffusionConfig& cfg) {
  return std::visit(
      Overloaded{
          [&](const HidMode&) {
            const StepCoefficients c = hid_coefficients(cfg);
            return LinearRecursion{c.anchor, {c.self, 0.0, c.first, c.second}, nullptr};
          },
          [](const SgcMode&) { return LinearRecursion{0.0, {0.0, 0.0, 1.0, 0.0}, nullptr}; },
          [](const AppnpMode& m) {
            return LinearRecursion{m.eta, {0.0, 0.0, 1.0 - m.eta, 0.0}, nullptr};
          },
          [](const GatMode& m) { return LinearRecursion{0.0, {}, &m.attention}; },
          [](const AmpMode&) -> LinearRecursion {
            throw Error(ErrorKind::InvalidArgument, "AMP propagation is not linear");
          },
          [](const DagnnMode&) -> LinearRecursion {
            throw Error(ErrorKind::InvalidArgument, "DAGNN combine has no step recursion");
          },
      },
      cfg.mode);
}

}  // namespace

void validate(const DiffusionConfig& cfg) {
  require_unit_interval(cfg.alpha, "alpha");
  require_unit_interval(cfg.beta, "beta");
  require_unit_interval(cfg.gamma, "gamma");
  if (!(cfg.dt > 0.0 && cfg.dt <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "dt must lie in (0,1], got " + std::to_string(cfg.dt));
  }
  if (cfg.steps < 0) throw Error(ErrorKind::InvalidArgument, "steps must be >= 0");
  std::visit(Overloaded{
                 [](const HidMode&) {},
                 [](const SgcMode&) {},
                 [](const AppnpMode& m) {
                   if (!(m.eta > 0.0 && m.eta <= 1.0))
                     throw Error(ErrorKind::InvalidArgument, "eta must lie in (0,1]");
                 },
                 [](const GatMode& m) {
                   if (m.attention.rows != m.attention.cols)
                     throw Error(ErrorKind::DimensionMismatch, "attention must be square");
                 },
                 [](const AmpMode& m) {
                   if (!(m.eps > 0.0 && m.eps < 1.0) || !(m.lambda > 0.0 && m.lambda < 1.0))
                     throw Error(ErrorKind::InvalidArgument, "AMP eps and lambda must lie in (0,1)");
                 },
                 [](const DagnnMode& m) {
                   if (m.retainment.empty())
                     throw Error(ErrorKind::InvalidArgument, "DAGNN needs at least one weight");
                 },
             },
             cfg.mode);
}

StepCoefficients hid_coefficients(const DiffusionConfig& cfg) {
  return fused_from({cfg.alpha, cfg.beta, cfg.gamma, cfg.dt});
}

FeatureMatrix divergence_first(const NormalizedOperator& op, const FeatureMatrix& x) {
  require_shape(x, op, "state");
  FeatureMatrix out;
  kernels::spmm(op.a_hat, x, out);
  const auto sums = op.a_hat.row_sums();
  for (Index i = 0; i < op.size(); ++i) out.row(i) -= sums[i] * x.row(i);
  return out;
}

FeatureMatrix divergence_second(const NormalizedOperator& op, const FeatureMatrix& x) {
  require_shape(x, op, "state");
  FeatureMatrix out;
  kernels::spmm(op.a_hat_sq, x, out);
  const auto sums = op.a_hat_sq.row_sums();
  for (Index i = 0; i < op.size(); ++i) out.row(i) -= sums[i] * x.row(i);
  return out;
}

FeatureMatrix dmp_step(const FeatureMatrix& x_t, const FeatureMatrix& x_0,
                       const NormalizedOperator& op, const DiffusionConfig& cfg) {
  require_shape(x_t, op, "state");
  require_same_shape(x_t, x_0);
  require_finite(x_t, "state");
  require_finite(x_0, "anchor");
  const StepCoefficients c = hid_coefficients(cfg);
  FeatureMatrix out;
  kernels::fused_step(op.a_hat, &op.a_hat_sq, x_t, &x_0, {&c, 1}, out);
  return out;
}

FeatureMatrix framework_step(const FeatureMatrix& x_t, const FeatureMatrix& x_0,
                             const NormalizedOperator& op,
                             std::span<const FrameworkCoefficients> coeffs) {
  require_shape(x_t, op, "state");
  require_same_shape(x_t, x_0);
  std::vector<StepCoefficients> fused(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) fused[i] = fused_from(coeffs[i]);
  FeatureMatrix out;
  kernels::fused_step(op.a_hat, &op.a_hat_sq, x_t, &x_0, fused, out);
  return out;
}

FeatureMatrix framework_step_attention(const FeatureMatrix& x_t, const CsrMatrix& attention) {
  if (attention.rows != x_t.rows() || attention.cols != x_t.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "attention shape does not match state");
  }
  FeatureMatrix out = x_t;
  for (Index i = 0; i < attention.rows; ++i) {
    const auto idx = attention.row_indices(i);
    const auto val = attention.row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k)
      out.row(i) += val[k] * (x_t.row(idx[k]) - x_t.row(i));
  }
  return out;
}

FeatureMatrix propagate(const FeatureMatrix& x_0, const NormalizedOperator& op,
                        const DiffusionConfig& cfg) {
  validate(cfg);
  require_shape(x_0, op, "features");
  require_finite(x_0, "features");

  return std::visit(
      Overloaded{
          [&](const HidMode&) {
            const StepCoefficients c = hid_coefficients(cfg);
            FeatureMatrix x = x_0, next;
            for (int s = 0; s < cfg.steps; ++s) {
              kernels::fused_step(op.a_hat, &op.a_hat_sq, x, &x_0, {&c, 1}, next);
              x.swap(next);
            }
            return x;
          },
          [&](const SgcMode&) { return reduce_sgc(x_0, op, cfg.steps); },
          [&](const AppnpMode& m) {
            const StepCoefficients c{0.0, m.eta, 1.0 - m.eta, 0.0};
            FeatureMatrix x = x_0, next;
            for (int s = 0; s < cfg.steps; ++s) {
              kernels::fused_step(op.a_hat, nullptr, x, &x_0, {&c, 1}, next);
              x.swap(next);
            }
            return x;
          },
          [&](const GatMode& m) {
            validate_attention(m.attention, op);
            FeatureMatrix x = x_0, next;
            for (int s = 0; s < cfg.steps; ++s) {
              kernels::spmm(m.attention, x, next);
              x.swap(next);
            }
            return x;
          },
          [&](const AmpMode& m) {
            FeatureMatrix x = x_0;
            for (int s = 0; s < cfg.steps; ++s) x = reduce_amp_step(x, x_0, op, m.eps, m.lambda);
            return x;
          },
          [&](const DagnnMode& m) { return reduce_dagnn_combine(x_0, op, m.retainment); },
      },
      cfg.mode);
}

FeatureMatrix propagate_transpose(const FeatureMatrix& g, const NormalizedOperator& op,
                                  const DiffusionConfig& cfg) {
  validate(cfg);
  require_shape(g, op, "gradient");
  if (const auto* dagnn = std::get_if<DagnnMode>(&cfg.mode)) {
    // Σ s_k Â^k is symmetric.
    return reduce_dagnn_combine(g, op, dagnn->retainment);
  }
  const LinearRecursion rec = linear_recursion(cfg);
  CsrMatrix attention_t;
  if (rec.attention) attention_t = transpose(*rec.attention);

  // Forward: X_{t+1} = a·X_0 + C X_t, output X_k. Reverse accumulation:
  //   dX_0 = G_0 + a Σ_{t=1..k} G_t,  G_{t-1} = Cᵀ G_t,  G_k = g.
  FeatureMatrix grad = g, next;
  FeatureMatrix anchor_sum = FeatureMatrix::Zero(g.rows(), g.cols());
  for (int s = 0; s < cfg.steps; ++s) {
    if (rec.anchor != 0.0) anchor_sum += rec.anchor * grad;
    if (rec.attention) {
      kernels::spmm(attention_t, grad, next);
    } else {
      kernels::fused_step(op.a_hat, &op.a_hat_sq, grad, nullptr, {&rec.step, 1}, next);
    }
    grad.swap(next);
  }
  return grad + anchor_sum;
}

FeatureMatrix steady_state(const FeatureMatrix& x_0, const NormalizedOperator& op,
                           const DiffusionConfig& cfg, const SolverOptions& options,
                           SolveReport* report) {
  validate(cfg);
  require_shape(x_0, op, "features");
  require_finite(x_0, "features");
  if (!(cfg.alpha > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "steady state needs alpha > 0");
  }
  if (cfg.beta == 0.0) {
    if (report) *report = {};
    return x_0;
  }
  const OperatorPolynomial m{cfg.alpha + cfg.beta, -cfg.beta * (1.0 - cfg.gamma),
                             -cfg.beta * cfg.gamma};
  const FeatureMatrix rhs = cfg.alpha * x_0;
  return solve_spd(op, m, rhs, options, report);
}

FeatureMatrix euler_lagrange_residual(const FeatureMatrix& y, const FeatureMatrix& x_0,
                                      const NormalizedOperator& op,
                                      const DiffusionConfig& cfg) {
  require_shape(y, op, "state");
  require_same_shape(y, x_0);
  // α(x0 - y) + β(1-γ)(Ây - y) + βγ(Â²y - y)
  const StepCoefficients c{-(cfg.alpha + cfg.beta), cfg.alpha,
                           cfg.beta * (1.0 - cfg.gamma), cfg.beta * cfg.gamma};
  FeatureMatrix out;
  kernels::fused_step(op.a_hat, &op.a_hat_sq, y, &x_0, {&c, 1}, out);
  return out;
}

PropagationKernel build_kernel(const NormalizedOperator& op, const DiffusionConfig& cfg) {
  validate(cfg);
  const Index n = op.size();
  if (n > kDenseKernelLimit) {
    throw Error(ErrorKind::GuardExceeded, "dense kernel refused for n = " + std::to_string(n) +
                                              " > " + std::to_string(kDenseKernelLimit));
  }
  const LinearRecursion rec = linear_recursion(cfg);
  PropagationKernel k;
  if (rec.attention) {
    validate_attention(*rec.attention, op);
    k.c = rec.attention->to_dense();
  } else {
    k.c = rec.step.self * Eigen::MatrixXd::Identity(n, n);
    if (rec.step.first != 0.0) k.c += rec.step.first * op.a_hat.to_dense();
    if (rec.step.second != 0.0) k.c += rec.step.second * op.a_hat_sq.to_dense();
  }
  k.h = Eigen::MatrixXd::Identity(n, n);
  for (int s = 0; s < cfg.steps; ++s) {
    Eigen::MatrixXd next = k.c * k.h;
    next.diagonal().array() += rec.anchor;
    k.h = std::move(next);
  }
  k.t = cfg.steps;
  return k;
}

double energy(const FeatureMatrix& x, const FeatureMatrix& x_0, const NormalizedOperator& op,
              const DiffusionConfig& cfg) {
  require_shape(x, op, "state");
  require_same_shape(x, x_0);
  if (cfg.gamma != 0.0) {
    throw Error(ErrorKind::InvalidArgument, "energy is defined for the first-order flow (gamma = 0)");
  }
  double fidelity = (x - x_0).squaredNorm();

  // Â_ii = 1/d̃_i, so x_i/√d̃_i = x_i·√Â_ii.
  const CsrMatrix& a = op.a_hat;
  std::vector<double> scale(a.rows);
  for (Index i = 0; i < a.rows; ++i) scale[i] = std::sqrt(a.at(i, i));
  double smoothness = 0.0;
  for (Index i = 0; i < a.rows; ++i) {
    for (Index j : a.row_indices(i)) {
      if (j <= i) continue;
      smoothness += (scale[i] * x.row(i) - scale[j] * x.row(j)).squaredNorm();
    }
  }
  return cfg.alpha * fidelity + cfg.beta * smoothness;
}

FeatureMatrix reduce_sgc(const FeatureMatrix& x_0, const NormalizedOperator& op, int steps) {
  require_shape(x_0, op, "features");
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "steps must be >= 0");
  FeatureMatrix x = x_0, next;
  for (int s = 0; s < steps; ++s) {
    kernels::spmm(op.a_hat, x, next);
    x.swap(next);
  }
  return x;
}

FeatureMatrix reduce_appnp_fixed_point(const FeatureMatrix& x_0, const NormalizedOperator& op,
                                       double eta, const SolverOptions& options) {
  require_shape(x_0, op, "features");
  if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "eta must lie in (0,1]");
  if (eta == 1.0) return x_0;
  const OperatorPolynomial m{1.0, -(1.0 - eta), 0.0};
  const FeatureMatrix rhs = eta * x_0;
  return solve_spd(op, m, rhs, options);
}

FeatureMatrix framework_fixed_point(const FeatureMatrix& x_0, const NormalizedOperator& op,
                                    double alpha, double beta, const SolverOptions& options) {
  require_shape(x_0, op, "features");
  const OperatorPolynomial m{alpha - beta, beta, 0.0};
  const FeatureMatrix rhs = alpha * x_0;
  return solve_spd(op, m, rhs, options);
}

void validate_attention(const CsrMatrix& attention, const NormalizedOperator& op) {
  if (attention.rows != op.size() || attention.cols != op.size()) {
    throw Error(ErrorKind::DimensionMismatch, "attention shape does not match graph");
  }
  for (Index i = 0; i < attention.rows; ++i) {
    double sum = 0.0;
    const auto idx = attention.row_indices(i);
    const auto val = attention.row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (val[k] < 0.0) {
        throw Error(ErrorKind::NotStochastic, "attention row " + std::to_string(i) +
                                                  " has a negative entry");
      }
      if (val[k] != 0.0 && op.a_hat.at(i, idx[k]) == 0.0) {
        throw Error(ErrorKind::NotStochastic, "attention row " + std::to_string(i) +
                                                  " reaches beyond the closed neighborhood");
      }
      sum += val[k];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorKind::NotStochastic,
                  "attention row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }
}

FeatureMatrix reduce_gat_step(const FeatureMatrix& x_t, const CsrMatrix& attention) {
  if (attention.cols != x_t.rows() || attention.rows != x_t.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "attention shape does not match state");
  }
  for (Index i = 0; i < attention.rows; ++i) {
    double sum = 0.0;
    for (double v : attention.row_values(i)) {
      if (v < 0.0) throw Error(ErrorKind::NotStochastic, "attention has a negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorKind::NotStochastic,
                  "attention row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }
  FeatureMatrix out;
  kernels::spmm(attention, x_t, out);
  return out;
}

std::vector<double> amp_node_weights(const FeatureMatrix& x_t, const FeatureMatrix& x_0,
                                     const NormalizedOperator& op, double eps, double lambda) {
  require_shape(x_t, op, "state");
  require_same_shape(x_t, x_0);
  const double mix = 2.0 * eps * (1.0 - lambda);
  FeatureMatrix y;
  kernels::spmm(op.a_hat, x_t, y);
  y = (1.0 - mix) * x_t + mix * y;
  std::vector<double> weights(op.size());
  for (Index i = 0; i < op.size(); ++i) {
    const double deviation = (y.row(i) - x_0.row(i)).norm();
    // A zero deviation makes the ratio infinite; the clamp then yields 0.
    weights[i] = deviation > 0.0 ? std::max(1.0 - eps * lambda / deviation, 0.0) : 0.0;
  }
  return weights;
}

std::vector<FrameworkCoefficients> amp_framework_coefficients(std::span<const double> node_beta,
                                                              double eps, double lambda) {
  const double mix = 2.0 * eps * (1.0 - lambda);
  std::vector<FrameworkCoefficients> out(node_beta.size());
  for (std::size_t i = 0; i < node_beta.size(); ++i)
    out[i] = {1.0 - node_beta[i], mix * node_beta[i], 0.0, 1.0};
  return out;
}

FeatureMatrix reduce_amp_step(const FeatureMatrix& x_t, const FeatureMatrix& x_0,
                              const NormalizedOperator& op, double eps, double lambda) {
  if (!(eps > 0.0 && eps < 1.0) || !(lambda > 0.0 && lambda < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "AMP eps and lambda must lie in (0,1)");
  }
  const auto node_beta = amp_node_weights(x_t, x_0, op, eps, lambda);
  const double mix = 2.0 * eps * (1.0 - lambda);
  FeatureMatrix ax;
  kernels::spmm(op.a_hat, x_t, ax);
  FeatureMatrix out(x_t.rows(), x_t.cols());
  for (Index i = 0; i < op.size(); ++i) {
    const double b = node_beta[i];
    out.row(i) = (1.0 - b) * x_0.row(i) + b * ((1.0 - mix) * x_t.row(i) + mix * ax.row(i));
  }
  return out;
}

FeatureMatrix reduce_dagnn_combine(const FeatureMatrix& x_0, const NormalizedOperator& op,
                                   std::span<const double> retainment) {
  require_shape(x_0, op, "features");
  if (retainment.empty()) throw Error(ErrorKind::InvalidArgument, "DAGNN needs at least one weight");
  double total = 0.0;
  for (double s : retainment) total += s;
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument,
                "DAGNN retainment weights sum to " + std::to_string(total) + ", expected 1");
  }
  // Horner: Y = s_K X; Y = ÂY + s_k X for k = K-1 .. 0.
  FeatureMatrix y = retainment.back() * x_0, next;
  for (std::size_t k = retainment.size() - 1; k-- > 0;) {
    const StepCoefficients c{0.0, retainment[k], 1.0, 0.0};
    kernels::fused_step(op.a_hat, nullptr, y, &x_0, {&c, 1}, next);
    y.swap(next);
  }
  return y;
}

CoefficientComparison coefficient_ratios(const DiffusionConfig& cfg) {
  const double a = cfg.alpha, b = cfg.beta, dt = cfg.dt;
  CoefficientComparison out;
  out.hid_one_step = {1.0 - (a + b) * dt, (b - b * cfg.gamma) * dt, b * cfg.gamma * dt};
  const double keep = 1.0 - (a + b) * dt;
  out.first_order_two_steps = {keep * keep, 2.0 * b * dt * keep, b * b * dt * dt};
  return out;
}

}  // namespace hidnet
