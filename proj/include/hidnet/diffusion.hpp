#pragma once

#include <span>
#include <variant>
#include <vector>

#include "hidnet/graph.hpp"
#include "hidnet/kernels.hpp"
#include "hidnet/solver.hpp"

namespace hidnet {

// ---------------------------------------------------------------------------
// Propagation modes. Each alternative carries exactly the parameters its
// propagation rule needs.
// ---------------------------------------------------------------------------

// High-order diffusion (first- and second-order terms plus fidelity).
struct HidMode {};
// Repeated Â products, X^(k) = Â^k X^(0).
struct SgcMode {};
// Personalized-PageRank power iteration X' = (1-η)ÂX + ηX^(0).
struct AppnpMode {
  double eta = 0.1;
};
// X' = F X with a fixed row-stochastic attention matrix on N_1(i) ∪ {i}.
struct GatMode {
  CsrMatrix attention;
};
// Adaptive message passing with node-wise residual weights.
struct AmpMode {
  double eps = 0.1;
  double lambda = 0.5;
};
// Σ_k s_k Â^k X^(0); K = retainment.size() - 1.
struct DagnnMode {
  std::vector<double> retainment;
};

using PropagationMode =
    std::variant<HidMode, SgcMode, AppnpMode, GatMode, AmpMode, DagnnMode>;

struct DiffusionConfig {
  double alpha = 0.1;  // fidelity
  double beta = 0.9;   // diffusion
  double gamma = 0.3;  // second-order share
  double dt = 0.8;
  int steps = 10;
  PropagationMode mode = HidMode{};
};

// Range checks shared by every operation: α, β, γ ∈ [0,1], Δt ∈ (0,1],
// steps ≥ 0, and the mode's own parameter ranges.
void validate(const DiffusionConfig& cfg);

// Weights of one HID step, see `dmp_step`.
StepCoefficients hid_coefficients(const DiffusionConfig& cfg);

// Σ_j Â_ij (x_j - x_i): the literal normalized divergence, (Â - diag(rowsum Â))X.
FeatureMatrix divergence_first(const NormalizedOperator& op, const FeatureMatrix& x);

// Σ_k (Â²)_ik (x_k - x_i): divergence accumulated over 2-hop paths,
// (Â² - diag(rowsum Â²))X.
FeatureMatrix divergence_second(const NormalizedOperator& op, const FeatureMatrix& x);

// One DMP step:
//   X' = αΔt X^(0) + [(1-(α+β)Δt) I + (β-βγ)Δt Â + βγΔt Â²] X
FeatureMatrix dmp_step(const FeatureMatrix& x_t, const FeatureMatrix& x_0,
                       const NormalizedOperator& op, const DiffusionConfig& cfg);

// Coefficients of the generic framework step
//   x' = x + Δt[α(x0 - x) + β((1-γ)(Âx - x) + γ(Â²x - x))]
// written in the same fused form as `dmp_step`. f = 1.
struct FrameworkCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double dt = 1.0;
};

// One entry is broadcast to all nodes; otherwise one entry per node.
FeatureMatrix framework_step(const FeatureMatrix& x_t, const FeatureMatrix& x_0,
                             const NormalizedOperator& op,
                             std::span<const FrameworkCoefficients> coeffs);

// Framework step with α = 0, β = 1, Δt = 1 and per-edge diffusivity f_ij:
//   x_i' = x_i + Σ_j f_ij (x_j - x_i)
FeatureMatrix framework_step_attention(const FeatureMatrix& x_t, const CsrMatrix& attention);

// Runs `cfg.steps` steps of the configured mode, anchored at x_0.
FeatureMatrix propagate(const FeatureMatrix& x_0, const NormalizedOperator& op,
                        const DiffusionConfig& cfg);

// Adjoint of `propagate` for the linear modes: returns Hᵀ·g where
// propagate(X) = H·X. Never materializes H.
FeatureMatrix propagate_transpose(const FeatureMatrix& g, const NormalizedOperator& op,
                                  const DiffusionConfig& cfg);

// Closed-form limit of the HID iteration: solves
//   ((α+β)I - β(1-γ)Â - βγÂ²) Y = α X^(0)
FeatureMatrix steady_state(const FeatureMatrix& x_0, const NormalizedOperator& op,
                           const DiffusionConfig& cfg, const SolverOptions& options = {},
                           SolveReport* report = nullptr);

// α(x0 - y) + β[(1-γ)(Â - I) + γ(Â² - I)]y; zero at the steady state.
FeatureMatrix euler_lagrange_residual(const FeatureMatrix& y, const FeatureMatrix& x_0,
                                      const NormalizedOperator& op,
                                      const DiffusionConfig& cfg);

// Dense n×n propagation kernel, verification scale only.
struct PropagationKernel {
  Eigen::MatrixXd h;  // H^(t), propagate(X) = H X
  Eigen::MatrixXd c;  // per-step operator, H^(t+1) = anchor·I + C H^(t)
  int t = 0;
};

inline constexpr Index kDenseKernelLimit = 2000;

// Supported for HID, SGC, APPNP and GAT modes.
PropagationKernel build_kernel(const NormalizedOperator& op, const DiffusionConfig& cfg);

// Discrete energy for the first-order flow (requires γ = 0):
//   E = α Σ_i ‖x_i - x0_i‖² + β Σ_{(i,j)∈E} ‖x_i/√d̃_i - x_j/√d̃_j‖²
// which equals α‖X - X0‖² + β tr(Xᵀ(I - Â)X).
double energy(const FeatureMatrix& x, const FeatureMatrix& x_0, const NormalizedOperator& op,
              const DiffusionConfig& cfg);

// ---------------------------------------------------------------------------
// Known propagation rules expressed in the framework.
// ---------------------------------------------------------------------------

// Â^steps X^(0)
FeatureMatrix reduce_sgc(const FeatureMatrix& x_0, const NormalizedOperator& op, int steps);

// η (I - (1-η)Â)^{-1} X^(0)
FeatureMatrix reduce_appnp_fixed_point(const FeatureMatrix& x_0, const NormalizedOperator& op,
                                       double eta, const SolverOptions& options = {});

// Stationary point of the framework in its Euler–Lagrange form
//   0 = α(Y - X0) + β(Â - I)Y  ⇔  ((α-β)I + βÂ) Y = α X0
FeatureMatrix framework_fixed_point(const FeatureMatrix& x_0, const NormalizedOperator& op,
                                    double alpha, double beta,
                                    const SolverOptions& options = {});

// Checks that `attention` is row-stochastic (1e-9), non-negative and supported
// on N_1(i) ∪ {i}; throws NotStochastic otherwise.
void validate_attention(const CsrMatrix& attention, const NormalizedOperator& op);

// F·X^(t)
FeatureMatrix reduce_gat_step(const FeatureMatrix& x_t, const CsrMatrix& attention);

// Node-wise residual weights β_i = max(1 - ελ/‖Y_i - x0_i‖, 0).
std::vector<double> amp_node_weights(const FeatureMatrix& x_t, const FeatureMatrix& x_0,
                                     const NormalizedOperator& op, double eps, double lambda);

// Per-node framework coefficients (α = 1-β_i, β = 2ε(1-λ)β_i, Δt = 1).
std::vector<FrameworkCoefficients> amp_framework_coefficients(std::span<const double> node_beta,
                                                              double eps, double lambda);

// x_i' = (1-β_i) x0_i + β_i Y_i with Y = (1-2ε(1-λ))X + 2ε(1-λ)ÂX
FeatureMatrix reduce_amp_step(const FeatureMatrix& x_t, const FeatureMatrix& x_0,
                              const NormalizedOperator& op, double eps, double lambda);

// Σ_k s_k Â^k X^(0) by Horner accumulation; weights must sum to 1 (1e-9).
FeatureMatrix reduce_dagnn_combine(const FeatureMatrix& x_0, const NormalizedOperator& op,
                                   std::span<const double> retainment);

// Coefficients of X^(t), ÂX^(t), Â²X^(t) after a propagation block.
struct OrderWeights {
  double self = 0.0;    // ρ0
  double first = 0.0;   // ρ1
  double second = 0.0;  // ρ2
};

struct CoefficientComparison {
  OrderWeights hid_one_step;             // one HID step with cfg.gamma
  OrderWeights first_order_two_steps;    // two γ = 0 steps
};

CoefficientComparison coefficient_ratios(const DiffusionConfig& cfg);

}  // namespace hidnet
