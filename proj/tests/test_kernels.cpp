#include <doctest.h>

#include "fixtures.hpp"
#include "hidnet/diffusion.hpp"
#include "hidnet/kernels.hpp"

using namespace hidnet;

TEST_CASE("spmm matches dense product") {
  const Graph g = fx::random_graph(60, 0.08, 3);
  const auto op = normalize(g);
  const FeatureMatrix x = fx::random_matrix(60, 5, 4);
  FeatureMatrix out;
  kernels::spmm(op.a_hat, x, out, Exec::Serial);
  CHECK(fx::max_abs(out - fx::dense_a_hat(g) * x) < 1e-13);
}

TEST_CASE("fused step matches its dense formula") {
  const Graph g = fx::random_graph(40, 0.1, 8);
  const auto op = normalize(g);
  const FeatureMatrix x = fx::random_matrix(40, 3, 1), x0 = fx::random_matrix(40, 3, 2);
  const StepCoefficients c{0.3, 0.1, 0.4, 0.2};
  FeatureMatrix out;
  kernels::fused_step(op.a_hat, &op.a_hat_sq, x, &x0, {&c, 1}, out, Exec::Serial);
  const Eigen::MatrixXd a = fx::dense_a_hat(g);
  const Eigen::MatrixXd expect = 0.3 * x + 0.1 * x0 + 0.4 * a * x + 0.2 * a * a * x;
  CHECK(fx::max_abs(out - expect) < 1e-13);

  // Zero coefficients allow missing operands.
  const StepCoefficients only_first{0.0, 0.0, 1.0, 0.0};
  kernels::fused_step(op.a_hat, nullptr, x, nullptr, {&only_first, 1}, out);
  CHECK(fx::max_abs(out - a * x) < 1e-13);
}

TEST_CASE("parallel kernels reproduce the serial reference") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Index n = 200 + static_cast<Index>(seed * 37);
    const Graph g = fx::random_graph(n, 6.0 / n, seed);
    const auto op = normalize(g);
    const FeatureMatrix x = fx::random_matrix(n, 7, seed + 1), x0 = fx::random_matrix(n, 7, seed + 2);
    FeatureMatrix s, p;
    kernels::serial::spmm(op.a_hat_sq, x, s);
    kernels::omp::spmm(op.a_hat_sq, x, p);
    CHECK(fx::max_abs(s - p) <= 1e-12);

    std::vector<StepCoefficients> per_row(n);
    Rng rng(seed);
    for (auto& c : per_row) c = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    kernels::serial::fused_step(op.a_hat, &op.a_hat_sq, x, &x0, per_row, s);
    kernels::omp::fused_step(op.a_hat, &op.a_hat_sq, x, &x0, per_row, p);
    CHECK(fx::max_abs(s - p) <= 1e-12);
  }
}

TEST_CASE("propagation is identical on both execution paths") {
  const Graph g = fx::random_graph(300, 0.02, 77);
  const auto op = normalize(g);
  const FeatureMatrix x0 = fx::random_matrix(300, 4, 5);
  DiffusionConfig cfg;
  cfg.steps = 20;
  set_default_exec(Exec::Serial);
  const FeatureMatrix s = propagate(x0, op, cfg);
  set_default_exec(Exec::Parallel);
  const FeatureMatrix p = propagate(x0, op, cfg);
  CHECK(fx::max_abs(s - p) <= 1e-12);
}

TEST_CASE("kernels validate shapes") {
  const auto op = normalize(fx::chain(4));
  const FeatureMatrix x = fx::random_matrix(3, 2, 0);
  FeatureMatrix out;
  CHECK_THROWS(kernels::spmm(op.a_hat, x, out));
  const FeatureMatrix ok = fx::random_matrix(4, 2, 0);
  std::vector<StepCoefficients> wrong(3);
  CHECK_THROWS(kernels::fused_step(op.a_hat, &op.a_hat_sq, ok, &ok, wrong, out));
  const StepCoefficients needs_x0{0.0, 1.0, 0.0, 0.0};
  CHECK_THROWS(kernels::fused_step(op.a_hat, nullptr, ok, nullptr, {&needs_x0, 1}, out));
}
