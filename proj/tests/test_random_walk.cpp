#include <doctest.h>

#include "fixtures.hpp"
#include "hidnet/error.hpp"
#include "hidnet/kernels.hpp"
#include "hidnet/random_walk.hpp"

using namespace hidnet;

namespace {

DiffusionConfig cfg_of(double a, double b, double g, double dt, int steps) {
  DiffusionConfig c;
  c.alpha = a;
  c.beta = b;
  c.gamma = g;
  c.dt = dt;
  c.steps = steps;
  return c;
}

const DiffusionConfig kCora = cfg_of(0.1, 0.9, 0.3, 0.8, 5);

}  // namespace

TEST_CASE("walk kernel weights") {
  const WalkKernel k = walk_kernel(kCora);
  CHECK(k.self_prob == doctest::Approx(1 - 0.8));
  CHECK(k.restart_prob == doctest::Approx(0.08));
  CHECK(k.first_weight == doctest::Approx(0.9 * 0.7 * 0.8));
  CHECK(k.second_weight == doctest::Approx(0.9 * 0.3 * 0.8));
  CHECK(k.self_prob + k.restart_prob + k.first_weight + k.second_weight == doctest::Approx(1.0));

  for (Index n : {3, 5, 12}) {
    for (double m : column_mass(normalize(fx::cycle(n)), k)) CHECK(std::abs(m - 1.0) < 1e-12);
  }
  const auto star = column_mass(normalize(fx::chain(3)), k);
  CHECK(std::abs(star[1] - 1.0) > 1e-3);
}

TEST_CASE("expectation equivalence") {
  const auto op = normalize(fx::random_graph(20, 0.2, 1));
  const FeatureMatrix x0 = fx::random_matrix(20, 3, 2);
  CHECK(expectation_equivalence(op, cfg_of(0.1, 0.9, 0.3, 0.8, 0), x0, 0) == 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Index n = 5 + static_cast<Index>(rng.below(40));
    const auto g_op = normalize(fx::random_graph(n, 3.0 / n, seed));
    const FeatureMatrix x = fx::random_matrix(n, 2, seed);
    const int steps = static_cast<int>(rng.below(21));
    CHECK(expectation_equivalence(g_op, kCora, x, steps) < 1e-10);
  }

  // Pure first-order walk: H = Â^t.
  const DiffusionConfig walk = cfg_of(0.0, 1.0, 0.0, 1.0, 4);
  const Eigen::MatrixXd a = op.a_hat.to_dense();
  CHECK(fx::max_abs(build_kernel(op, walk).h - a * a * a * a) < 1e-14);
}

TEST_CASE("walks that never leave the root") {
  const Graph g = fx::cycle(6);
  for (const auto& cfg : {cfg_of(1.0, 0.0, 0.0, 1.0, 3), cfg_of(0.0, 0.0, 0.5, 0.7, 3)}) {
    const auto freq = monte_carlo_estimate(g, cfg, 2, cfg.steps, 5000, 1);
    for (Index i = 0; i < 6; ++i) CHECK(freq[i] == (i == 2 ? 1.0 : 0.0));
  }
}

TEST_CASE("Monte Carlo matches the kernel column on a 3-cycle") {
  const Graph g = fx::cycle(3);
  const std::int64_t trials = 1'000'000;
  const auto freq = monte_carlo_estimate(g, kCora, 0, 5, trials, 2024);
  const auto h = build_kernel(normalize(g), kCora).h;
  double total = 0.0;
  for (Index i = 0; i < 3; ++i) {
    const double p = h(i, 0);
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(trials));
    CHECK(std::abs(freq[i] - p) < 3 * se);
    total += freq[i];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Monte Carlo is deterministic and scheduling independent") {
  const Graph g = fx::cycle(8);
  set_default_exec(Exec::Serial);
  const auto a = monte_carlo_estimate(g, kCora, 3, 6, 50'000, 9);
  set_default_exec(Exec::Parallel);
  const auto b = monte_carlo_estimate(g, kCora, 3, 6, 50'000, 9);
  CHECK(a == b);
  const auto c = monte_carlo_estimate(g, kCora, 3, 6, 50'000, 10);
  CHECK(a != c);
}

TEST_CASE("Monte Carlo refuses improper kernels") {
  try {
    monte_carlo_estimate(fx::chain(4), kCora, 0, 3, 100, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotStochastic);
  }
  CHECK_THROWS_AS(monte_carlo_estimate(fx::cycle(4), kCora, 0, 3, 0, 1), Error);
  CHECK_THROWS_AS(monte_carlo_estimate(fx::cycle(4), kCora, 9, 3, 10, 1), Error);
}

TEST_CASE("walk traces") {
  const Graph g = fx::cycle(10);
  const auto op = normalize(g);
  const auto dist = fx::all_distances(g);
  const WalkTrace t = simulate_walk(op, kCora, 4, 200, 77);
  REQUIRE(t.positions.size() == 201);
  CHECK(t.positions[0] == 4);
  CHECK(t.rng_seed == 77);
  std::size_t r = 0;
  for (std::size_t s = 1; s < t.positions.size(); ++s) {
    const bool restarted = r < t.restarts.size() && t.restarts[r] == static_cast<int>(s);
    if (restarted) {
      CHECK(t.positions[s] == 4);
      ++r;
    } else {
      CHECK(dist[t.positions[s - 1]][t.positions[s]] <= 2);
    }
  }
  CHECK(r == t.restarts.size());
  CHECK_FALSE(t.restarts.empty());

  const WalkTrace again = simulate_walk(op, kCora, 4, 200, 77);
  CHECK(again.positions == t.positions);
  CHECK(again.restarts == t.restarts);
}
