#include <doctest.h>

#include <cmath>
#include <cstring>
#include <set>

#include "fixtures.hpp"
#include "hidnet/error.hpp"
#include "hidnet/perturbation.hpp"

using namespace hidnet;

TEST_CASE("tiny rates leave the graph unchanged") {
  const Graph g = fx::random_graph(20, 0.2, 1);
  for (auto kind : {AttackKind::EdgeAdd, AttackKind::EdgeDelete}) {
    const auto r = attack_edges(g, {kind, 0.0, 3});
    CHECK(r.requested == 0);
    CHECK(r.graph.edges() == g.edges());
  }
}

TEST_CASE("trees have no removable edges") {
  const std::vector<Edge> star{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {4, 5}};
  for (const Graph& g : {fx::chain(10), build_graph(star, 6)}) {
    const auto r = attack_edges(g, {AttackKind::EdgeDelete, 0.3, 1});
    CHECK_FALSE(r.feasible);
    CHECK(r.achieved == 0);
    CHECK(r.requested > 0);
    CHECK(r.graph.edges() == g.edges());
  }
}

TEST_CASE("deletion keeps the component count") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Graph g = fx::random_graph(20, 0.25, seed);
    const auto r = attack_edges(g, {AttackKind::EdgeDelete, 0.2, seed});
    const auto budget = static_cast<std::size_t>(std::ceil(0.2 * g.num_edges()));
    CHECK(r.requested == budget);
    CHECK(fx::components(r.graph) == fx::components(g));
    // Removable edges = |E| - (n - components).
    const std::size_t removable = g.num_edges() - (20 - fx::components(g));
    CHECK(r.achieved == std::min(budget, removable));
    CHECK(r.feasible == (budget <= removable));
    CHECK(g.num_edges() - r.graph.num_edges() == r.achieved);
    for (const auto& e : r.graph.edges()) CHECK(g.has_edge(e.u, e.v));
  }
}

TEST_CASE("addition samples new edges only") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = fx::random_graph(20, 0.2, seed);
    const auto r = attack_edges(g, {AttackKind::EdgeAdd, 0.4, seed});
    const auto budget = static_cast<std::size_t>(std::ceil(0.4 * g.num_edges()));
    CHECK(r.achieved == budget);
    CHECK(r.graph.num_edges() == g.num_edges() + budget);
    for (const auto& e : g.edges()) CHECK(r.graph.has_edge(e.u, e.v));
    for (const auto& e : r.graph.edges()) CHECK(e.u != e.v);
    CHECK(fx::components(r.graph) <= fx::components(g));
  }
  const std::vector<Edge> full{{0, 1}, {0, 2}, {1, 2}};
  CHECK_THROWS_AS(attack_edges(build_graph(full, 3), {AttackKind::EdgeAdd, 0.5, 1}), Error);
}

TEST_CASE("edge attacks are reproducible") {
  const Graph g = fx::random_graph(60, 0.1, 9);
  for (auto kind : {AttackKind::EdgeAdd, AttackKind::EdgeDelete}) {
    const auto a = attack_edges(g, {kind, 0.15, 4});
    const auto b = attack_edges(g, {kind, 0.15, 4});
    const auto c = attack_edges(g, {kind, 0.15, 5});
    CHECK(a.graph.edges() == b.graph.edges());
    CHECK(a.graph.edges() != c.graph.edges());
  }
  CHECK_THROWS_AS(attack_edges(g, {AttackKind::FeatureNoise, 0.1, 1}), Error);
  CHECK_THROWS_AS(attack_edges(g, {AttackKind::EdgeAdd, 1.0, 1}), Error);
}

TEST_CASE("feature noise") {
  const FeatureMatrix x = fx::random_matrix(5, 3, 1);
  CHECK((attack_features(x, 0.0, 7).array() == x.array()).all());
  const FeatureMatrix a = attack_features(x, 0.3, 7), b = attack_features(x, 0.3, 7);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
  CHECK_THROWS_AS(attack_features(x, -0.1, 1), Error);

  // One-hot rows: r = 1, so the noise is μ·M.
  const Index n = 1000;
  FeatureMatrix onehot = FeatureMatrix::Zero(n, 1000);
  for (Index i = 0; i < n; ++i) onehot(i, i % 1000) = 1.0;
  const double mu = 0.7;
  const FeatureMatrix noise = attack_features(onehot, mu, 11) - onehot;
  const double mean = noise.mean();
  const double sd = std::sqrt((noise.array() - mean).square().mean());
  CHECK(std::abs(sd - mu) < 0.01 * mu);
  CHECK(std::abs(mean) < 5 * mu / 1000.0);

  // r is the mean of per-row maxima, signed.
  FeatureMatrix neg(2, 2);
  neg << -1, -3, 2, 0;
  const FeatureMatrix out = attack_features(neg, 1.0, 3) - neg;
  Rng rng(3);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) CHECK(out(i, j) == doctest::Approx(0.5 * rng.normal()));
}

TEST_CASE("attack kind names") {
  for (auto k : {AttackKind::EdgeAdd, AttackKind::EdgeDelete, AttackKind::FeatureNoise})
    CHECK(parse_attack_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_attack_kind("metattack"), Error);
}
