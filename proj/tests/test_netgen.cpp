#include <doctest.h>

#include <cmath>

#include "netbandit/errors.hpp"
#include "netbandit/graph.hpp"
#include "support.hpp"

using namespace netbandit;
using namespace testsupport;

namespace {

double mean_degree(const Graph& g) { return 2.0 * g.edge_count() / g.size(); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST_CASE("graph construction") {
  Graph g(4, {{0, 1}, {1, 0}, {2, 3}, {0, 1}});
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(1, 0));
  CHECK(g.degree(0) == 1);
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), ContractViolation);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), ContractViolation);
  CHECK_THROWS_AS(Graph(2, {}, {0, 2}, 2), ContractViolation);
}

TEST_CASE("sbm with edge probability one gives the complete graph") {
  Rng rng(1);
  const Graph g = sample_sbm(SbmParams{{1.0}, {{1.0}}}, 4, rng);
  CHECK(g.edge_count() == 6);
  for (int i = 0; i < 4; ++i) {
    CHECK(g.group(i) == 0);
    for (int j = 0; j < 4; ++j) CHECK(g.has_edge(i, j) == (i != j));
  }
}

TEST_CASE("sbm with edge probability zero gives the empty graph") {
  Rng rng(2);
  const Graph g = sample_sbm(SbmParams{{1.0}, {{0.0}}}, 10, rng);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("sbm mean degree at the n=100 protocol") {
  // Oracle: with multinomial labels E[deg] = (n-1) * sum_ab p_a p_b W_ab.
  const int n = 100, k = 10;
  double pair = 0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) pair += 0.01 * (a == b ? 0.3 : 0.01);
  const double oracle = (n - 1) * pair;
  CHECK(oracle == doctest::Approx(3.861).epsilon(1e-12));
  const auto params = SbmParams::planted(k, 0.3, 0.01);
  CHECK(sbm_expected_degree(params, n) == doctest::Approx(oracle).epsilon(1e-12));

  double total = 0;
  for (int seed = 0; seed < 1000; ++seed) {
    Rng rng(derive_seed(99, seed));
    total += mean_degree(sample_sbm(params, n, rng));
  }
  CHECK(std::abs(total / 1000 - oracle) < 0.2);
}

TEST_CASE("sbm single-group density converges to q") {
  const double q = 0.2;
  const int n = 40, seeds = 200;
  double edges = 0;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(derive_seed(5, s));
    edges += sample_sbm(SbmParams{{1.0}, {{q}}}, n, rng).edge_count();
  }
  const double pairs = seeds * n * (n - 1) / 2.0;
  const double se = std::sqrt(q * (1 - q) / pairs);
  CHECK(std::abs(edges / pairs - q) < 4 * se);
}

TEST_CASE("sbm parameter validation") {
  Rng rng(3);
  CHECK_THROWS_AS(sample_sbm(SbmParams{{0.5, 0.4}, {{0.1, 0.1}, {0.1, 0.1}}}, 5, rng), ConfigError);
  CHECK_THROWS_AS(sample_sbm(SbmParams{{1.0}, {{1.5}}}, 5, rng), ConfigError);
  CHECK_THROWS_AS(sample_sbm(SbmParams{{0.5, 0.5}, {{0.1, 0.2}, {0.3, 0.1}}}, 5, rng), ConfigError);
  CHECK_THROWS_AS(sample_sbm(SbmParams{{-0.5, 1.5}, {{0.1, 0.1}, {0.1, 0.1}}}, 5, rng), ConfigError);
  CHECK_THROWS_AS(sample_sbm(SbmParams{{1.0}, {{0.1}}}, 0, rng), ConfigError);
}

TEST_CASE("latent space limits") {
  Rng rng(4);
  LatentSpaceParams none{-50.0, 2, 0.0, 0.0, 0.0};
  CHECK(sample_latent_space(none, 30, rng).edge_count() == 0);

  LatentSpaceParams half{0.0, 2, 0.0, 0.0, 0.0};
  const int draws = 20000;
  int hits = 0;
  for (int i = 0; i < draws; ++i) hits += sample_latent_space(half, 2, rng).edge_count();
  const double se = std::sqrt(0.25 / draws);
  CHECK(std::abs(hits / double(draws) - 0.5) < 4 * se);

  CHECK_THROWS_AS(sample_latent_space(LatentSpaceParams{0, 0, 1, 0, 0}, 3, rng), ConfigError);
  CHECK_THROWS_AS(sample_latent_space(LatentSpaceParams{0, 2, -1, 0, 0}, 3, rng), ConfigError);
}

TEST_CASE("latent space density matches a Monte Carlo pair estimate") {
  const LatentSpaceParams p{-2.0, 2, 1.0, 0.0, 0.0};
  // Oracle: mean of sigmoid(alpha + u.v) over 10^6 independent pairs.
  Rng orng(77);
  std::normal_distribution<double> nd(0, 1);
  double acc = 0;
  const int pairs = 1000000;
  for (int i = 0; i < pairs; ++i) {
    const double dot = nd(orng) * nd(orng) + nd(orng) * nd(orng);
    acc += sigmoid(p.alpha + dot);
  }
  const double oracle = acc / pairs;

  const int n = 200, graphs = 20;
  double density = 0;
  for (int s = 0; s < graphs; ++s) {
    Rng rng(derive_seed(8, s));
    density += sample_latent_space(p, n, rng).edge_count() / (n * (n - 1) / 2.0);
  }
  density /= graphs;
  CHECK(std::abs(density - oracle) < 0.2 * oracle);
}

TEST_CASE("latent space takes injected labels") {
  Rng rng(6);
  const Graph g = sample_latent_space(LatentSpaceParams{}, 4, rng, {0, 1, 1, 0}, 2);
  CHECK(g.group_count() == 2);
  CHECK(g.group(1) == 1);
  CHECK(g.group(3) == 0);
}

TEST_CASE("sampled graphs are symmetric, loop-free and seed-deterministic") {
  for (int s = 0; s < 20; ++s) {
    Rng a(derive_seed(11, s)), b(derive_seed(11, s));
    const Graph g = sample_sbm(SbmParams::planted(3, 0.4, 0.05), 30, a);
    const Graph h = sample_sbm(SbmParams::planted(3, 0.4, 0.05), 30, b);
    CHECK(g == h);
    CHECK(g.fingerprint() == h.fingerprint());
    const auto adj = dense(g);
    for (int i = 0; i < 30; ++i) {
      CHECK(adj[i][i] == 0);
      for (int j = 0; j < 30; ++j) CHECK(adj[i][j] == adj[j][i]);
    }
    Rng c(derive_seed(12, s)), d(derive_seed(12, s));
    CHECK(sample_latent_space(LatentSpaceParams{-1, 2, 1, 0.5, 0.5}, 25, c) ==
          sample_latent_space(LatentSpaceParams{-1, 2, 1, 0.5, 0.5}, 25, d));
  }
}

TEST_CASE("treated neighbor counts") {
  const Graph path = path3();
  CHECK(treated_neighbor_counts(path, {0, 0, 0}) == std::vector<int>{0, 0, 0});
  CHECK(treated_neighbor_counts(path, {1, 0, 1}) == std::vector<int>{0, 2, 0});
  CHECK(treated_neighbor_counts(complete(4), {1, 1, 0, 0}) == std::vector<int>{1, 1, 2, 2});
  CHECK_THROWS_AS(treated_neighbor_counts(path, {1, 0}), ContractViolation);
}

TEST_CASE("treated neighbor counts are additive over disjoint supports") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = random_graph(15, 0.3, 2, rng);
    Treatment z(15, 0), w(15, 0), both(15, 0);
    for (int i = 0; i < 15; ++i) {
      const int r = std::uniform_int_distribution<int>(0, 2)(rng);
      z[i] = r == 1;
      w[i] = r == 2;
      both[i] = r != 0;
    }
    const auto a = treated_neighbor_counts(g, z), b = treated_neighbor_counts(g, w);
    const auto c = treated_neighbor_counts(g, both);
    for (int i = 0; i < 15; ++i) CHECK(a[i] + b[i] == c[i]);
    CHECK(c == ref_counts(g, both));
  }
}
