#pragma once

// Reference implementations used as test oracles. They work from dense
// adjacency and the textbook definitions, sharing no code with the library.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netbandit/graph.hpp"
#include "netbandit/random.hpp"
#include "netbandit/reward.hpp"

namespace testsupport {

using netbandit::Graph;
using netbandit::Rng;
using netbandit::Theta;
using netbandit::Treatment;

inline std::vector<std::vector<int>> dense(const Graph& g) {
  std::vector<std::vector<int>> a(g.size(), std::vector<int>(g.size(), 0));
  for (auto [i, j] : g.edges()) a[i][j] = a[j][i] = 1;
  return a;
}

inline std::vector<int> ref_counts(const Graph& g, const Treatment& z) {
  const auto a = dense(g);
  std::vector<int> d(g.size(), 0);
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j) d[i] += a[i][j] * z[j];
  return d;
}

inline double ref_node_reward(const Graph& g, const Treatment& z, const Theta& th, int i, const std::vector<int>& d) {
  const int c = static_cast<int>(th.gamma.size()) - 1;
  return (z[i] ? th.mu[g.group(i)] : 0.0) + th.gamma[std::min(d[i], c)];
}

inline double ref_total(const Graph& g, const Treatment& z, const Theta& th) {
  const auto d = ref_counts(g, z);
  double s = 0;
  for (int i = 0; i < g.size(); ++i) s += ref_node_reward(g, z, th, i, d);
  return s;
}

inline Treatment from_mask(int n, std::uint64_t mask) {
  Treatment z(n);
  for (int i = 0; i < n; ++i) z[i] = (mask >> i) & 1u;
  return z;
}

inline int popcount(const Treatment& z) {
  int c = 0;
  for (auto v : z) c += v;
  return c;
}

inline bool lex_smaller(const Treatment& a, const Treatment& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Exhaustive optimum with lexicographically smallest optimal z.
inline std::pair<Treatment, double> ref_optimum(const Graph& g, const Theta& th, int budget) {
  const int n = g.size();
  Treatment best(n, 0);
  double best_v = ref_total(g, best, th);
  for (std::uint64_t m = 1; m < (1ull << n); ++m) {
    Treatment z = from_mask(n, m);
    if (popcount(z) > budget) continue;
    const double v = ref_total(g, z, th);
    const double tol = 1e-9 * std::max(1.0, std::abs(best_v));
    if (v > best_v + tol || (std::abs(v - best_v) <= tol && lex_smaller(z, best))) {
      best = z;
      best_v = v;
    }
  }
  return {best, best_v};
}

/// Erdos-Renyi style graph with k uniformly drawn groups.
inline Graph random_graph(int n, double p, int k, Rng& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> grp(0, k - 1);
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < p) e.emplace_back(i, j);
  std::vector<int> groups(n);
  for (auto& x : groups) x = grp(rng);
  return Graph(n, e, groups, k);
}

/// Mixed-sign parameters.
inline Theta random_theta(int k, int cutoff, Rng& rng, double scale = 2.0) {
  std::normal_distribution<double> nd(0, scale);
  Theta t;
  t.mu.resize(k);
  t.gamma.resize(cutoff + 1);
  for (int i = 0; i < k; ++i) t.mu[i] = nd(rng);
  for (int i = 0; i <= cutoff; ++i) t.gamma[i] = nd(rng);
  return t;
}

inline Treatment random_treatment(int n, Rng& rng, double p = 0.5) {
  std::bernoulli_distribution b(p);
  Treatment z(n);
  for (auto& v : z) v = b(rng);
  return z;
}

inline Graph path3(std::vector<int> groups = {0, 0, 0}, int k = 1) {
  return Graph(3, {{0, 1}, {1, 2}}, std::move(groups), k);
}

inline Graph complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Theta theta(std::initializer_list<double> mu, std::initializer_list<double> gamma) {
  return Theta{vec(mu), vec(gamma)};
}

}  // namespace testsupport
