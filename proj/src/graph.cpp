#include "netbandit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netbandit/errors.hpp"

namespace netbandit {

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges, std::vector<int> groups,
             int group_count)
    : n_(n), k_(group_count), groups_(std::move(groups)) {
  detail::require(n >= 0, "graph size must be non-negative");
  detail::require(k_ >= 1, "group count must be at least 1");
  detail::require(static_cast<int>(groups_.size()) == n, "group label vector length must equal n");
  for (int label : groups_) {
    detail::require(label >= 0 && label < k_,
                    "group label " + std::to_string(label) + " outside [0, " +
                        std::to_string(k_) + ")");
  }

  std::vector<std::vector<int>> lists(n);
  for (auto [i, j] : edges) {
    detail::require(i >= 0 && i < n && j >= 0 && j < n, "edge endpoint out of range");
    detail::require(i != j, "self-loop on node " + std::to_string(i));
    lists[i].push_back(j);
    lists[j].push_back(i);
  }
  offsets_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    auto& l = lists[i];
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    offsets_[i + 1] = offsets_[i] + static_cast<int>(l.size());
  }
  adjacency_.reserve(offsets_[n]);
  for (auto& l : lists) adjacency_.insert(adjacency_.end(), l.begin(), l.end());
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges)
    : Graph(n, edges, std::vector<int>(std::max(n, 0), 0), 1) {}

bool Graph::has_edge(int i, int j) const {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count());
  for (int i = 0; i < n_; ++i)
    for (int j : neighbors(i))
      if (i < j) out.emplace_back(i, j);
  return out;
}

std::uint64_t Graph::fingerprint() const {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(n_));
  auto mix = [&h](std::uint64_t v) { h = splitmix64(h ^ v); };
  for (int g : groups_) mix(static_cast<std::uint64_t>(g));
  for (int i = 0; i < n_; ++i)
    for (int j : neighbors(i))
      if (i < j) mix((static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j));
  return h;
}

SbmParams SbmParams::planted(int k, double within, double across) {
  SbmParams p;
  p.membership.assign(k, 1.0 / k);
  p.edge_prob.assign(k, std::vector<double>(k, across));
  for (int a = 0; a < k; ++a) p.edge_prob[a][a] = within;
  return p;
}

void validate(const SbmParams& params) {
  const int k = params.group_count();
  if (k < 1) throw ConfigError("SBM needs at least one group");
  double total = 0.0;
  for (double p : params.membership) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ConfigError("SBM membership probabilities must be finite and non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ConfigError("SBM membership probabilities sum to " + std::to_string(total) +
                      ", expected 1");
  if (static_cast<int>(params.edge_prob.size()) != k)
    throw ConfigError("SBM edge probability matrix must be k x k");
  for (int a = 0; a < k; ++a) {
    if (static_cast<int>(params.edge_prob[a].size()) != k)
      throw ConfigError("SBM edge probability matrix must be k x k");
    for (int b = 0; b < k; ++b) {
      double w = params.edge_prob[a][b];
      if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("SBM edge probabilities must lie in [0, 1]");
      if (w != params.edge_prob[b][a]) throw ConfigError("SBM edge probability matrix must be symmetric");
    }
  }
}

void validate(const LatentSpaceParams& params) {
  if (params.latent_dim < 1) throw ConfigError("latent dimension must be at least 1");
  if (!(params.u_scale >= 0.0) || !(params.a_scale >= 0.0) || !(params.b_scale >= 0.0))
    throw ConfigError("latent-space scales must be non-negative");
  if (!std::isfinite(params.alpha)) throw ConfigError("latent-space intercept must be finite");
}

Graph sample_sbm(const SbmParams& params, int n, Rng& rng) {
  validate(params);
  if (n < 1) throw ConfigError("network size must be at least 1");
  const int k = params.group_count();

  std::discrete_distribution<int> pick_group(params.membership.begin(), params.membership.end());
  std::vector<int> groups(n);
  for (int& g : groups) g = k == 1 ? 0 : pick_group(rng);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    const auto& row = params.edge_prob[groups[i]];
    for (int j = i + 1; j < n; ++j)
      if (unif(rng) < row[groups[j]]) edges.emplace_back(i, j);
  }
  return Graph(n, edges, std::move(groups), k);
}

Graph sample_latent_space(const LatentSpaceParams& params, int n, Rng& rng,
                          const std::vector<int>& labels, int group_count) {
  validate(params);
  if (n < 1) throw ConfigError("network size must be at least 1");
  const int d = params.latent_dim;
  std::normal_distribution<double> std_normal(0.0, 1.0);

  std::vector<double> u(static_cast<std::size_t>(n) * d);
  std::vector<double> sociality(n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) u[i * d + c] = params.u_scale * std_normal(rng);
    double a = params.a_scale * std_normal(rng);
    double b = params.b_scale * std_normal(rng);
    sociality[i] = 0.5 * (a + b);
  }

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (int c = 0; c < d; ++c) dot += u[i * d + c] * u[j * d + c];
      double logit = params.alpha + dot + sociality[i] + sociality[j];
      double prob = 1.0 / (1.0 + std::exp(-logit));
      if (unif(rng) < prob) edges.emplace_back(i, j);
    }
  }

  if (labels.empty()) return Graph(n, edges);
  detail::require(static_cast<int>(labels.size()) == n, "label vector length must equal n");
  return Graph(n, edges, labels, group_count);
}

double sbm_expected_degree(const SbmParams& params, int n) {
  validate(params);
  double pair_prob = 0.0;
  const int k = params.group_count();
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      pair_prob += params.membership[a] * params.membership[b] * params.edge_prob[a][b];
  return (n - 1) * pair_prob;
}

std::vector<int> treated_neighbor_counts(const Graph& g, const Treatment& z) {
  detail::require(static_cast<int>(z.size()) == g.size(),
                  "treatment length " + std::to_string(z.size()) + " does not match n = " +
                      std::to_string(g.size()));
  std::vector<int> counts(g.size(), 0);
  for (int i = 0; i < g.size(); ++i) {
    int c = 0;
    for (int j : g.neighbors(i)) c += z[j] ? 1 : 0;
    counts[i] = c;
  }
  return counts;
}

}  // namespace netbandit
