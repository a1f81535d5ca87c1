#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "netbandit/random.hpp"

namespace netbandit {

/// Binary treatment assignment, one entry per node (0 or 1).
using Treatment = std::vector<std::uint8_t>;

/// Undirected simple graph with per-node group labels, stored as compressed
/// neighbor lists. Group labels are zero-based indices in [0, group_count()).
/// Immutable after construction.
class Graph {
 public:
  Graph() = default;

  /// Builds from an undirected edge list. Duplicate edges collapse; self-loops
  /// and out-of-range endpoints or labels throw ContractViolation.
  Graph(int n, const std::vector<std::pair<int, int>>& edges, std::vector<int> groups,
        int group_count);

  /// Single-group convenience constructor.
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  int size() const { return n_; }
  int group_count() const { return k_; }
  std::size_t edge_count() const { return adjacency_.size() / 2; }

  std::span<const int> neighbors(int i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  int degree(int i) const { return offsets_[i + 1] - offsets_[i]; }
  int group(int i) const { return groups_[i]; }
  const std::vector<int>& groups() const { return groups_; }

  bool has_edge(int i, int j) const;
  std::vector<std::pair<int, int>> edges() const;

  /// Order-sensitive hash over (n, groups, edges). Equal graphs hash equal.
  std::uint64_t fingerprint() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.offsets_ == b.offsets_ &&
           a.adjacency_ == b.adjacency_ && a.groups_ == b.groups_;
  }

 private:
  int n_ = 0;
  int k_ = 1;
  std::vector<int> offsets_{0};
  std::vector<int> adjacency_;
  std::vector<int> groups_;
};

struct SbmParams {
  std::vector<double> membership;           // p, length k
  std::vector<std::vector<double>> edge_prob;  // W, k x k symmetric

  int group_count() const { return static_cast<int>(membership.size()); }

  /// Uniform membership, `within` on the diagonal and `across` elsewhere.
  static SbmParams planted(int k, double within, double across);
};

struct LatentSpaceParams {
  double alpha = 0.0;
  int latent_dim = 2;
  double u_scale = 1.0;
  double a_scale = 0.0;
  double b_scale = 0.0;
};

/// Throws ConfigError when p is not a probability vector or W is not a
/// symmetric matrix with entries in [0, 1].
void validate(const SbmParams& params);
void validate(const LatentSpaceParams& params);

Graph sample_sbm(const SbmParams& params, int n, Rng& rng);

/// Symmetric log-odds alpha + u_i.u_j + (a_i + b_i + a_j + b_j) / 2.
/// Nodes get `labels` (with `group_count` groups) when supplied, else group 0.
Graph sample_latent_space(const LatentSpaceParams& params, int n, Rng& rng,
                          const std::vector<int>& labels = {}, int group_count = 1);

/// Expected degree of a node under an SBM with n nodes.
double sbm_expected_degree(const SbmParams& params, int n);

/// Entry i is the number of treated neighbors of i (own treatment excluded).
std::vector<int> treated_neighbor_counts(const Graph& g, const Treatment& z);

}  // namespace netbandit
