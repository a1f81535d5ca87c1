#pragma once

#include <Eigen/Core>

#include "netbandit/graph.hpp"
#include "netbandit/random.hpp"

namespace netbandit {

/// Additive reward parameters: one direct effect per group and an indirect
/// effect table indexed by the treated-neighbor count, pooled at the cutoff
/// (counts >= cutoff all read gamma[cutoff]).
///
/// The flat layout used by the linear model is [mu_0..mu_{k-1}, gamma_0..gamma_C].
struct Theta {
  Eigen::VectorXd mu;
  Eigen::VectorXd gamma;

  int group_count() const { return static_cast<int>(mu.size()); }
  int cutoff() const { return static_cast<int>(gamma.size()) - 1; }
  int dimension() const { return group_count() + static_cast<int>(gamma.size()); }

  Eigen::VectorXd flatten() const;
  static Theta unflatten(const Eigen::VectorXd& v, int group_count);

  /// Indirect effect for a raw treated-neighbor count.
  double indirect(int count) const { return gamma[count < cutoff() ? count : cutoff()]; }
};

/// Non-additive variant: treated nodes read gamma1, untreated nodes gamma0.
struct MisspecTheta {
  Eigen::VectorXd mu;
  Eigen::VectorXd gamma0;
  Eigen::VectorXd gamma1;

  int group_count() const { return static_cast<int>(mu.size()); }
  int cutoff() const { return static_cast<int>(gamma0.size()) - 1; }
};

struct NoiseSpec {
  double sigma = 1.0;
};

/// Parameter generator: mu_j ~ N(mu_mean, mu_sd^2) and gamma(d) ~ N(gamma_slope * d,
/// gamma_sd^2), all independent. The misspecified treated-node table uses slope / 2.
struct ThetaGenSpec {
  int group_count = 1;
  int cutoff = 15;
  double mu_mean = 2.0;
  double mu_sd = 1.0;
  double gamma_slope = 1.0;
  double gamma_sd = 1.0;
};

void validate(const Theta& theta);
void validate(const MisspecTheta& theta);
void validate(const NoiseSpec& noise);
void validate(const ThetaGenSpec& spec);

Theta sample_theta(const ThetaGenSpec& spec, Rng& rng);
MisspecTheta sample_misspec_theta(const ThetaGenSpec& spec, Rng& rng);

/// Noiseless per-node rewards z_i * mu_{g(i)} + gamma[min(d_i, C)].
Eigen::VectorXd expected_rewards(const Graph& g, const Treatment& z, const Theta& theta);

/// z_i * (mu_{g(i)} + gamma1[min(d_i, C)]) + (1 - z_i) * gamma0[min(d_i, C)].
Eigen::VectorXd expected_rewards_misspec(const Graph& g, const Treatment& z,
                                         const MisspecTheta& theta);

/// expected + sigma * N(0, 1), entrywise independent.
Eigen::VectorXd realize_rewards(const Eigen::VectorXd& expected, const NoiseSpec& noise, Rng& rng);

}  // namespace netbandit
