#include "netbandit/reward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netbandit/errors.hpp"

namespace netbandit {

Eigen::VectorXd Theta::flatten() const {
  Eigen::VectorXd v(dimension());
  v << mu, gamma;
  return v;
}

Theta Theta::unflatten(const Eigen::VectorXd& v, int group_count) {
  detail::require(group_count >= 1 && v.size() > group_count,
                  "parameter vector too short for " + std::to_string(group_count) + " groups");
  Theta t;
  t.mu = v.head(group_count);
  t.gamma = v.tail(v.size() - group_count);
  return t;
}

void validate(const Theta& theta) {
  if (theta.mu.size() < 1) throw ConfigError("theta needs at least one direct effect");
  if (theta.gamma.size() < 1) throw ConfigError("theta needs at least one indirect effect");
  if (!theta.mu.allFinite() || !theta.gamma.allFinite())
    throw ConfigError("theta entries must be finite");
}

void validate(const MisspecTheta& theta) {
  if (theta.mu.size() < 1 || theta.gamma0.size() < 1)
    throw ConfigError("misspecified theta needs direct and indirect effects");
  if (theta.gamma0.size() != theta.gamma1.size())
    throw ConfigError("gamma0 and gamma1 tables must have equal length");
  if (!theta.mu.allFinite() || !theta.gamma0.allFinite() || !theta.gamma1.allFinite())
    throw ConfigError("theta entries must be finite");
}

void validate(const NoiseSpec& noise) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma))
    throw ConfigError("noise sigma must be finite and non-negative");
}

void validate(const ThetaGenSpec& spec) {
  if (spec.group_count < 1) throw ConfigError("group count must be at least 1");
  if (spec.cutoff < 0) throw ConfigError("cutoff must be non-negative");
  if (!(spec.mu_sd >= 0.0) || !(spec.gamma_sd >= 0.0))
    throw ConfigError("generator standard deviations must be non-negative");
}

Theta sample_theta(const ThetaGenSpec& spec, Rng& rng) {
  validate(spec);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Theta t;
  t.mu.resize(spec.group_count);
  for (int j = 0; j < spec.group_count; ++j) t.mu[j] = spec.mu_mean + spec.mu_sd * std_normal(rng);
  t.gamma.resize(spec.cutoff + 1);
  for (int d = 0; d <= spec.cutoff; ++d)
    t.gamma[d] = spec.gamma_slope * d + spec.gamma_sd * std_normal(rng);
  return t;
}

MisspecTheta sample_misspec_theta(const ThetaGenSpec& spec, Rng& rng) {
  validate(spec);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  MisspecTheta t;
  t.mu.resize(spec.group_count);
  for (int j = 0; j < spec.group_count; ++j) t.mu[j] = spec.mu_mean + spec.mu_sd * std_normal(rng);
  t.gamma0.resize(spec.cutoff + 1);
  t.gamma1.resize(spec.cutoff + 1);
  for (int d = 0; d <= spec.cutoff; ++d)
    t.gamma0[d] = spec.gamma_slope * d + spec.gamma_sd * std_normal(rng);
  for (int d = 0; d <= spec.cutoff; ++d)
    t.gamma1[d] = 0.5 * spec.gamma_slope * d + spec.gamma_sd * std_normal(rng);
  return t;
}

namespace {
void check_labels(const Graph& g, int group_count) {
  detail::require(g.group_count() <= group_count,
                  "graph has " + std::to_string(g.group_count()) +
                      " groups but theta only covers " + std::to_string(group_count));
}
}  // namespace

Eigen::VectorXd expected_rewards(const Graph& g, const Treatment& z, const Theta& theta) {
  check_labels(g, theta.group_count());
  const auto counts = treated_neighbor_counts(g, z);
  Eigen::VectorXd r(g.size());
  for (int i = 0; i < g.size(); ++i)
    r[i] = (z[i] ? theta.mu[g.group(i)] : 0.0) + theta.indirect(counts[i]);
  return r;
}

Eigen::VectorXd expected_rewards_misspec(const Graph& g, const Treatment& z,
                                         const MisspecTheta& theta) {
  check_labels(g, theta.group_count());
  const auto counts = treated_neighbor_counts(g, z);
  const int cutoff = theta.cutoff();
  Eigen::VectorXd r(g.size());
  for (int i = 0; i < g.size(); ++i) {
    int c = std::min(counts[i], cutoff);
    r[i] = z[i] ? theta.mu[g.group(i)] + theta.gamma1[c] : theta.gamma0[c];
  }
  return r;
}

Eigen::VectorXd realize_rewards(const Eigen::VectorXd& expected, const NoiseSpec& noise, Rng& rng) {
  validate(noise);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Eigen::VectorXd r = expected;
  // Draw even when sigma is zero so the stream position never depends on sigma.
  for (Eigen::Index i = 0; i < r.size(); ++i) r[i] += noise.sigma * std_normal(rng);
  return r;
}

}  // namespace netbandit
