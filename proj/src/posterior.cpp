#include "netbandit/posterior.hpp"

#include <cmath>
#include <string>

#include "netbandit/errors.hpp"

namespace netbandit {

Eigen::LLT<Eigen::MatrixXd> robust_cholesky(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt;
  const auto eye = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (double jitter = 1e-10; jitter <= 1e-6 * 1.0001; jitter *= 10.0) {
    llt.compute(m + jitter * eye);
    if (llt.info() == Eigen::Success) return llt;
  }
  throw NumericalError("Cholesky factorization failed after jitter up to 1e-6");
}

namespace {
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

void check_noise_var(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("observation noise variance must be positive");
}
}  // namespace

GaussianPosterior::GaussianPosterior(Eigen::MatrixXd precision, Eigen::VectorXd shift,
                                     double noise_var, int rounds)
    : precision_(symmetrized(precision)), shift_(std::move(shift)), noise_var_(noise_var),
      rounds_(rounds) {
  auto llt = robust_cholesky(precision_);
  mean_ = llt.solve(shift_);
  covariance_ = symmetrized(llt.solve(Eigen::MatrixXd::Identity(precision_.rows(), precision_.cols())));
}

GaussianPosterior GaussianPosterior::from_prior(int dimension, double prior_mean, double lambda,
                                                double noise_var) {
  if (dimension < 1) throw ConfigError("posterior dimension must be at least 1");
  return from_prior(Eigen::VectorXd::Constant(dimension, prior_mean), lambda, noise_var);
}

GaussianPosterior GaussianPosterior::from_prior(const Eigen::VectorXd& prior_mean, double lambda,
                                                double noise_var) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ConfigError("prior precision lambda must be positive, got " + std::to_string(lambda));
  if (prior_mean.size() < 1) throw ConfigError("posterior dimension must be at least 1");
  check_noise_var(noise_var);
  const auto d = prior_mean.size();
  Eigen::MatrixXd precision = lambda * Eigen::MatrixXd::Identity(d, d);
  return GaussianPosterior(precision, lambda * prior_mean, noise_var, 0);
}

GaussianPosterior GaussianPosterior::from_moments(const Eigen::VectorXd& mean,
                                                  const Eigen::MatrixXd& covariance, double noise_var) {
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size())
    throw ConfigError("prior covariance must be D x D");
  check_noise_var(noise_var);
  auto llt = robust_cholesky(symmetrized(covariance));
  Eigen::MatrixXd precision = llt.solve(Eigen::MatrixXd::Identity(mean.size(), mean.size()));
  Eigen::VectorXd shift = precision * mean;
  return GaussianPosterior(precision, shift, noise_var, 0);
}

GaussianPosterior GaussianPosterior::update(const Eigen::MatrixXd& x, const Eigen::VectorXd& r) const {
  return update(x, r, noise_var_);
}

GaussianPosterior GaussianPosterior::update(const Eigen::MatrixXd& x, const Eigen::VectorXd& r,
                                            double observation_var) const {
  detail::require(x.rows() == r.size(), "design has " + std::to_string(x.rows()) +
                                            " rows but reward vector has " + std::to_string(r.size()));
  detail::require(x.cols() == dimension(), "design column count does not match posterior dimension");
  check_noise_var(observation_var);
  if (!r.allFinite()) throw DataError("non-finite reward in posterior update");

  Eigen::MatrixXd precision = precision_;
  precision.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / observation_var);
  precision.triangularView<Eigen::StrictlyUpper>() = precision.transpose();
  Eigen::VectorXd shift = shift_ + x.transpose() * r / observation_var;
  return GaussianPosterior(std::move(precision), std::move(shift), noise_var_, rounds_ + 1);
}

Eigen::VectorXd GaussianPosterior::sample(Rng& rng) const {
  auto llt = robust_cholesky(covariance_);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Eigen::VectorXd eps(dimension());
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps[i] = std_normal(rng);
  return mean_ + llt.matrixL() * eps;
}

}  // namespace netbandit
