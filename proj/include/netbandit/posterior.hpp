#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "netbandit/design.hpp"
#include "netbandit/random.hpp"

namespace netbandit {

/// Cholesky factor of a symmetric positive-definite matrix. On failure adds
/// 1e-10 * I and escalates by x10 up to 1e-6; then throws NumericalError.
Eigen::LLT<Eigen::MatrixXd> robust_cholesky(const Eigen::MatrixXd& m);

/// Gaussian belief N(mean, covariance) over the flat parameter vector under a
/// Gaussian likelihood with known observation variance.
///
/// The state keeps the natural parameters (precision, precision * mean) as the
/// source of truth. Mean and covariance are re-derived by a Cholesky solve on
/// every update, which keeps repeated updates numerically stable.
class GaussianPosterior {
 public:
  /// N(prior_mean * 1, (1 / lambda) I_D).
  static GaussianPosterior from_prior(int dimension, double prior_mean, double lambda,
                                      double noise_var = 1.0);
  static GaussianPosterior from_prior(const Eigen::VectorXd& prior_mean, double lambda,
                                      double noise_var = 1.0);
  /// Explicit prior covariance; overrides any lambda-based default.
  static GaussianPosterior from_moments(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance,
                                        double noise_var = 1.0);

  /// Conjugate update with one round of observations r ~ N(X theta, noise_var I).
  GaussianPosterior update(const Eigen::MatrixXd& x, const Eigen::VectorXd& r) const;
  GaussianPosterior update(const DesignMatrix& x, const Eigen::VectorXd& r) const {
    return update(x.values, r);
  }
  /// Same, with an observation variance other than noise_var() for this batch.
  GaussianPosterior update(const Eigen::MatrixXd& x, const Eigen::VectorXd& r,
                           double observation_var) const;

  Eigen::VectorXd sample(Rng& rng) const;

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& map_estimate() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::MatrixXd& precision() const { return precision_; }
  double noise_var() const { return noise_var_; }
  int rounds_seen() const { return rounds_; }
  int dimension() const { return static_cast<int>(mean_.size()); }

 private:
  GaussianPosterior(Eigen::MatrixXd precision, Eigen::VectorXd shift, double noise_var, int rounds);

  Eigen::MatrixXd precision_;
  Eigen::VectorXd shift_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  double noise_var_ = 1.0;
  int rounds_ = 0;
};

}  // namespace netbandit
