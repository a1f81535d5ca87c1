#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "netbandit/design.hpp"
#include "netbandit/graph.hpp"
#include "netbandit/optimize.hpp"
#include "netbandit/posterior.hpp"
#include "netbandit/random.hpp"

namespace netbandit {

/// Group count and pooling cutoff of the learner's linear model.
struct ModelShape {
  int group_count = 1;
  int cutoff = 15;
  int dimension() const { return design_dimension(group_count, cutoff); }
};

enum class AgentKind { thompson, network_ucl, sum_linear_ts, random_policy, oracle };
std::string to_string(AgentKind k);
AgentKind agent_kind_from_string(const std::string& s);

/// Constants of the networkUCL confidence ellipsoid.
struct ConfidenceParams {
  double S = 1.0;       // bound on ||theta||_2
  double R = 1.0;       // sub-Gaussian noise scale
  double L = 2.0;       // bound on squared row norm of the design
  double delta = 0.05;  // failure probability
  double lambda = 0.1;  // ridge regularization
};

void validate(const ConfidenceParams& c);

/// S from the generator's 3-sigma envelope, R = sigma, L = C + 2.
ConfidenceParams default_confidence_params(const ThetaGenSpec& gen, double noise_sigma, double lambda,
                                           double delta = 0.05);

/// sqrt(beta_t) = sqrt(lambda) S + R sqrt(2 log(1/delta) + D log(1 + n t L / (lambda D))),
/// with t the number of rounds already observed.
double confidence_radius(const ConfidenceParams& c, int dimension, int n, int rounds);

/// Ridge statistics with prior mean zero: V = lambda I + sum X'X, b = sum X'r.
class RidgeState {
 public:
  RidgeState(int dimension, double lambda);

  RidgeState update(const Eigen::MatrixXd& x, const Eigen::VectorXd& r) const;
  Eigen::VectorXd estimate() const;
  Eigen::MatrixXd gram_inverse() const;

  const Eigen::MatrixXd& gram() const { return gram_; }
  double lambda() const { return lambda_; }
  int rounds_seen() const { return rounds_; }
  int dimension() const { return static_cast<int>(target_.size()); }

 private:
  double lambda_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd target_;
  int rounds_ = 0;
};

/// Column sums of the design for treatment z without materializing the matrix.
Eigen::VectorXd design_sum(const Graph& g, const Treatment& z, const ModelShape& shape);

/// UCB(z) = <x_z, theta_hat> + radius * ||x_z||_{V^-1}.
struct UcbIndex {
  Eigen::VectorXd theta_hat;
  Eigen::MatrixXd gram_inverse;
  double radius = 0.0;

  UcbIndex(const RidgeState& state, const ConfidenceParams& c, int n);
  double operator()(const Graph& g, const Treatment& z, const ModelShape& shape) const;
};

struct UclCandidatePolicy {
  int exact_limit = 12;       // exhaustive UCB maximization up to this n
  int posterior_samples = 10;
  int local_search_restarts = 5;
};

// Step functions. Each returns a budget-feasible treatment vector.

Treatment ts_step(const GaussianPosterior& s, const ModelShape& shape, const Graph& g, int budget,
                  Rng& rng, const SolverOptions& solver);

/// Same action rule as ts_step; the difference lies in how the agent's
/// posterior is updated (one collapsed observation per round).
Treatment sum_linear_ts_step(const GaussianPosterior& collapsed, const ModelShape& shape, const Graph& g,
                             int budget, Rng& rng, const SolverOptions& solver);

Treatment ucl_step(const RidgeState& s, const ModelShape& shape, const Graph& g, int budget,
                   const ConfidenceParams& params, const UclCandidatePolicy& candidates, Rng& rng,
                   const SolverOptions& solver);

Treatment random_policy_step(const Graph& g, int budget, Rng& rng);

Solution oracle_step(const Theta& theta_true, const Graph& g, int budget, const SolverOptions& solver,
                     Rng& rng);

/// Stateful agent driven by the harness: act on a fresh graph, then observe
/// the realized per-node rewards with the learner's design matrix.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual AgentKind kind() const = 0;
  virtual Treatment act(const Graph& g, int budget, Rng& rng) = 0;
  virtual void observe(const DesignMatrix& x, const Eigen::VectorXd& r) = 0;
  /// Current point estimate of theta (zeros for agents that keep none).
  virtual Eigen::VectorXd estimate() const = 0;
};

struct AgentConfig {
  AgentKind kind = AgentKind::thompson;
  ModelShape shape;
  double prior_mean = 1.0;
  Eigen::VectorXd prior_mean_vector;  // overrides prior_mean when non-empty
  double lambda = 0.1;
  double noise_var = 1.0;
  SolverOptions solver;
  ConfidenceParams confidence;
  UclCandidatePolicy candidates;
};

/// Maximizer of the true expected total reward, used by the oracle agent.
using OracleFn = std::function<Solution(const Graph&, int budget, Rng&)>;

std::unique_ptr<Agent> make_agent(const AgentConfig& config, OracleFn oracle = {});

/// Access to the Gaussian belief of the two Thompson variants (nullptr otherwise).
const GaussianPosterior* posterior_of(const Agent& agent);

}  // namespace netbandit
