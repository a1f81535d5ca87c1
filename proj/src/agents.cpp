#include "netbandit/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netbandit/errors.hpp"

namespace netbandit {

std::string to_string(AgentKind k) {
  switch (k) {
    case AgentKind::thompson: return "thompson";
    case AgentKind::network_ucl: return "network_ucl";
    case AgentKind::sum_linear_ts: return "sum_linear_ts";
    case AgentKind::random_policy: return "random";
    case AgentKind::oracle: return "oracle";
  }
  return "unknown";
}

AgentKind agent_kind_from_string(const std::string& s) {
  if (s == "thompson") return AgentKind::thompson;
  if (s == "network_ucl") return AgentKind::network_ucl;
  if (s == "sum_linear_ts") return AgentKind::sum_linear_ts;
  if (s == "random" || s == "random_policy") return AgentKind::random_policy;
  if (s == "oracle") return AgentKind::oracle;
  throw ConfigError("unknown agent '" + s +
                    "' (expected thompson, network_ucl, sum_linear_ts, random or oracle)");
}

void validate(const ConfidenceParams& c) {
  if (!(c.S > 0) || !(c.R > 0) || !(c.L > 0) || !(c.lambda > 0))
    throw ConfigError("confidence parameters S, R, L and lambda must be positive");
  if (!(c.delta > 0 && c.delta < 1)) throw ConfigError("confidence delta must lie in (0, 1)");
}

ConfidenceParams default_confidence_params(const ThetaGenSpec& gen, double noise_sigma, double lambda,
                                           double delta) {
  double sq = 0.0;
  const double mu_edge = std::abs(gen.mu_mean) + 3.0 * gen.mu_sd;
  sq += gen.group_count * mu_edge * mu_edge;
  for (int d = 0; d <= gen.cutoff; ++d) {
    const double e = std::abs(gen.gamma_slope * d) + 3.0 * gen.gamma_sd;
    sq += e * e;
  }
  ConfidenceParams c;
  c.S = std::sqrt(sq);
  c.R = noise_sigma > 0 ? noise_sigma : 1.0;
  c.L = gen.cutoff + 2.0;
  c.delta = delta;
  c.lambda = lambda;
  return c;
}

double confidence_radius(const ConfidenceParams& c, int dimension, int n, int rounds) {
  const double d = dimension;
  const double inner = 2.0 * std::log(1.0 / c.delta) +
                       d * std::log(1.0 + static_cast<double>(n) * rounds * c.L / (c.lambda * d));
  return std::sqrt(c.lambda) * c.S + c.R * std::sqrt(inner);
}

RidgeState::RidgeState(int dimension, double lambda)
    : lambda_(lambda),
      gram_(lambda * Eigen::MatrixXd::Identity(dimension, dimension)),
      target_(Eigen::VectorXd::Zero(dimension)) {
  if (!(lambda > 0)) throw ConfigError("ridge lambda must be positive");
}

RidgeState RidgeState::update(const Eigen::MatrixXd& x, const Eigen::VectorXd& r) const {
  detail::require(x.rows() == r.size() && x.cols() == dimension(), "ridge update shape mismatch");
  if (!r.allFinite()) throw DataError("non-finite reward in ridge update");
  RidgeState next = *this;
  next.gram_.noalias() += x.transpose() * x;
  next.target_.noalias() += x.transpose() * r;
  ++next.rounds_;
  return next;
}

Eigen::VectorXd RidgeState::estimate() const { return robust_cholesky(gram_).solve(target_); }

Eigen::MatrixXd RidgeState::gram_inverse() const {
  Eigen::MatrixXd inv = robust_cholesky(gram_).solve(Eigen::MatrixXd::Identity(dimension(), dimension()));
  return 0.5 * (inv + inv.transpose());
}

Eigen::VectorXd design_sum(const Graph& g, const Treatment& z, const ModelShape& shape) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(shape.dimension());
  const auto counts = treated_neighbor_counts(g, z);
  for (int i = 0; i < g.size(); ++i) {
    if (z[i]) x[g.group(i)] += 1.0;
    x[shape.group_count + std::min(counts[i], shape.cutoff)] += 1.0;
  }
  return x;
}

UcbIndex::UcbIndex(const RidgeState& state, const ConfidenceParams& c, int n)
    : theta_hat(state.estimate()),
      gram_inverse(state.gram_inverse()),
      radius(confidence_radius(c, state.dimension(), n, state.rounds_seen())) {}

double UcbIndex::operator()(const Graph& g, const Treatment& z, const ModelShape& shape) const {
  const Eigen::VectorXd x = design_sum(g, z, shape);
  const double width = std::sqrt(std::max(0.0, x.dot(gram_inverse * x)));
  return x.dot(theta_hat) + radius * width;
}

namespace {
void check_shape(const ModelShape& shape, int dimension, const Graph& g) {
  detail::require(shape.dimension() == dimension, "agent state dimension does not match (k, C)");
  detail::require(g.group_count() <= shape.group_count, "graph has more groups than the agent's model");
}
}  // namespace

Treatment ts_step(const GaussianPosterior& s, const ModelShape& shape, const Graph& g, int budget, Rng& rng,
                  const SolverOptions& solver) {
  check_shape(shape, s.dimension(), g);
  const Eigen::VectorXd draw = s.sample(rng);
  BudgetedProblem p(g, Theta::unflatten(draw, shape.group_count), budget);
  return solve(p, solver, rng).z;
}

Treatment sum_linear_ts_step(const GaussianPosterior& collapsed, const ModelShape& shape, const Graph& g,
                             int budget, Rng& rng, const SolverOptions& solver) {
  return ts_step(collapsed, shape, g, budget, rng, solver);
}

Treatment ucl_step(const RidgeState& s, const ModelShape& shape, const Graph& g, int budget,
                   const ConfidenceParams& params, const UclCandidatePolicy& candidates, Rng& rng,
                   const SolverOptions& solver) {
  validate(params);
  check_shape(shape, s.dimension(), g);
  const int n = g.size();
  budget = std::clamp(budget, 0, n);
  const UcbIndex ucb(s, params, n);
  auto f = [&](const Treatment& z) { return ucb(g, z, shape); };

  if (n <= candidates.exact_limit) return enumerate_best(n, budget, f).z;

  std::vector<Treatment> pool;
  // Argmax of the linear reward under draws around the ridge estimate.
  const auto cov_factor = robust_cholesky(params.R * params.R * ucb.gram_inverse);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  for (int k = 0; k < candidates.posterior_samples; ++k) {
    Eigen::VectorXd eps(s.dimension());
    for (auto& e : eps) e = std_normal(rng);
    const Eigen::VectorXd draw = ucb.theta_hat + cov_factor.matrixL() * eps;
    BudgetedProblem p(g, Theta::unflatten(draw, shape.group_count), budget);
    pool.push_back(solve(p, solver, rng).z);
  }
  // Greedy additions by UCB gain.
  {
    Treatment z(n, 0);
    double value = f(z);
    for (int added = 0; added < budget; ++added) {
      int pick = -1;
      double best = value;
      for (int j = 0; j < n; ++j) {
        if (z[j]) continue;
        z[j] = 1;
        const double v = f(z);
        z[j] = 0;
        if (v > best + 1e-12) {
          best = v;
          pick = j;
        }
      }
      if (pick < 0) break;
      z[pick] = 1;
      value = best;
    }
    pool.push_back(std::move(z));
  }
  pool.push_back(local_search_generic(n, budget, f, candidates.local_search_restarts, rng).z);

  Treatment best = pool.front();
  double best_value = f(best);
  for (const auto& z : pool) {
    const double v = f(z);
    if (nearly_equal(v, best_value) ? lex_less(z, best) : v > best_value) {
      best = z;
      best_value = v;
    }
  }
  return best;
}

Treatment random_policy_step(const Graph& g, int budget, Rng& rng) {
  const int n = g.size();
  budget = std::clamp(budget, 0, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Treatment z(n, 0);
  for (int i = 0; i < budget; ++i) z[order[i]] = 1;
  return z;
}

Solution oracle_step(const Theta& theta_true, const Graph& g, int budget, const SolverOptions& solver,
                     Rng& rng) {
  BudgetedProblem p(g, theta_true, budget);
  return solve(p, solver, rng);
}

namespace {

class ThompsonAgent final : public Agent {
 public:
  ThompsonAgent(const AgentConfig& c, bool collapsed)
      : config_(c),
        collapsed_(collapsed),
        posterior_(c.prior_mean_vector.size() > 0
                         ? GaussianPosterior::from_prior(c.prior_mean_vector, c.lambda, c.noise_var)
                         : GaussianPosterior::from_prior(c.shape.dimension(), c.prior_mean, c.lambda, c.noise_var)) {}

  AgentKind kind() const override { return collapsed_ ? AgentKind::sum_linear_ts : AgentKind::thompson; }

  Treatment act(const Graph& g, int budget, Rng& rng) override {
    return ts_step(posterior_, config_.shape, g, budget, rng, config_.solver);
  }

  void observe(const DesignMatrix& x, const Eigen::VectorXd& r) override {
    if (!collapsed_) {
      posterior_ = posterior_.update(x, r);
      return;
    }
    // One observation per round: the summed reward, whose noise variance is n sigma^2.
    const Eigen::MatrixXd row = collapse_to_sum(x).transpose();
    const Eigen::VectorXd total = Eigen::VectorXd::Constant(1, r.sum());
    posterior_ = posterior_.update(row, total, posterior_.noise_var() * static_cast<double>(r.size()));
  }

  Eigen::VectorXd estimate() const override { return posterior_.mean(); }
  const GaussianPosterior& posterior() const { return posterior_; }

 private:
  AgentConfig config_;
  bool collapsed_;
  GaussianPosterior posterior_;
};

class UclAgent final : public Agent {
 public:
  explicit UclAgent(const AgentConfig& c) : config_(c), state_(c.shape.dimension(), c.confidence.lambda) {
    validate(c.confidence);
  }
  AgentKind kind() const override { return AgentKind::network_ucl; }
  Treatment act(const Graph& g, int budget, Rng& rng) override {
    return ucl_step(state_, config_.shape, g, budget, config_.confidence, config_.candidates, rng,
                    config_.solver);
  }
  void observe(const DesignMatrix& x, const Eigen::VectorXd& r) override { state_ = state_.update(x.values, r); }
  Eigen::VectorXd estimate() const override { return state_.estimate(); }

 private:
  AgentConfig config_;
  RidgeState state_;
};

class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(int dimension) : dimension_(dimension) {}
  AgentKind kind() const override { return AgentKind::random_policy; }
  Treatment act(const Graph& g, int budget, Rng& rng) override { return random_policy_step(g, budget, rng); }
  void observe(const DesignMatrix&, const Eigen::VectorXd&) override {}
  Eigen::VectorXd estimate() const override { return Eigen::VectorXd::Zero(dimension_); }

 private:
  int dimension_;
};

class OracleAgent final : public Agent {
 public:
  OracleAgent(OracleFn oracle, int dimension) : oracle_(std::move(oracle)), dimension_(dimension) {
    if (!oracle_) throw ConfigError("oracle agent requires access to the true parameters");
  }
  AgentKind kind() const override { return AgentKind::oracle; }
  Treatment act(const Graph& g, int budget, Rng& rng) override { return oracle_(g, budget, rng).z; }
  void observe(const DesignMatrix&, const Eigen::VectorXd&) override {}
  Eigen::VectorXd estimate() const override { return Eigen::VectorXd::Zero(dimension_); }

 private:
  OracleFn oracle_;
  int dimension_;
};

}  // namespace

std::unique_ptr<Agent> make_agent(const AgentConfig& config, OracleFn oracle) {
  switch (config.kind) {
    case AgentKind::thompson: return std::make_unique<ThompsonAgent>(config, false);
    case AgentKind::sum_linear_ts: return std::make_unique<ThompsonAgent>(config, true);
    case AgentKind::network_ucl: return std::make_unique<UclAgent>(config);
    case AgentKind::random_policy: return std::make_unique<RandomAgent>(config.shape.dimension());
    case AgentKind::oracle: return std::make_unique<OracleAgent>(std::move(oracle), config.shape.dimension());
  }
  throw ContractViolation("unhandled agent kind");
}

const GaussianPosterior* posterior_of(const Agent& agent) {
  if (auto* ts = dynamic_cast<const ThompsonAgent*>(&agent)) return &ts->posterior();
  return nullptr;
}

}  // namespace netbandit
