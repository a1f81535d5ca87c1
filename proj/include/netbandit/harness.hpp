#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "netbandit/agents.hpp"
#include "netbandit/graph.hpp"
#include "netbandit/optimize.hpp"
#include "netbandit/reward.hpp"

namespace netbandit {

enum class NetworkModel { sbm, latent_space };
enum class RewardModel { sania, misspec };

struct NetworkConfig {
  NetworkModel model = NetworkModel::sbm;
  int n = 100;
  int groups = 0;  // 0: ceil(n / 10)
  double p_within = 0.3;
  double p_across = 0.01;
  bool p_across_inverse_n = false;  // use 1 / n instead of p_across
  LatentSpaceParams latent;

  int group_count() const { return groups > 0 ? groups : (n + 9) / 10; }
  double across() const { return p_across_inverse_n ? 1.0 / n : p_across; }
};

struct EnvironmentConfig {
  RewardModel model = RewardModel::sania;
  int cutoff = 15;
  double mu_mean = 2.0;
  double mu_sd = 1.0;
  double gamma_slope = 1.0;
  double gamma_sd = 1.0;
  double sigma = 1.0;
  /// Same theta for every replication (frequentist curves).
  bool fixed_theta = false;
  std::optional<Theta> explicit_theta;
};

struct BudgetRule {
  enum class Kind { absolute, fraction, unlimited };
  Kind kind = Kind::fraction;
  double value = 0.2;

  int resolve(int n) const;
  std::string describe() const;
  static BudgetRule parse(const std::string& text);
};

struct AgentSettings {
  AgentKind kind = AgentKind::thompson;
  double prior_mean = 1.0;
  Eigen::VectorXd prior_mean_vector;  // per-coordinate prior mean; overrides prior_mean
  double lambda = 0.1;
  double noise_var = 1.0;
  int cutoff = -1;  // learner cutoff; -1 follows the environment
  SolverOptions solver{SolverKind::local_search, LocalSearchOptions{20}, {}, 12};
  double delta = 0.05;
  std::optional<ConfidenceParams> confidence;
  UclCandidatePolicy candidates;
};

struct ExperimentConfig {
  NetworkConfig network;
  EnvironmentConfig environment;
  AgentSettings agent;
  BudgetRule budget;
  SolverOptions oracle{SolverKind::automatic, LocalSearchOptions{100}, {}, 12};
  int rounds = 100;
  int replications = 50;
  std::uint64_t seed = 1;
  bool record_posterior = false;

  ThetaGenSpec theta_spec() const;
  ModelShape learner_shape() const;
  ConfidenceParams confidence() const;
};

/// Throws ConfigError on inconsistent settings.
void validate(const ExperimentConfig& cfg);

/// Canonical key = value text for a config; stable across runs.
std::string canonical_text(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct RoundRecord {
  int t = 0;
  int treated = 0;
  double chosen_value = 0.0;   // expected total reward of the chosen z under the true theta
  double oracle_value = 0.0;
  SolveStatus oracle_status = SolveStatus::exact;
  double regret = 0.0;
  double realized_total = 0.0;
  double wall_ms = 0.0;
  std::uint64_t graph_fingerprint = 0;
  Eigen::VectorXd posterior_mean;  // empty unless record_posterior

  /// Regret computed against a heuristic oracle is only a lower bound.
  bool lower_bound() const { return oracle_status == SolveStatus::heuristic; }
};

struct RunResult {
  int replication = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<RoundRecord> records;
  std::vector<double> cumulative_regret;
  double wall_s = 0.0;
  std::string error;  // non-empty if the replication aborted

  bool ok() const { return error.empty(); }
};

/// Oracle results shared across runs on identical environments (sweep arms
/// with paired seeds). Keyed on graph, theta, budget and round seed.
class OracleCache {
 public:
  std::optional<Solution> find(std::uint64_t key) const;
  void store(std::uint64_t key, const Solution& s);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::uint64_t, Solution> entries_;
};

/// One replication. The replication seed is derive_seed(cfg.seed, replication).
RunResult run_experiment(const ExperimentConfig& cfg, int replication, OracleCache* cache = nullptr);

struct Aggregate {
  int rounds = 0;
  int replications = 0;
  std::vector<double> mean_cumulative;
  std::vector<double> se_cumulative;
  std::vector<double> mean_increment;
  std::vector<double> se_increment;
  double lower_bound_fraction = 0.0;  // share of rounds with a heuristic oracle
  std::vector<std::pair<int, std::string>> failures;
  std::vector<RunResult> runs;
};

/// Mean and standard error (sample sd / sqrt(reps)) over successful runs.
Aggregate aggregate(std::vector<RunResult> runs, int rounds);

/// Runs cfg.replications replications on `jobs` threads. Results do not depend on jobs.
Aggregate run_replications(const ExperimentConfig& cfg, int jobs = 1, OracleCache* cache = nullptr);

enum class SweepAxis { n, budget, prior_mean, agent };
std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

/// Copy of cfg with the axis set to value. Throws ConfigError on bad values.
ExperimentConfig apply_axis(const ExperimentConfig& cfg, SweepAxis axis, const std::string& value);

struct SweepArm {
  std::string value;
  ExperimentConfig config;
  Aggregate result;
};

/// One aggregate per value with shared replication seeds.
std::vector<SweepArm> sweep(const ExperimentConfig& cfg, SweepAxis axis, const std::vector<std::string>& values,
                            int jobs = 1);

/// Least-squares slope of log(y) against log(t) over t in [from, to] (1-based rounds).
double loglog_slope(const std::vector<double>& cumulative, int from, int to);

}  // namespace netbandit
