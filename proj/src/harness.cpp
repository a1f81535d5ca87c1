#include "netbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <thread>
#include <variant>

#include "netbandit/design.hpp"
#include "netbandit/errors.hpp"

namespace netbandit {

int BudgetRule::resolve(int n) const {
  switch (kind) {
    case Kind::absolute: return std::clamp(static_cast<int>(value), 0, n);
    case Kind::fraction: return std::clamp(static_cast<int>(std::lround(value * n)), 0, n);
    case Kind::unlimited: return n;
  }
  return n;
}

std::string BudgetRule::describe() const {
  switch (kind) {
    case Kind::absolute: return std::to_string(static_cast<int>(value));
    case Kind::fraction: {
      // Shortest form that reads back exactly.
      char buf[64];
      for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, value);
        if (std::strtod(buf, nullptr) == value) break;
      }
      std::string s = buf;
      if (s.find_first_of(".e") == std::string::npos) s += ".0";
      return s;
    }
    case Kind::unlimited: return "unlimited";
  }
  return "unlimited";
}

BudgetRule BudgetRule::parse(const std::string& text) {
  BudgetRule b;
  if (text == "unlimited") {
    b.kind = Kind::unlimited;
    b.value = 0;
    return b;
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw ConfigError("budget '" + text + "' is not an integer, a fraction or 'unlimited'");
  if (text.find_first_of(".eE") != std::string::npos) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("fractional budget must lie in [0, 1]");
    b.kind = Kind::fraction;
  } else {
    if (v < 0) throw ConfigError("budget must be non-negative");
    b.kind = Kind::absolute;
  }
  b.value = v;
  return b;
}

ThetaGenSpec ExperimentConfig::theta_spec() const {
  ThetaGenSpec s;
  s.group_count = network.group_count();
  s.cutoff = environment.cutoff;
  s.mu_mean = environment.mu_mean;
  s.mu_sd = environment.mu_sd;
  s.gamma_slope = environment.gamma_slope;
  s.gamma_sd = environment.gamma_sd;
  return s;
}

ModelShape ExperimentConfig::learner_shape() const {
  return ModelShape{network.group_count(), agent.cutoff >= 0 ? agent.cutoff : environment.cutoff};
}

ConfidenceParams ExperimentConfig::confidence() const {
  if (agent.confidence) {
    ConfidenceParams c = *agent.confidence;
    c.lambda = agent.lambda;
    c.delta = agent.delta;
    return c;
  }
  ThetaGenSpec spec = theta_spec();
  spec.cutoff = learner_shape().cutoff;
  return default_confidence_params(spec, environment.sigma, agent.lambda, agent.delta);
}

void validate(const ExperimentConfig& cfg) {
  const auto& net = cfg.network;
  if (net.n < 1) throw ConfigError("network.n must be at least 1");
  if (net.groups < 0) throw ConfigError("network.groups must be non-negative (0 = ceil(n/10))");
  if (net.model == NetworkModel::sbm) {
    validate(SbmParams::planted(net.group_count(), net.p_within, net.across()));
  } else {
    validate(net.latent);
  }
  const auto& env = cfg.environment;
  if (env.cutoff < 0) throw ConfigError("reward.cutoff must be non-negative");
  validate(NoiseSpec{env.sigma});
  validate(cfg.theta_spec());
  if (env.explicit_theta) {
    validate(*env.explicit_theta);
    if (env.explicit_theta->group_count() != net.group_count() || env.explicit_theta->cutoff() != env.cutoff)
      throw ConfigError("explicit theta does not match (groups, cutoff)");
  }
  if (cfg.agent.cutoff < -1) throw ConfigError("agent.cutoff must be >= 0 (or -1 to follow the environment)");
  if (!(cfg.agent.lambda > 0)) throw ConfigError("agent.lambda must be positive");
  if (!(cfg.agent.noise_var > 0)) throw ConfigError("agent.noise_var must be positive");
  if (!std::isfinite(cfg.agent.prior_mean)) throw ConfigError("agent.prior_mean must be finite");
  if (cfg.agent.prior_mean_vector.size() > 0) {
    if (cfg.agent.prior_mean_vector.size() != cfg.learner_shape().dimension())
      throw ConfigError("agent.prior_mean_vector must have D = k + C + 1 = " +
                        std::to_string(cfg.learner_shape().dimension()) + " entries");
    if (!cfg.agent.prior_mean_vector.allFinite()) throw ConfigError("agent.prior_mean_vector must be finite");
  }
  if (!(cfg.agent.delta > 0 && cfg.agent.delta < 1)) throw ConfigError("agent.delta must lie in (0, 1)");
  if (cfg.agent.kind == AgentKind::network_ucl) validate(cfg.confidence());
  if (cfg.budget.kind == BudgetRule::Kind::absolute && cfg.budget.value < 0)
    throw ConfigError("budget must be non-negative");
  if (cfg.rounds < 1) throw ConfigError("experiment.rounds must be at least 1");
  if (cfg.replications < 1) throw ConfigError("experiment.replications must be at least 1");
  for (const auto* s : {&cfg.agent.solver, &cfg.oracle}) {
    if (s->local.restarts < 1) throw ConfigError("solver restarts must be at least 1");
    if (!(s->bnb.time_limit_s > 0)) throw ConfigError("bnb time limit must be positive");
    if (!(s->bnb.gap_tolerance >= 0)) throw ConfigError("bnb gap tolerance must be non-negative");
  }
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0x9ae16a3b2f90404fULL;
  for (unsigned char c : canonical_text(cfg)) h = splitmix64(h ^ c);
  return h;
}

std::optional<Solution> OracleCache::find(std::uint64_t key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void OracleCache::store(std::uint64_t key, const Solution& s) {
  std::lock_guard lock(mutex_);
  entries_.emplace(key, s);
}

std::size_t OracleCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t hash_doubles(std::uint64_t h, const Eigen::VectorXd& v) {
  for (double x : v) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    h = splitmix64(h ^ bits);
  }
  return h;
}

std::uint64_t hash_solver(std::uint64_t h, const SolverOptions& s) {
  h = splitmix64(h ^ static_cast<std::uint64_t>(s.kind));
  h = splitmix64(h ^ static_cast<std::uint64_t>(s.local.restarts));
  h = splitmix64(h ^ static_cast<std::uint64_t>(s.exact_limit));
  h = splitmix64(h ^ static_cast<std::uint64_t>(s.bnb.time_limit_s * 1e6));
  h = splitmix64(h ^ static_cast<std::uint64_t>(s.bnb.gap_tolerance * 1e12));
  return h;
}

Graph sample_network(const NetworkConfig& net, Rng& rng) {
  if (net.model == NetworkModel::sbm)
    return sample_sbm(SbmParams::planted(net.group_count(), net.p_within, net.across()), net.n, rng);
  return sample_latent_space(net.latent, net.n, rng);
}

// Ground truth of one replication: additive or non-additive parameters.
struct Environment {
  std::variant<Theta, MisspecTheta> theta;
  const ExperimentConfig* cfg;

  Eigen::VectorXd expected(const Graph& g, const Treatment& z) const {
    if (auto* t = std::get_if<Theta>(&theta)) return expected_rewards(g, z, *t);
    return expected_rewards_misspec(g, z, std::get<MisspecTheta>(theta));
  }

  std::uint64_t hash() const {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    if (auto* t = std::get_if<Theta>(&theta)) return hash_doubles(hash_doubles(h, t->mu), t->gamma);
    const auto& m = std::get<MisspecTheta>(theta);
    return hash_doubles(hash_doubles(hash_doubles(h ^ 1, m.mu), m.gamma0), m.gamma1);
  }

  Solution best(const Graph& g, int budget, const SolverOptions& options, Rng& rng) const {
    if (auto* t = std::get_if<Theta>(&theta)) return oracle_step(*t, g, budget, options, rng);
    const auto& m = std::get<MisspecTheta>(theta);
    auto f = [&](const Treatment& z) { return expected_rewards_misspec(g, z, m).sum(); };
    const bool exhaustive = options.kind == SolverKind::bruteforce ||
                            (options.kind != SolverKind::local_search && g.size() <= std::max(options.exact_limit, 20));
    if (exhaustive) return enumerate_best(g.size(), budget, f);
    return local_search_generic(g.size(), budget, f, options.local.restarts, rng);
  }
};

Environment draw_environment(const ExperimentConfig& cfg, Rng& env_rng) {
  const auto spec = cfg.theta_spec();
  Rng fixed_rng(derive_seed(cfg.seed, 0xf1ced7e7aULL));
  Rng& rng = cfg.environment.fixed_theta ? fixed_rng : env_rng;
  if (cfg.environment.model == RewardModel::misspec) return Environment{sample_misspec_theta(spec, rng), &cfg};
  if (cfg.environment.explicit_theta) return Environment{*cfg.environment.explicit_theta, &cfg};
  return Environment{sample_theta(spec, rng), &cfg};
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, int replication, OracleCache* cache) {
  RunResult out;
  out.replication = replication;
  out.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(replication));
  out.config_hash = config_hash(cfg);
  const auto run_start = Clock::now();
  try {
    validate(cfg);
    Rng env_rng(derive_seed(out.seed, 1));
    Rng agent_rng(derive_seed(out.seed, 2));
    const std::uint64_t oracle_base = derive_seed(out.seed, 3);

    const Environment env = draw_environment(cfg, env_rng);
    const std::uint64_t env_hash = env.hash();
    const ModelShape shape = cfg.learner_shape();
    const NoiseSpec noise{cfg.environment.sigma};

    AgentConfig ac;
    ac.kind = cfg.agent.kind;
    ac.shape = shape;
    ac.prior_mean = cfg.agent.prior_mean;
    ac.prior_mean_vector = cfg.agent.prior_mean_vector;
    ac.lambda = cfg.agent.lambda;
    ac.noise_var = cfg.agent.noise_var;
    ac.solver = cfg.agent.solver;
    ac.candidates = cfg.agent.candidates;
    if (ac.kind == AgentKind::network_ucl) ac.confidence = cfg.confidence();
    auto agent = make_agent(ac, [&](const Graph& g, int b, Rng& rng) { return env.best(g, b, cfg.oracle, rng); });

    const std::uint64_t oracle_cfg_hash = hash_solver(env_hash, cfg.oracle);
    double cumulative = 0.0;
    for (int t = 1; t <= cfg.rounds; ++t) {
      const auto round_start = Clock::now();
      const Graph g = sample_network(cfg.network, env_rng);
      const int budget = cfg.budget.resolve(g.size());

      const Treatment z = agent->act(g, budget, agent_rng);
      const int treated = static_cast<int>(std::count(z.begin(), z.end(), 1));
      detail::require(treated <= budget, "agent exceeded the budget");

      const Eigen::VectorXd expected = env.expected(g, z);
      const Eigen::VectorXd realized = realize_rewards(expected, noise, env_rng);
      agent->observe(build_design(g, z, shape.group_count, shape.cutoff), realized);

      const std::uint64_t round_seed = derive_seed(oracle_base, static_cast<std::uint64_t>(t));
      std::uint64_t key = splitmix64(oracle_cfg_hash ^ g.fingerprint());
      key = splitmix64(key ^ static_cast<std::uint64_t>(budget));
      key = splitmix64(key ^ round_seed);
      std::optional<Solution> best = cache ? cache->find(key) : std::nullopt;
      if (!best) {
        Rng oracle_rng(round_seed);
        best = env.best(g, budget, cfg.oracle, oracle_rng);
        if (cache) cache->store(key, *best);
      }

      RoundRecord rec;
      rec.t = t;
      rec.treated = treated;
      rec.chosen_value = expected.sum();
      rec.oracle_status = best->status == SolveStatus::heuristic ? SolveStatus::heuristic : SolveStatus::exact;
      rec.oracle_value = best->objective;
      // Any feasible value is a valid lower bound on the optimum.
      if (rec.lower_bound()) rec.oracle_value = std::max(rec.oracle_value, rec.chosen_value);
      rec.regret = rec.oracle_value - rec.chosen_value;
      rec.realized_total = realized.sum();
      rec.graph_fingerprint = g.fingerprint();
      if (cfg.record_posterior) rec.posterior_mean = agent->estimate();
      rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - round_start).count();

      cumulative += rec.regret;
      out.cumulative_regret.push_back(cumulative);
      out.records.push_back(std::move(rec));
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.wall_s = std::chrono::duration<double>(Clock::now() - run_start).count();
  return out;
}

Aggregate aggregate(std::vector<RunResult> runs, int rounds) {
  Aggregate a;
  a.rounds = rounds;
  a.mean_cumulative.assign(rounds, 0.0);
  a.se_cumulative.assign(rounds, 0.0);
  a.mean_increment.assign(rounds, 0.0);
  a.se_increment.assign(rounds, 0.0);

  std::vector<const RunResult*> good;
  for (const auto& r : runs) {
    if (r.ok() && static_cast<int>(r.records.size()) == rounds) good.push_back(&r);
    else a.failures.emplace_back(r.replication, r.ok() ? "incomplete run" : r.error);
  }
  a.replications = static_cast<int>(good.size());
  long flagged = 0, total = 0;
  if (!good.empty()) {
    const double m = static_cast<double>(good.size());
    for (int t = 0; t < rounds; ++t) {
      double sc = 0, si = 0;
      for (const auto* r : good) {
        sc += r->cumulative_regret[t];
        si += r->records[t].regret;
        flagged += r->records[t].lower_bound();
        ++total;
      }
      const double mc = sc / m, mi = si / m;
      double vc = 0, vi = 0;
      for (const auto* r : good) {
        vc += (r->cumulative_regret[t] - mc) * (r->cumulative_regret[t] - mc);
        vi += (r->records[t].regret - mi) * (r->records[t].regret - mi);
      }
      a.mean_cumulative[t] = mc;
      a.mean_increment[t] = mi;
      if (good.size() > 1) {
        a.se_cumulative[t] = std::sqrt(vc / (m - 1)) / std::sqrt(m);
        a.se_increment[t] = std::sqrt(vi / (m - 1)) / std::sqrt(m);
      }
    }
  }
  a.lower_bound_fraction = total ? static_cast<double>(flagged) / total : 0.0;
  a.runs = std::move(runs);
  return a;
}

Aggregate run_replications(const ExperimentConfig& cfg, int jobs, OracleCache* cache) {
  validate(cfg);
  const int reps = cfg.replications;
  std::vector<RunResult> runs(reps);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < reps; r = next++) runs[r] = run_experiment(cfg, r, cache);
  };
  jobs = std::clamp(jobs, 1, reps);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return aggregate(std::move(runs), cfg.rounds);
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::n: return "n";
    case SweepAxis::budget: return "budget";
    case SweepAxis::prior_mean: return "prior_mean";
    case SweepAxis::agent: return "agent";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "n") return SweepAxis::n;
  if (s == "budget") return SweepAxis::budget;
  if (s == "prior_mean") return SweepAxis::prior_mean;
  if (s == "agent") return SweepAxis::agent;
  throw ConfigError("unknown sweep axis '" + s + "' (expected n, budget, prior_mean or agent)");
}

ExperimentConfig apply_axis(const ExperimentConfig& cfg, SweepAxis axis, const std::string& value) {
  ExperimentConfig out = cfg;
  auto number = [&](const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) throw ConfigError(what + " value '" + value + "' is not a number");
    return v;
  };
  switch (axis) {
    case SweepAxis::n: {
      const double v = number("n");
      if (v < 1 || v != std::floor(v)) throw ConfigError("n must be a positive integer");
      out.network.n = static_cast<int>(v);
      break;
    }
    case SweepAxis::budget: out.budget = BudgetRule::parse(value); break;
    case SweepAxis::prior_mean: out.agent.prior_mean = number("prior_mean"); break;
    case SweepAxis::agent: out.agent.kind = agent_kind_from_string(value); break;
  }
  validate(out);
  return out;
}

std::vector<SweepArm> sweep(const ExperimentConfig& cfg, SweepAxis axis, const std::vector<std::string>& values,
                            int jobs) {
  std::vector<SweepArm> arms;
  for (const auto& v : values) arms.push_back(SweepArm{v, apply_axis(cfg, axis, v), {}});
  OracleCache cache;
  for (auto& arm : arms) arm.result = run_replications(arm.config, jobs, &cache);
  return arms;
}

double loglog_slope(const std::vector<double>& cumulative, int from, int to) {
  detail::require(from >= 1 && to <= static_cast<int>(cumulative.size()) && from < to, "bad slope window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int t = from; t <= to; ++t) {
    const double y = cumulative[t - 1];
    if (!(y > 0)) continue;
    const double lx = std::log(static_cast<double>(t)), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  detail::require(m >= 2, "not enough positive points for a log-log slope");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace netbandit
