#include "netbandit/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "netbandit/errors.hpp"

namespace netbandit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest decimal form that reads back to the same double.
std::string fmt(double v) {
  char buf[64];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string join(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

double to_double(const std::string& v) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || !std::isfinite(d)) throw ConfigError("expected a finite number, got '" + v + "'");
  return d;
}

long long to_int(const std::string& v) {
  std::size_t used = 0;
  long long d = 0;
  try {
    d = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size()) throw ConfigError("expected an integer, got '" + v + "'");
  return d;
}

std::uint64_t to_u64(const std::string& v) {
  std::size_t used = 0;
  unsigned long long d = 0;
  try {
    if (!v.empty() && v[0] != '-') d = std::stoull(v, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size()) throw ConfigError("expected a non-negative integer, got '" + v + "'");
  return d;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

Eigen::VectorXd to_vector(const std::string& v) {
  std::vector<double> xs;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) xs.push_back(to_double(trim(item)));
  if (xs.empty()) throw ConfigError("expected a comma-separated list of numbers");
  return Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

int to_count(const std::string& v) {
  const long long x = to_int(v);
  if (x < 0 || x > 1'000'000'000) throw ConfigError("expected a non-negative integer, got '" + v + "'");
  return static_cast<int>(x);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

void add_solver_keys(std::map<std::string, Setter>& keys, const std::string& section,
                     SolverOptions ExperimentConfig::*pick_oracle, bool agent) {
  auto get = [pick_oracle, agent](ExperimentConfig& c) -> SolverOptions& {
    return agent ? c.agent.solver : c.*pick_oracle;
  };
  keys[section + ".solver"] = [get](ExperimentConfig& c, const std::string& v) { get(c).kind = solver_kind_from_string(v); };
  // Local-search restarts, also used to seed the branch-and-bound incumbent.
  keys[section + ".restarts"] = [get](ExperimentConfig& c, const std::string& v) {
    get(c).local.restarts = to_count(v);
    get(c).bnb.seed_restarts = get(c).local.restarts;
  };
  keys[section + ".exact_limit"] = [get](ExperimentConfig& c, const std::string& v) {
    get(c).exact_limit = to_count(v);
  };
  keys[section + ".time_limit"] = [get](ExperimentConfig& c, const std::string& v) {
    get(c).bnb.time_limit_s = to_double(v);
  };
  keys[section + ".gap"] = [get](ExperimentConfig& c, const std::string& v) { get(c).bnb.gap_tolerance = to_double(v); };
  keys[section + ".max_nodes"] = [get](ExperimentConfig& c, const std::string& v) { get(c).bnb.max_nodes = to_count(v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> k;
    // network
    k["network.model"] = [](ExperimentConfig& c, const std::string& v) {
      if (v == "sbm") c.network.model = NetworkModel::sbm;
      else if (v == "latent_space") c.network.model = NetworkModel::latent_space;
      else throw ConfigError("expected sbm or latent_space, got '" + v + "'");
    };
    k["network.n"] = [](ExperimentConfig& c, const std::string& v) { c.network.n = to_count(v); };
    k["network.groups"] = [](ExperimentConfig& c, const std::string& v) { c.network.groups = to_count(v); };
    k["network.p_within"] = [](ExperimentConfig& c, const std::string& v) { c.network.p_within = to_double(v); };
    k["network.p_across"] = [](ExperimentConfig& c, const std::string& v) {
      if (v == "1/n") {
        c.network.p_across_inverse_n = true;
      } else {
        c.network.p_across_inverse_n = false;
        c.network.p_across = to_double(v);
      }
    };
    k["network.alpha"] = [](ExperimentConfig& c, const std::string& v) { c.network.latent.alpha = to_double(v); };
    k["network.latent_dim"] = [](ExperimentConfig& c, const std::string& v) { c.network.latent.latent_dim = to_count(v); };
    k["network.u_scale"] = [](ExperimentConfig& c, const std::string& v) { c.network.latent.u_scale = to_double(v); };
    k["network.a_scale"] = [](ExperimentConfig& c, const std::string& v) { c.network.latent.a_scale = to_double(v); };
    k["network.b_scale"] = [](ExperimentConfig& c, const std::string& v) { c.network.latent.b_scale = to_double(v); };
    // reward
    k["reward.model"] = [](ExperimentConfig& c, const std::string& v) {
      if (v == "sania") c.environment.model = RewardModel::sania;
      else if (v == "misspec") c.environment.model = RewardModel::misspec;
      else throw ConfigError("expected sania or misspec, got '" + v + "'");
    };
    k["reward.cutoff"] = [](ExperimentConfig& c, const std::string& v) { c.environment.cutoff = to_count(v); };
    k["reward.mu_mean"] = [](ExperimentConfig& c, const std::string& v) { c.environment.mu_mean = to_double(v); };
    k["reward.mu_sd"] = [](ExperimentConfig& c, const std::string& v) { c.environment.mu_sd = to_double(v); };
    k["reward.gamma_slope"] = [](ExperimentConfig& c, const std::string& v) { c.environment.gamma_slope = to_double(v); };
    k["reward.gamma_sd"] = [](ExperimentConfig& c, const std::string& v) { c.environment.gamma_sd = to_double(v); };
    k["reward.sigma"] = [](ExperimentConfig& c, const std::string& v) { c.environment.sigma = to_double(v); };
    k["reward.fixed_theta"] = [](ExperimentConfig& c, const std::string& v) { c.environment.fixed_theta = to_bool(v); };
    k["reward.mu"] = [](ExperimentConfig& c, const std::string& v) {
      if (!c.environment.explicit_theta) c.environment.explicit_theta = Theta{};
      c.environment.explicit_theta->mu = to_vector(v);
    };
    k["reward.gamma"] = [](ExperimentConfig& c, const std::string& v) {
      if (!c.environment.explicit_theta) c.environment.explicit_theta = Theta{};
      c.environment.explicit_theta->gamma = to_vector(v);
    };
    // agent
    k["agent.kind"] = [](ExperimentConfig& c, const std::string& v) { c.agent.kind = agent_kind_from_string(v); };
    k["agent.prior_mean"] = [](ExperimentConfig& c, const std::string& v) { c.agent.prior_mean = to_double(v); };
    k["agent.prior_mean_vector"] = [](ExperimentConfig& c, const std::string& v) {
      c.agent.prior_mean_vector = to_vector(v);
    };
    k["agent.lambda"] = [](ExperimentConfig& c, const std::string& v) { c.agent.lambda = to_double(v); };
    k["agent.noise_var"] = [](ExperimentConfig& c, const std::string& v) { c.agent.noise_var = to_double(v); };
    k["agent.cutoff"] = [](ExperimentConfig& c, const std::string& v) {
      c.agent.cutoff = v == "auto" ? -1 : to_count(v);
    };
    k["agent.delta"] = [](ExperimentConfig& c, const std::string& v) { c.agent.delta = to_double(v); };
    k["agent.ucl_exact_limit"] = [](ExperimentConfig& c, const std::string& v) {
      c.agent.candidates.exact_limit = to_count(v);
    };
    k["agent.ucl_posterior_samples"] = [](ExperimentConfig& c, const std::string& v) {
      c.agent.candidates.posterior_samples = to_count(v);
    };
    k["agent.ucl_restarts"] = [](ExperimentConfig& c, const std::string& v) {
      c.agent.candidates.local_search_restarts = to_count(v);
    };
    add_solver_keys(k, "agent", nullptr, true);
    add_solver_keys(k, "oracle", &ExperimentConfig::oracle, false);
    // experiment
    k["experiment.budget"] = [](ExperimentConfig& c, const std::string& v) { c.budget = BudgetRule::parse(v); };
    k["experiment.rounds"] = [](ExperimentConfig& c, const std::string& v) { c.rounds = to_count(v); };
    k["experiment.replications"] = [](ExperimentConfig& c, const std::string& v) { c.replications = to_count(v); };
    k["experiment.seed"] = [](ExperimentConfig& c, const std::string& v) { c.seed = to_u64(v); };
    k["experiment.record_posterior"] = [](ExperimentConfig& c, const std::string& v) {
      c.record_posterior = to_bool(v);
    };
    return k;
  }();
  return table;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  std::map<std::string, int> seen;
  const auto& table = setters();
  // Confidence overrides are applied last so that defaults see every other key.
  std::map<std::string, double> confidence;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"network", "reward", "agent", "oracle", "experiment"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = table.find(key);
    const bool conf_key = key == "agent.S" || key == "agent.R" || key == "agent.L";
    if (it == table.end() && !conf_key) throw ConfigError(where + ": unknown key '" + key + "'");
    if (auto prev = seen.find(key); prev != seen.end())
      throw ConfigError(where + ": duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) +
                        ")");
    seen[key] = lineno;
    try {
      if (key == "agent.S" || key == "agent.R" || key == "agent.L") {
        confidence[key] = to_double(value);
        continue;
      }
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + key + ": " + e.what());
    }
  }
  try {
    if (!confidence.empty()) {
      ConfidenceParams p = cfg.confidence();
      if (auto f = confidence.find("agent.S"); f != confidence.end()) p.S = f->second;
      if (auto f = confidence.find("agent.R"); f != confidence.end()) p.R = f->second;
      if (auto f = confidence.find("agent.L"); f != confidence.end()) p.L = f->second;
      cfg.agent.confidence = p;
    }
    validate(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream o;
  const auto& net = c.network;
  o << "[network]\n";
  o << "model = " << (net.model == NetworkModel::sbm ? "sbm" : "latent_space") << "\n";
  o << "n = " << net.n << "\n";
  o << "groups = " << net.groups << "\n";
  o << "p_within = " << fmt(net.p_within) << "\n";
  o << "p_across = " << (net.p_across_inverse_n ? std::string("1/n") : fmt(net.p_across)) << "\n";
  o << "alpha = " << fmt(net.latent.alpha) << "\n";
  o << "latent_dim = " << net.latent.latent_dim << "\n";
  o << "u_scale = " << fmt(net.latent.u_scale) << "\n";
  o << "a_scale = " << fmt(net.latent.a_scale) << "\n";
  o << "b_scale = " << fmt(net.latent.b_scale) << "\n";
  const auto& env = c.environment;
  o << "\n[reward]\n";
  o << "model = " << (env.model == RewardModel::sania ? "sania" : "misspec") << "\n";
  o << "cutoff = " << env.cutoff << "\n";
  o << "mu_mean = " << fmt(env.mu_mean) << "\n";
  o << "mu_sd = " << fmt(env.mu_sd) << "\n";
  o << "gamma_slope = " << fmt(env.gamma_slope) << "\n";
  o << "gamma_sd = " << fmt(env.gamma_sd) << "\n";
  o << "sigma = " << fmt(env.sigma) << "\n";
  o << "fixed_theta = " << (env.fixed_theta ? "true" : "false") << "\n";
  if (env.explicit_theta) {
    o << "mu = " << join(env.explicit_theta->mu) << "\n";
    o << "gamma = " << join(env.explicit_theta->gamma) << "\n";
  }
  const auto& a = c.agent;
  o << "\n[agent]\n";
  o << "kind = " << to_string(a.kind) << "\n";
  o << "prior_mean = " << fmt(a.prior_mean) << "\n";
  if (a.prior_mean_vector.size() > 0) o << "prior_mean_vector = " << join(a.prior_mean_vector) << "\n";
  o << "lambda = " << fmt(a.lambda) << "\n";
  o << "noise_var = " << fmt(a.noise_var) << "\n";
  o << "cutoff = " << (a.cutoff < 0 ? std::string("auto") : std::to_string(a.cutoff)) << "\n";
  o << "delta = " << fmt(a.delta) << "\n";
  if (a.confidence) {
    o << "S = " << fmt(a.confidence->S) << "\n";
    o << "R = " << fmt(a.confidence->R) << "\n";
    o << "L = " << fmt(a.confidence->L) << "\n";
  }
  o << "ucl_exact_limit = " << a.candidates.exact_limit << "\n";
  o << "ucl_posterior_samples = " << a.candidates.posterior_samples << "\n";
  o << "ucl_restarts = " << a.candidates.local_search_restarts << "\n";
  auto solver = [&o](const SolverOptions& s) {
    o << "solver = " << to_string(s.kind) << "\n";
    o << "restarts = " << s.local.restarts << "\n";
    o << "exact_limit = " << s.exact_limit << "\n";
    o << "time_limit = " << fmt(s.bnb.time_limit_s) << "\n";
    o << "gap = " << fmt(s.bnb.gap_tolerance) << "\n";
    o << "max_nodes = " << s.bnb.max_nodes << "\n";
  };
  solver(a.solver);
  o << "\n[oracle]\n";
  solver(c.oracle);
  o << "\n[experiment]\n";
  o << "budget = " << c.budget.describe() << "\n";
  o << "rounds = " << c.rounds << "\n";
  o << "replications = " << c.replications << "\n";
  o << "seed = " << c.seed << "\n";
  o << "record_posterior = " << (c.record_posterior ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace netbandit
