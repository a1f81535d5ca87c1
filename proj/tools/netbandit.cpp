// netbandit: run regret experiments and sweeps from a config file.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "netbandit/config.hpp"
#include "netbandit/csv.hpp"
#include "netbandit/errors.hpp"
#include "netbandit/harness.hpp"

namespace fs = std::filesystem;
using namespace netbandit;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int default_jobs() {
  if (const char* env = std::getenv("NETBANDIT_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("NETBANDIT_JOBS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string v;
  while (std::getline(ss, v, ',')) {
    const auto b = v.find_first_not_of(' ');
    const auto e = v.find_last_not_of(' ');
    if (b == std::string::npos) throw ConfigError("empty entry in --values");
    out.push_back(v.substr(b, e - b + 1));
  }
  if (out.empty()) throw ConfigError("--values is empty");
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 0;
  bool no_timing = false;

  ExperimentConfig load() const {
    ExperimentConfig cfg = load_config(config);
    if (seed) cfg.seed = *seed;
    return cfg;
  }
  int resolved_jobs() const { return jobs > 0 ? jobs : default_jobs(); }
  CsvOptions csv() const { return CsvOptions{true, !no_timing}; }
};

int cmd_run(const Common& c) {
  const ExperimentConfig cfg = c.load();
  const Aggregate result = run_replications(cfg, c.resolved_jobs());
  std::ostringstream csv, summary, curve;
  write_csv(csv, csv_rows(cfg, result), c.csv());
  write_summary(summary, "run", cfg, result);
  write_curve(curve, result);
  if (c.out.empty()) {
    std::cout << csv.str();
    std::cerr << summary.str();
  } else {
    const fs::path out(c.out);
    write_file(out, csv.str());
    fs::path stem = out;
    stem.replace_extension();
    write_file(stem.string() + ".summary.txt", summary.str());
    write_file(stem.string() + ".curve.csv", curve.str());
    std::cout << summary.str();
  }
  return result.failures.empty() ? 0 : kExitRuntime;
}

int cmd_sweep(const Common& c, const std::string& axis_name, const std::string& values_text) {
  const SweepAxis axis = sweep_axis_from_string(axis_name);
  const auto values = split_values(values_text);
  const ExperimentConfig cfg = c.load();
  for (const auto& v : values) apply_axis(cfg, axis, v);  // reject bad values before running anything
  const auto arms = sweep(cfg, axis, values, c.resolved_jobs());

  const fs::path dir = c.out.empty() ? fs::path("sweep_" + axis_name) : fs::path(c.out);
  std::ostringstream combined, summary;
  bool failed = false;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const auto& arm = arms[i];
    const auto rows = csv_rows(arm.config, arm.result);
    std::ostringstream one, curve;
    write_csv(one, rows, c.csv());
    write_csv(combined, rows, CsvOptions{i == 0, !c.no_timing});
    write_curve(curve, arm.result);
    write_file(dir / (axis_name + "_" + arm.value + ".csv"), one.str());
    write_file(dir / (axis_name + "_" + arm.value + ".curve.csv"), curve.str());
    write_summary(summary, axis_name + "=" + arm.value, arm.config, arm.result);
    failed = failed || !arm.result.failures.empty();
  }
  write_file(dir / "combined.csv", combined.str());
  write_file(dir / "summary.txt", summary.str());
  std::cout << summary.str() << "wrote " << arms.size() << " arms to " << dir.string() << "\n";
  return failed ? kExitRuntime : 0;
}

int cmd_validate(const Common& c, const std::string& dump_path) {
  const ExperimentConfig cfg = c.load();
  const ModelShape shape = cfg.learner_shape();
  const int n = cfg.network.n;
  std::cout << "config ok: " << c.config << "\n";
  std::cout << "n = " << n << "\n";
  std::cout << "k = " << shape.group_count << "\n";
  std::cout << "C = " << shape.cutoff << "\n";
  std::cout << "D = " << shape.group_count << " + " << shape.cutoff + 1 << " = " << shape.dimension() << "\n";
  std::cout << "B = " << cfg.budget.resolve(n) << " (" << cfg.budget.describe() << ")\n";
  if (cfg.network.model == NetworkModel::sbm) {
    const auto params = SbmParams::planted(cfg.network.group_count(), cfg.network.p_within, cfg.network.across());
    std::cout << "expected degree = " << sbm_expected_degree(params, n) << "\n";
  } else {
    Rng rng(derive_seed(cfg.seed, 0xde9));
    double total = 0;
    const int draws = 20;
    for (int i = 0; i < draws; ++i) total += 2.0 * sample_latent_space(cfg.network.latent, n, rng).edge_count() / n;
    std::cout << "expected degree ~ " << total / draws << " (Monte Carlo, " << draws << " graphs)\n";
  }
  const ConfidenceParams p = cfg.confidence();
  std::cout << "confidence S = " << p.S << ", R = " << p.R << ", L = " << p.L << ", delta = " << p.delta
            << ", lambda = " << p.lambda << "\n";
  std::cout << "config hash = " << std::hex << config_hash(cfg) << std::dec << "\n";

  if (!dump_path.empty()) {
    if (cfg.environment.model != RewardModel::sania)
      throw ConfigError("the integer encoding exists only for the additive reward model");
    Rng rng(derive_seed(cfg.seed, 0xe4c));
    const Theta theta = cfg.environment.explicit_theta ? *cfg.environment.explicit_theta
                                                       : sample_theta(cfg.theta_spec(), rng);
    const Graph g = cfg.network.model == NetworkModel::sbm
                        ? sample_sbm(SbmParams::planted(cfg.network.group_count(), cfg.network.p_within,
                                                        cfg.network.across()),
                                     n, rng)
                        : sample_latent_space(cfg.network.latent, n, rng);
    const BudgetedProblem problem{g, theta, cfg.budget.resolve(n)};
    std::ostringstream dump;
    IntegerEncoding::build(problem).dump(dump);
    write_file(dump_path, dump.str());
    std::cout << "wrote integer encoding of one sampled instance to " << dump_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thompson sampling under network interference: regret experiments"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&common](CLI::App* sub, bool outputs) {
    sub->add_option("config", common.config, "config file")->required();
    sub->add_option("--seed", common.seed, "master seed (overrides the config)");
    if (outputs) {
      sub->add_option("--out", common.out, "output path");
      sub->add_option("--jobs", common.jobs, "worker threads (default: NETBANDIT_JOBS or 1)")
          ->check(CLI::PositiveNumber);
      sub->add_flag("--no-timing", common.no_timing, "write wall_ms as 0 so files are byte-reproducible");
    }
  };

  auto* run = app.add_subcommand("run", "run replications and write a regret CSV");
  add_common(run, true);

  std::string axis, values;
  auto* sw = app.add_subcommand("sweep", "run one aggregate per axis value with paired seeds");
  add_common(sw, true);
  sw->add_option("--axis", axis, "n, budget, prior_mean or agent")->required();
  sw->add_option("--values", values, "comma-separated values")->required();

  std::string dump_path;
  auto* val = app.add_subcommand("validate", "check a config and print derived quantities");
  add_common(val, false);
  val->add_option("--dump-encoding", dump_path, "write the integer encoding of one sampled instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(common);
    if (*sw) return cmd_sweep(common, axis, values);
    return cmd_validate(common, dump_path);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
