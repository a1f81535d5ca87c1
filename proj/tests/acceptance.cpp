// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run all criteria
//   acceptance 3 5        run selected criteria
//
// Exit status is non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <thread>

#include <Eigen/Dense>

#include "netbandit/agents.hpp"
#include "netbandit/design.hpp"
#include "netbandit/harness.hpp"
#include "netbandit/optimize.hpp"
#include "netbandit/posterior.hpp"
#include "support.hpp"

using namespace netbandit;
using namespace testsupport;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// n = 100 protocol: ceil(n/10) groups, within 0.3, across 0.01, B = n/5, C = 15,
// prior mean 1, lambda 0.1, sigma 1. Heuristic-oracle rounds are flagged.
ExperimentConfig protocol(int rounds, int replications) {
  ExperimentConfig cfg;
  cfg.network.n = 100;
  cfg.network.p_within = 0.3;
  cfg.network.p_across = 0.01;
  cfg.environment.cutoff = 15;
  cfg.environment.sigma = 1.0;
  cfg.agent.kind = AgentKind::thompson;
  cfg.agent.prior_mean = 1.0;
  cfg.agent.lambda = 0.1;
  cfg.agent.solver = SolverOptions{SolverKind::local_search, LocalSearchOptions{20}, {}, 12};
  cfg.oracle = SolverOptions{SolverKind::local_search, LocalSearchOptions{100}, {}, 12};
  cfg.budget = BudgetRule::parse("0.2");
  cfg.rounds = rounds;
  cfg.replications = replications;
  cfg.seed = 20240601;
  return cfg;
}

std::string flagged(const Aggregate& a) {
  return a.lower_bound_fraction > 0 ? fmt(" [%.0f%% heuristic-oracle rounds: regret lower bound]",
                                          100 * a.lower_bound_fraction)
                                    : std::string();
}

std::string failures(const Aggregate& a) {
  return a.failures.empty() ? std::string() : fmt(" (%zu failed replications)", a.failures.size());
}

// 1. 1'(X theta) equals the summed expected rewards.
Verdict linear_model_equivalence() {
  const auto start = Clock::now();
  Rng rng(101);
  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 30)(rng);
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    const int C = std::uniform_int_distribution<int>(0, 15)(rng);
    const Graph g = sample_sbm(SbmParams::planted(k, 0.3, 0.05), n, rng);
    const Theta th = sample_theta(ThetaGenSpec{k, C}, rng);
    const Treatment z = random_treatment(n, rng);
    const double lhs = (build_design(g, z, k, C).values * th.flatten()).sum();
    const double rhs = expected_rewards(g, z, th).sum();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-12 && secs < 5.0,
          fmt("500 instances, max |diff| = %.3g (tol 1e-12), %.2f s (limit 5 s)", worst, secs)};
}

// 2. Posterior mean with zero prior mean equals the ridge solve.
Verdict posterior_is_ridge() {
  const auto start = Clock::now();
  const int n = 50, k = 5, C = 15, D = design_dimension(k, C);
  const double lambda = 0.1, sigma2 = 1.0;
  Rng rng(202);
  const Theta th = sample_theta(ThetaGenSpec{k, C}, rng);
  auto post = GaussianPosterior::from_prior(D, 0.0, lambda, sigma2);
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(D, D);
  Eigen::VectorXd xtr = Eigen::VectorXd::Zero(D);
  for (int t = 0; t < 20; ++t) {
    const Graph g = sample_sbm(SbmParams::planted(k, 0.3, 0.05), n, rng);
    const Treatment z = random_treatment(n, rng);
    const DesignMatrix x = build_design(g, z, k, C);
    const Eigen::VectorXd r = realize_rewards(expected_rewards(g, z, th), NoiseSpec{1.0}, rng);
    post = post.update(x, r);
    xtx += x.values.transpose() * x.values;
    xtr += x.values.transpose() * r;
  }
  const Eigen::MatrixXd a = xtx + lambda * sigma2 * Eigen::MatrixXd::Identity(D, D);
  const Eigen::VectorXd ridge = a.colPivHouseholderQr().solve(xtr);
  const double diff = (post.mean() - ridge).cwiseAbs().maxCoeff();
  const double secs = seconds_since(start);
  return {diff <= 1e-8 && secs < 5.0, fmt("max |diff| = %.3g (tol 1e-8), %.2f s (limit 5 s)", diff, secs)};
}

// 3. Branch-and-bound and local search against brute force.
Verdict optimizer_exactness() {
  const auto start = Clock::now();
  Rng rng(303);
  int bnb_mismatch = 0, ls_match = 0, ls_exceed = 0;
  const int instances = 200;
  for (int trial = 0; trial < instances; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const int k = std::uniform_int_distribution<int>(1, 3)(rng);
    const int C = std::uniform_int_distribution<int>(0, 5)(rng);
    const Graph g = random_graph(n, std::uniform_real_distribution<double>(0.1, 0.6)(rng), k, rng);
    const Theta th = random_theta(k, C, rng);  // mixed-sign gamma
    const int budget = trial % (n + 1);
    const BudgetedProblem p(g, th, budget);
    const double exact = solve_bruteforce(p).objective;
    BnbOptions bo;
    bo.gap_tolerance = 0.0;
    const Solution b = solve_bnb(p, bo);
    bnb_mismatch += !nearly_equal(b.objective, exact) || b.status == SolveStatus::heuristic;
    Rng ls_rng(derive_seed(303, trial));
    const double ls = solve_local_search(p, LocalSearchOptions{20}, ls_rng).objective;
    ls_match += nearly_equal(ls, exact);
    ls_exceed += ls > exact && !nearly_equal(ls, exact);
  }
  const double secs = seconds_since(start);
  const bool pass = bnb_mismatch == 0 && ls_match >= 0.95 * instances && ls_exceed == 0 && secs < 120;
  return {pass, fmt("bnb mismatches %d/200 (need 0); local search matches %d/200 (need >= 190), exceeds %d; "
                    "%.1f s (limit 120 s)",
                    bnb_mismatch, ls_match, ls_exceed, secs)};
}

// 4. Sublinear regret at the n = 100 protocol.
Verdict regret_sublinearity() {
  const auto start = Clock::now();
  const ExperimentConfig cfg = protocol(200, 50);
  const Aggregate a = run_replications(cfg, jobs());
  const double slope = loglog_slope(a.mean_cumulative, 100, 200);
  const double first = a.mean_increment.front(), last = a.mean_increment.back();
  const double secs = seconds_since(start);
  const bool pass = a.failures.empty() && slope < 0.8 && last < 0.15 * first && secs <= 1800;
  return {pass, fmt("log-log slope on [100,200] = %.3f (need < 0.8); per-round regret t=200 %.3f vs t=1 %.3f "
                    "(ratio %.3f, need < 0.15); cum regret %.1f +- %.1f; %.0f s (limit 1800 s)%s%s",
                    slope, last, first, last / first, a.mean_cumulative.back(), a.se_cumulative.back(), secs,
                    flagged(a).c_str(), failures(a).c_str())};
}

double paired_se(const Aggregate& a, const Aggregate& b, int t, double* mean) {
  const std::size_t m = a.runs.size();
  std::vector<double> d(m);
  for (std::size_t r = 0; r < m; ++r) d[r] = b.runs[r].cumulative_regret[t] - a.runs[r].cumulative_regret[t];
  double s = 0;
  for (double x : d) s += x;
  *mean = s / m;
  double v = 0;
  for (double x : d) v += (x - *mean) * (x - *mean);
  return std::sqrt(v / (m - 1)) / std::sqrt(double(m));
}

// 5. Full TS beats the collapsed linear TS and the random policy.
Verdict baseline_dominance() {
  const auto start = Clock::now();
  const ExperimentConfig cfg = protocol(100, 50);
  const auto arms = sweep(cfg, SweepAxis::agent, {"thompson", "sum_linear_ts", "random"}, jobs());
  bool pass = true;
  std::string detail = fmt("TS %.1f", arms[0].result.mean_cumulative.back());
  for (int i = 1; i < 3; ++i) {
    pass = pass && arms[i].result.failures.empty() && arms[0].result.failures.empty();
    double diff = 0;
    const double se = paired_se(arms[0].result, arms[i].result, cfg.rounds - 1, &diff);
    pass = pass && diff > 2 * se;
    detail += fmt("; %s %.1f (paired diff %.1f, 2 se = %.1f)", arms[i].value.c_str(),
                  arms[i].result.mean_cumulative.back(), diff, 2 * se);
  }
  return {pass, detail + fmt("; cumulative regret at T=100, %.0f s%s", seconds_since(start),
                             flagged(arms[0].result).c_str())};
}

// 6. Unconstrained agent has the highest early regret; budgets 10/25/50 end close together.
Verdict budget_sensitivity() {
  const auto start = Clock::now();
  const ExperimentConfig cfg = protocol(100, 50);
  const auto arms = sweep(cfg, SweepAxis::budget, {"10", "25", "50", "unlimited"}, jobs());
  bool early = true;
  std::string detail = "t=5:";
  for (const auto& arm : arms) detail += fmt(" B=%s %.1f", arm.value.c_str(), arm.result.mean_cumulative[4]);
  for (int i = 0; i < 3; ++i) early = early && arms[3].result.mean_cumulative[4] > arms[i].result.mean_cumulative[4];
  bool close = true;
  detail += "; T=100:";
  for (int i = 0; i < 3; ++i)
    detail += fmt(" B=%s %.1f+-%.1f", arms[i].value.c_str(), arms[i].result.mean_cumulative.back(),
                  arms[i].result.se_cumulative.back());
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const auto& a = arms[i].result;
      const auto& b = arms[j].result;
      const double gap = std::abs(a.mean_cumulative.back() - b.mean_cumulative.back());
      const double tol = 2 * std::hypot(a.se_cumulative.back(), b.se_cumulative.back());
      close = close && gap <= tol;
      if (gap > tol) detail += fmt(" [B=%s vs B=%s gap %.1f > %.1f]", arms[i].value.c_str(), arms[j].value.c_str(), gap, tol);
    }
  bool ok = true;
  for (const auto& arm : arms) ok = ok && arm.result.failures.empty();
  return {ok && early && close, fmt("unconstrained highest at t=5: %s; B in {10,25,50} within 2 se: %s; ",
                                    early ? "yes" : "no", close ? "yes" : "no") +
                                    detail + fmt("; %.0f s%s", seconds_since(start), flagged(arms[0].result).c_str())};
}

// 7. Prior mean 1 has the lowest cumulative regret at T = 100.
Verdict prior_mean_sweep() {
  const auto start = Clock::now();
  const ExperimentConfig cfg = protocol(100, 50);
  const auto arms = sweep(cfg, SweepAxis::prior_mean, {"-1", "0", "1", "2"}, jobs());
  std::string detail;
  bool pass = true;
  for (const auto& arm : arms) {
    detail += fmt(" mean %s: %.1f+-%.1f;", arm.value.c_str(), arm.result.mean_cumulative.back(),
                  arm.result.se_cumulative.back());
    pass = pass && arm.result.failures.empty();
    if (arm.value != "1") pass = pass && arms[2].result.mean_cumulative.back() < arm.result.mean_cumulative.back();
  }
  return {pass, "cumulative regret at T=100:" + detail + fmt(" %.0f s", seconds_since(start))};
}

// 8. Per-round regret settles under the non-additive reward.
Verdict misspecification_stability() {
  const auto start = Clock::now();
  ExperimentConfig cfg;
  cfg.network.n = 8;
  cfg.network.groups = 1;
  cfg.environment.model = RewardModel::misspec;
  cfg.environment.cutoff = 7;
  cfg.agent.kind = AgentKind::thompson;
  cfg.agent.prior_mean = 1.0;
  cfg.agent.solver.kind = SolverKind::bruteforce;
  cfg.oracle.kind = SolverKind::bruteforce;
  cfg.budget = BudgetRule::parse("unlimited");
  cfg.rounds = 100;
  cfg.replications = 100;
  cfg.seed = 808;
  const Aggregate a = run_replications(cfg, jobs());
  const double first = a.mean_increment.front(), last = a.mean_increment.back();
  return {a.failures.empty() && last < 0.5 * first,
          fmt("per-round regret t=100 %.3f vs t=1 %.3f (ratio %.3f, need < 0.5), 100 reps, %.1f s%s", last, first,
              last / first, seconds_since(start), failures(a).c_str())};
}

// 9. Coverage of the networkUCL confidence set.
Verdict ucl_coverage() {
  const auto start = Clock::now();
  const int n = 10, rounds = 500, budget = 2, C = 15;
  const ModelShape shape{1, C};
  Rng rng(909);
  const ThetaGenSpec spec{1, C};
  const Theta th = sample_theta(spec, rng);
  const ConfidenceParams c = default_confidence_params(spec, 1.0, 0.1, 0.05);
  const auto sbm = SbmParams::planted(1, 0.3, 0.01);
  SolverOptions brute;
  brute.kind = SolverKind::bruteforce;
  RidgeState state(shape.dimension(), c.lambda);
  int optimistic = 0;
  for (int t = 0; t < rounds; ++t) {
    const Graph g = sample_sbm(sbm, n, rng);
    const Solution best = solve_bruteforce(BudgetedProblem(g, th, budget));
    const UcbIndex ucb(state, c, n);
    optimistic += ucb(g, best.z, shape) >= best.objective;
    const Treatment z = ucl_step(state, shape, g, budget, c, {}, rng, brute);
    const Eigen::VectorXd r = realize_rewards(expected_rewards(g, z, th), NoiseSpec{1.0}, rng);
    state = state.update(build_design(g, z, 1, C).values, r);
  }
  const double rate = optimistic / double(rounds);
  return {rate >= 1 - c.delta, fmt("optimism rate %.3f over %d rounds (need >= %.2f), n=%d, %.1f s", rate, rounds,
                                   1 - c.delta, n, seconds_since(start))};
}

// 10. One replication at n = 1000.
Verdict scale_smoke() {
  const auto start = Clock::now();
  ExperimentConfig cfg = protocol(50, 1);
  cfg.network.n = 1000;
  cfg.network.p_across_inverse_n = true;  // sparse setting, mean degree ~4
  cfg.oracle.local.restarts = 20;
  const RunResult r = run_experiment(cfg, 0);
  if (!r.ok()) return {false, "replication failed: " + r.error};
  const int budget = cfg.budget.resolve(cfg.network.n);
  bool feasible = true, nonneg = true, prefix = true;
  int exact_rounds = 0;
  double sum = 0;
  std::set<std::uint64_t> graphs;
  std::vector<double> early, late;
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    feasible = feasible && rec.treated <= budget;
    if (rec.oracle_status == SolveStatus::exact) {
      ++exact_rounds;
      nonneg = nonneg && rec.regret >= -1e-9;
    }
    sum += rec.regret;
    prefix = prefix && std::abs(sum - r.cumulative_regret[i]) <= 1e-9 * std::max(1.0, sum);
    graphs.insert(rec.graph_fingerprint);
    if (rec.t >= 6 && rec.t <= 15) early.push_back(rec.wall_ms);
    if (rec.t >= 41) late.push_back(rec.wall_ms);
  }
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  const double growth = median(late) / median(early);
  const bool fresh = graphs.size() == r.records.size();
  const bool pass = feasible && nonneg && prefix && fresh && growth <= 2.0;
  return {pass, fmt("T=50 completed in %.0f s; median round time t=41..50 / t=6..15 = %.2f (need <= 2); "
                    "budget feasible: %s; regret >= 0 on %d exact-oracle rounds: %s; prefix sums: %s; fresh graphs: %s",
                    seconds_since(start), growth, feasible ? "yes" : "no", exact_rounds, nonneg ? "yes" : "no",
                    prefix ? "yes" : "no", fresh ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"linear-model equivalence", linear_model_equivalence},
      {"posterior equals ridge", posterior_is_ridge},
      {"optimizer exactness", optimizer_exactness},
      {"regret sublinearity (n=100, T=200, 50 reps)", regret_sublinearity},
      {"baseline dominance (T=100, 50 paired reps)", baseline_dominance},
      {"budget sensitivity {10,25,50,unlimited}", budget_sensitivity},
      {"prior-mean sweep {-1,0,1,2}", prior_mean_sweep},
      {"misspecification stability (n=8)", misspecification_stability},
      {"networkUCL coverage", ucl_coverage},
      {"scale smoke test (n=1000, T=50)", scale_smoke},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("[%s] %2d %s: %s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
