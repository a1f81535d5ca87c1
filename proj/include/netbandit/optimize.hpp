#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "netbandit/graph.hpp"
#include "netbandit/random.hpp"
#include "netbandit/reward.hpp"
#include "netbandit/simplex.hpp"

namespace netbandit {

/// max_z sum_i [z_i mu_{g(i)} + gamma(min(d_i, C))]  s.t.  sum_i z_i <= budget.
/// The graph is borrowed and must outlive the problem.
struct BudgetedProblem {
  const Graph& graph;
  Theta theta;
  int budget;  // clamped to [0, n]; n means unconstrained

  BudgetedProblem(const Graph& g, Theta t, int b);
  int size() const { return graph.size(); }
};

enum class SolveStatus { exact, heuristic, forced_zero };
std::string to_string(SolveStatus s);

struct Solution {
  Treatment z;
  double objective = 0.0;
  SolveStatus status = SolveStatus::heuristic;
};

/// Builds a Solution after checking budget feasibility and recomputing the
/// objective from scratch. `claimed` (if given) must match to 1e-9 relative.
Solution make_solution(const BudgetedProblem& p, Treatment z, SolveStatus status,
                       const double* claimed = nullptr);

double objective(const BudgetedProblem& p, const Treatment& z);

/// true if a < b in lexicographic order (node 0 first, 0 < 1).
bool lex_less(const Treatment& a, const Treatment& b);

/// Relative tolerance used when comparing objective values for ties.
bool nearly_equal(double a, double b);

/// Incremental objective evaluation under single-node flips, maintaining the
/// treated-neighbor count of every node.
class ObjectiveTracker {
 public:
  ObjectiveTracker(const BudgetedProblem& p, Treatment z);

  double value() const { return value_; }
  const Treatment& treatment() const { return z_; }
  int treated() const { return treated_; }
  const std::vector<int>& counts() const { return counts_; }
  const Graph& graph() const { return p_.graph; }

  /// Change in objective from flipping node j.
  double flip_delta(int j) const;
  /// Change in objective from flipping a and then b (a != b), without mutating.
  double pair_delta(int a, int b) const;
  void flip(int j);

 private:
  const BudgetedProblem& p_;
  Treatment z_;
  std::vector<int> counts_;
  int treated_ = 0;
  double value_ = 0.0;
};

inline constexpr int kBruteForceLimit = 25;

/// Exhaustive search over every feasible z (Gray-code order, incremental
/// evaluation). Ties go to the lexicographically smallest z.
Solution solve_bruteforce(const BudgetedProblem& p);

struct LocalSearchOptions {
  int restarts = 20;
  int max_moves = 100000;
  /// Share of restarts begun from uniformly random size-B subsets; the rest
  /// start from random perturbations of the best solution found so far.
  double random_start_fraction = 0.25;
};

/// Best-of-restarts best-improvement hill climbing over 1-flip and
/// budget-preserving swap moves. Restart 0 starts from the empty set, then
/// random size-B subsets, then perturbed copies of the incumbent.
Solution solve_local_search(const BudgetedProblem& p, const LocalSearchOptions& options, Rng& rng);

struct BnbOptions {
  double time_limit_s = 60.0;
  double gap_tolerance = 0.01;
  int max_nodes = 1000000;
  /// Incumbent seeding: local-search restarts run at the root (0 disables).
  int seed_restarts = 10;
  std::uint64_t seed = 0x5eed;
};

struct BnbStats {
  int nodes = 0;
  int lp_iterations = 0;
  double best_bound = 0.0;
  double gap = 0.0;
  bool timed_out = false;
};

/// Branch-and-bound over the integer-linear encoding (see IntegerEncoding),
/// bounding with the LP relaxation and branching on the most fractional z_j.
/// Returns exact status once the relative gap is within tolerance; otherwise
/// the best incumbent with heuristic status.
Solution solve_bnb(const BudgetedProblem& p, const BnbOptions& options, BnbStats* stats = nullptr);

/// The integer-linear model of a BudgetedProblem.
///
/// Variables: z_j (treat), y_{i,c} (node i's pooled count is c, c = 0..C),
/// s_i (pooled count), w_i (count >= C indicator). Constraints per node:
///   sum_c y_{i,c} = 1
///   s_i - sum_c c y_{i,c} = 0
///   s_i - sum_j A_ij z_j <= 0
///   -s_i + sum_j A_ij z_j - (d_i - C)^+ w_i <= 0
///   C w_i - s_i <= 0
/// plus sum_j z_j <= B and 0 <= s_i <= C. Objective
/// sum_j mu_{g(j)} z_j + sum_{i,c} gamma(c) y_{i,c}.
struct IntegerEncoding {
  lp::LinearProgram program;
  std::vector<int> z;                  // variable index of z_j
  std::vector<std::vector<int>> y;     // y[i][c]
  std::vector<int> s;
  std::vector<int> w;

  static IntegerEncoding build(const BudgetedProblem& p);

  /// Integer point (z, y, s, w) implied by a treatment vector.
  std::vector<double> lift(const BudgetedProblem& p, const Treatment& z) const;
  /// Max absolute constraint violation of x (0 for feasible points).
  double violation(const std::vector<double>& x) const;
  double evaluate(const std::vector<double>& x) const;

  /// Plain-text dump: header line, one "var" line per variable, one "row"
  /// line per constraint, and the objective. Format documented in README.
  void dump(std::ostream& out) const;
};

// Generic helpers over an arbitrary objective f(z), used for the UCB index
// and for the non-additive environment.
using TreatmentObjective = std::function<double(const Treatment&)>;

/// Exhaustive argmax of f over feasible z (n <= kBruteForceLimit).
Solution enumerate_best(int n, int budget, const TreatmentObjective& f);

/// Hill climbing on f with flip and swap moves, full re-evaluation per move.
Solution local_search_generic(int n, int budget, const TreatmentObjective& f, int restarts,
                              Rng& rng, const std::vector<Treatment>& starts = {});

enum class SolverKind { bruteforce, bnb, local_search, automatic };
std::string to_string(SolverKind k);
SolverKind solver_kind_from_string(const std::string& s);

struct SolverOptions {
  SolverKind kind = SolverKind::automatic;
  LocalSearchOptions local;
  BnbOptions bnb;
  /// automatic: brute force up to this n, branch-and-bound above it.
  int exact_limit = 12;
};

/// Dispatches to the configured solver. Deterministic given rng state.
Solution solve(const BudgetedProblem& p, const SolverOptions& options, Rng& rng);

}  // namespace netbandit
