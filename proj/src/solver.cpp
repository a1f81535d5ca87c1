#include "netbandit/errors.hpp"
#include "netbandit/optimize.hpp"

namespace netbandit {

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::bruteforce: return "bruteforce";
    case SolverKind::bnb: return "bnb";
    case SolverKind::local_search: return "local_search";
    case SolverKind::automatic: return "auto";
  }
  return "unknown";
}

SolverKind solver_kind_from_string(const std::string& s) {
  if (s == "bruteforce") return SolverKind::bruteforce;
  if (s == "bnb") return SolverKind::bnb;
  if (s == "local_search") return SolverKind::local_search;
  if (s == "auto") return SolverKind::automatic;
  throw ConfigError("unknown solver '" + s + "' (expected bruteforce, bnb, local_search or auto)");
}

Solution solve(const BudgetedProblem& p, const SolverOptions& options, Rng& rng) {
  switch (options.kind) {
    case SolverKind::bruteforce: return solve_bruteforce(p);
    case SolverKind::bnb: return solve_bnb(p, options.bnb);
    case SolverKind::local_search: return solve_local_search(p, options.local, rng);
    case SolverKind::automatic:
      if (p.size() <= options.exact_limit) return solve_bruteforce(p);
      return solve_bnb(p, options.bnb);
  }
  throw ContractViolation("unhandled solver kind");
}

}  // namespace netbandit
