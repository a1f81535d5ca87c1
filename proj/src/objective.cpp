#include <algorithm>
#include <cmath>
#include <string>

#include "netbandit/errors.hpp"
#include "netbandit/optimize.hpp"

namespace netbandit {

BudgetedProblem::BudgetedProblem(const Graph& g, Theta t, int b)
    : graph(g), theta(std::move(t)), budget(std::clamp(b, 0, g.size())) {
  validate(theta);
  detail::require(g.group_count() <= theta.group_count(),
                  "graph labels exceed theta's " + std::to_string(theta.group_count()) + " groups");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::exact: return "exact";
    case SolveStatus::heuristic: return "heuristic";
    case SolveStatus::forced_zero: return "forced_zero";
  }
  return "unknown";
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

bool lex_less(const Treatment& a, const Treatment& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double objective(const BudgetedProblem& p, const Treatment& z) {
  const auto counts = treated_neighbor_counts(p.graph, z);
  double total = 0.0;
  for (int i = 0; i < p.size(); ++i)
    total += (z[i] ? p.theta.mu[p.graph.group(i)] : 0.0) + p.theta.indirect(counts[i]);
  return total;
}

Solution make_solution(const BudgetedProblem& p, Treatment z, SolveStatus status, const double* claimed) {
  detail::require(static_cast<int>(z.size()) == p.size(), "solution length does not match n");
  const int treated = static_cast<int>(std::count(z.begin(), z.end(), 1));
  detail::require(treated <= p.budget, "solution treats " + std::to_string(treated) +
                                           " nodes, budget is " + std::to_string(p.budget));
  Solution s;
  s.objective = objective(p, z);
  if (claimed != nullptr)
    detail::require(nearly_equal(s.objective, *claimed), "solver objective disagrees with recomputation");
  s.z = std::move(z);
  s.status = p.budget == 0 ? SolveStatus::forced_zero : status;
  return s;
}

ObjectiveTracker::ObjectiveTracker(const BudgetedProblem& p, Treatment z)
    : p_(p), z_(std::move(z)) {
  counts_ = treated_neighbor_counts(p.graph, z_);
  treated_ = static_cast<int>(std::count(z_.begin(), z_.end(), 1));
  value_ = objective(p, z_);
}

double ObjectiveTracker::flip_delta(int j) const {
  const auto& theta = p_.theta;
  const int step = z_[j] ? -1 : 1;
  double delta = step * theta.mu[p_.graph.group(j)];
  for (int i : p_.graph.neighbors(j)) delta += theta.indirect(counts_[i] + step) - theta.indirect(counts_[i]);
  return delta;
}

double ObjectiveTracker::pair_delta(int a, int b) const {
  const auto& theta = p_.theta;
  const int step_a = z_[a] ? -1 : 1;
  const int step_b = z_[b] ? -1 : 1;
  double delta = flip_delta(a) + step_b * theta.mu[p_.graph.group(b)];
  for (int i : p_.graph.neighbors(b)) {
    const int base = counts_[i] + (p_.graph.has_edge(i, a) ? step_a : 0);
    delta += theta.indirect(base + step_b) - theta.indirect(base);
  }
  return delta;
}

void ObjectiveTracker::flip(int j) {
  value_ += flip_delta(j);
  const int step = z_[j] ? -1 : 1;
  z_[j] = static_cast<std::uint8_t>(1 - z_[j]);
  treated_ += step;
  for (int i : p_.graph.neighbors(j)) counts_[i] += step;
}

}  // namespace netbandit
