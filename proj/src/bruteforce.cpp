#include <bit>
#include <string>

#include "netbandit/errors.hpp"
#include "netbandit/optimize.hpp"

namespace netbandit {

namespace {
void check_size(int n) {
  if (n > kBruteForceLimit)
    throw SolverRefusal("brute force refuses n = " + std::to_string(n) + " (limit " +
                        std::to_string(kBruteForceLimit) + "); use bnb or local_search");
}

// Visits all 2^n vectors in Gray-code order; on_flip(j) is called after bit j flips.
template <class OnFlip>
void gray_walk(int n, OnFlip on_flip) {
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) on_flip(std::countr_zero(step));
}

bool better(double value, const Treatment& z, double best_value, const Treatment& best) {
  if (nearly_equal(value, best_value)) return lex_less(z, best);
  return value > best_value;
}
}  // namespace

Solution solve_bruteforce(const BudgetedProblem& p) {
  const int n = p.size();
  check_size(n);
  ObjectiveTracker tracker(p, Treatment(n, 0));
  Treatment best = tracker.treatment();
  double best_value = tracker.value();
  gray_walk(n, [&](int j) {
    tracker.flip(j);
    if (tracker.treated() > p.budget) return;
    if (better(tracker.value(), tracker.treatment(), best_value, best)) {
      best = tracker.treatment();
      best_value = tracker.value();
    }
  });
  return make_solution(p, std::move(best), SolveStatus::exact, &best_value);
}

Solution enumerate_best(int n, int budget, const TreatmentObjective& f) {
  check_size(n);
  Treatment z(n, 0);
  int treated = 0;
  Solution best{z, f(z), SolveStatus::exact};
  gray_walk(n, [&](int j) {
    treated += z[j] ? -1 : 1;
    z[j] = static_cast<std::uint8_t>(1 - z[j]);
    if (treated > budget) return;
    const double v = f(z);
    if (better(v, z, best.objective, best.z)) {
      best.z = z;
      best.objective = v;
    }
  });
  if (budget == 0) best.status = SolveStatus::forced_zero;
  return best;
}

}  // namespace netbandit
