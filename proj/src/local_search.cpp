#include <algorithm>
#include <cmath>
#include <numeric>

#include "netbandit/optimize.hpp"

namespace netbandit {

namespace {

constexpr double kMinGain = 1e-10;

Treatment random_subset(int n, int size, Rng& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Treatment z(n, 0);
  for (int i = 0; i < size; ++i) z[order[i]] = 1;
  return z;
}

struct Move {
  int a = -1;
  int b = -1;  // -1 for single flips
  double gain = kMinGain;
};

struct SwapScratch {
  std::vector<std::pair<double, int>> additions;
  std::vector<int> mark;
  std::vector<int> touched;
};

// Best budget-preserving swap (remove a, add b). Removing a only changes the
// gain of adding b through neighbors shared by a and b, so pairs without a
// common neighbor decompose into remove(a) + add(b). Those are resolved from a
// sorted list of addition gains; the rest are evaluated exactly.
void best_swap(const ObjectiveTracker& t, Move& m, SwapScratch& s) {
  const auto& z = t.treatment();
  const int n = static_cast<int>(z.size());
  const Graph& g = t.graph();
  s.additions.clear();
  for (int b = 0; b < n; ++b)
    if (!z[b]) s.additions.emplace_back(t.flip_delta(b), b);
  if (s.additions.empty()) return;
  std::sort(s.additions.begin(), s.additions.end(),
            [](const auto& x, const auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
  s.mark.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    if (!z[a]) continue;
    const double removal = t.flip_delta(a);
    s.touched.clear();
    for (int i : g.neighbors(a))
      for (int b : g.neighbors(i))
        if (b != a && !z[b] && s.mark[b] != a) {
          s.mark[b] = a;
          s.touched.push_back(b);
        }
    for (int b : s.touched) {
      const double gain = t.pair_delta(a, b);
      if (gain > m.gain) m = {a, b, gain};
    }
    for (const auto& [add, b] : s.additions) {
      if (s.mark[b] == a) continue;
      if (removal + add > m.gain) m = {a, b, removal + add};
      break;
    }
  }
}

bool keep(double value, const Treatment& z, const Solution& best, bool have_best) {
  if (!have_best) return true;
  if (nearly_equal(value, best.objective)) return lex_less(z, best.z);
  return value > best.objective;
}

}  // namespace

namespace {

// Best-improvement climb until no improving flip or swap remains.
void climb(ObjectiveTracker& t, int budget, int max_moves, SwapScratch& scratch) {
  const int n = static_cast<int>(t.treatment().size());
  for (int moves = 0; moves < max_moves; ++moves) {
    Move m;
    const auto& z = t.treatment();
    for (int j = 0; j < n; ++j) {
      if (!z[j] && t.treated() >= budget) continue;
      const double g = t.flip_delta(j);
      if (g > m.gain) m = {j, -1, g};
    }
    best_swap(t, m, scratch);
    if (m.a < 0) break;
    t.flip(m.a);
    if (m.b >= 0) t.flip(m.b);
  }
}

// Random feasible start near z: a few random treated nodes leave and the same
// number of random untreated nodes enter.
Treatment perturb(const Treatment& z, int budget, Rng& rng) {
  const int n = static_cast<int>(z.size());
  std::vector<int> in, out;
  for (int i = 0; i < n; ++i) (z[i] ? in : out).push_back(i);
  Treatment next = z;
  std::uniform_int_distribution<int> size_dist(2, 5);
  const int kick = size_dist(rng);
  std::shuffle(in.begin(), in.end(), rng);
  std::shuffle(out.begin(), out.end(), rng);
  const int drop = std::min<int>(kick, static_cast<int>(in.size()));
  for (int i = 0; i < drop; ++i) next[in[i]] = 0;
  const int room = budget - (static_cast<int>(in.size()) - drop);
  const int add = std::min({kick, room, static_cast<int>(out.size())});
  for (int i = 0; i < add; ++i) next[out[i]] = 1;
  return next;
}

}  // namespace

Solution solve_local_search(const BudgetedProblem& p, const LocalSearchOptions& options, Rng& rng) {
  const int n = p.size();
  if (p.budget == 0) return make_solution(p, Treatment(n, 0), SolveStatus::forced_zero);

  SwapScratch scratch;
  Solution best;
  bool have_best = false;
  const int restarts = std::max(1, options.restarts);
  const int random_starts = std::max(1, static_cast<int>(std::ceil(restarts * options.random_start_fraction)));
  for (int r = 0; r < restarts; ++r) {
    Treatment start = r == 0              ? Treatment(n, 0)
                      : r < random_starts ? random_subset(n, p.budget, rng)
                                          : perturb(best.z, p.budget, rng);
    ObjectiveTracker t(p, std::move(start));
    climb(t, p.budget, options.max_moves, scratch);
    if (keep(t.value(), t.treatment(), best, have_best)) {
      best.z = t.treatment();
      best.objective = t.value();
      have_best = true;
    }
  }
  return make_solution(p, std::move(best.z), SolveStatus::heuristic, &best.objective);
}

Solution local_search_generic(int n, int budget, const TreatmentObjective& f, int restarts, Rng& rng,
                              const std::vector<Treatment>& starts) {
  budget = std::clamp(budget, 0, n);
  Solution best;
  bool have_best = false;
  std::vector<Treatment> initial = starts;
  initial.insert(initial.begin(), Treatment(n, 0));
  for (int r = 1; r < std::max(1, restarts); ++r) initial.push_back(random_subset(n, budget, rng));

  for (Treatment z : initial) {
    int treated = static_cast<int>(std::count(z.begin(), z.end(), 1));
    if (treated > budget) continue;
    double value = f(z);
    while (true) {
      Move m;
      for (int j = 0; j < n; ++j) {
        if (!z[j] && treated >= budget) continue;
        z[j] ^= 1;
        const double g = f(z) - value;
        z[j] ^= 1;
        if (g > m.gain) m = {j, -1, g};
      }
      for (int a = 0; a < n; ++a) {
        if (!z[a]) continue;
        z[a] = 0;
        for (int b = 0; b < n; ++b) {
          if (z[b] || b == a) continue;
          z[b] = 1;
          const double g = f(z) - value;
          z[b] = 0;
          if (g > m.gain) m = {a, b, g};
        }
        z[a] = 1;
      }
      if (m.a < 0) break;
      treated += z[m.a] ? -1 : 1;
      z[m.a] ^= 1;
      if (m.b >= 0) {
        treated += 1;
        z[m.b] = 1;
      }
      value = f(z);
    }
    if (keep(value, z, best, have_best)) {
      best.z = z;
      best.objective = value;
      have_best = true;
    }
  }
  best.status = budget == 0 ? SolveStatus::forced_zero : SolveStatus::heuristic;
  return best;
}

}  // namespace netbandit
