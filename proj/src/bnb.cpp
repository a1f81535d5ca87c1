#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>

#include "netbandit/optimize.hpp"

namespace netbandit {

IntegerEncoding IntegerEncoding::build(const BudgetedProblem& p) {
  const int n = p.size();
  const int cutoff = p.theta.cutoff();
  const Graph& g = p.graph;
  IntegerEncoding e;
  auto& lp = e.program;

  e.z.resize(n);
  e.y.assign(n, std::vector<int>(cutoff + 1));
  e.s.resize(n);
  e.w.resize(n);
  for (int j = 0; j < n; ++j)
    e.z[j] = lp.add_variable(0.0, 1.0, p.theta.mu[g.group(j)], "z" + std::to_string(j));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c <= cutoff; ++c)
      e.y[i][c] = lp.add_variable(0.0, 1.0, p.theta.gamma[c],
                                  "y" + std::to_string(i) + "_" + std::to_string(c));
  for (int i = 0; i < n; ++i) e.s[i] = lp.add_variable(0.0, cutoff, 0.0, "s" + std::to_string(i));
  for (int i = 0; i < n; ++i) e.w[i] = lp.add_variable(0.0, 1.0, 0.0, "w" + std::to_string(i));

  std::vector<lp::Term> budget;
  for (int j = 0; j < n; ++j) budget.push_back({e.z[j], 1.0});
  lp.add_row(std::move(budget), lp::RowSense::less_equal, p.budget);

  for (int i = 0; i < n; ++i) {
    std::vector<lp::Term> one_hot, link{{e.s[i], 1.0}}, upper{{e.s[i], 1.0}}, lower{{e.s[i], -1.0}};
    for (int c = 0; c <= cutoff; ++c) {
      one_hot.push_back({e.y[i][c], 1.0});
      if (c > 0) link.push_back({e.y[i][c], -static_cast<double>(c)});
    }
    for (int j : g.neighbors(i)) {
      upper.push_back({e.z[j], -1.0});
      lower.push_back({e.z[j], 1.0});
    }
    const double big_m = std::max(0, g.degree(i) - cutoff);
    if (big_m > 0) lower.push_back({e.w[i], -big_m});
    lp.add_row(std::move(one_hot), lp::RowSense::equal, 1.0);
    lp.add_row(std::move(link), lp::RowSense::equal, 0.0);
    lp.add_row(std::move(upper), lp::RowSense::less_equal, 0.0);
    lp.add_row(std::move(lower), lp::RowSense::less_equal, 0.0);
    lp.add_row({{e.w[i], static_cast<double>(cutoff)}, {e.s[i], -1.0}}, lp::RowSense::less_equal, 0.0);
  }
  return e;
}

std::vector<double> IntegerEncoding::lift(const BudgetedProblem& p, const Treatment& z) const {
  std::vector<double> x(program.variable_count(), 0.0);
  const auto counts = treated_neighbor_counts(p.graph, z);
  const int cutoff = p.theta.cutoff();
  for (int i = 0; i < p.size(); ++i) {
    const int pooled = std::min(counts[i], cutoff);
    x[this->z[i]] = z[i];
    x[y[i][pooled]] = 1.0;
    x[s[i]] = pooled;
    x[w[i]] = counts[i] >= cutoff ? 1.0 : 0.0;
  }
  return x;
}

double IntegerEncoding::violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int v = 0; v < program.variable_count(); ++v) {
    worst = std::max(worst, program.lower[v] - x[v]);
    worst = std::max(worst, x[v] - program.upper[v]);
  }
  for (const auto& row : program.rows) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coef * x[t.var];
    const double d = lhs - row.rhs;
    switch (row.sense) {
      case lp::RowSense::less_equal: worst = std::max(worst, d); break;
      case lp::RowSense::greater_equal: worst = std::max(worst, -d); break;
      case lp::RowSense::equal: worst = std::max(worst, std::abs(d)); break;
    }
  }
  return worst;
}

double IntegerEncoding::evaluate(const std::vector<double>& x) const {
  double v = 0.0;
  for (int j = 0; j < program.variable_count(); ++j) v += program.objective[j] * x[j];
  return v;
}

void IntegerEncoding::dump(std::ostream& out) const {
  const auto& lp = program;
  out << "# netbandit integer encoding v1\n";
  out << "maximize vars " << lp.variable_count() << " rows " << lp.rows.size() << "\n";
  out.precision(17);
  for (int v = 0; v < lp.variable_count(); ++v) {
    const bool binary = lp.names[v][0] != 's';
    out << "var " << v << ' ' << lp.names[v] << ' ' << lp.lower[v] << ' ' << lp.upper[v] << ' '
        << lp.objective[v] << ' ' << (binary ? "binary" : "continuous") << "\n";
  }
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& row = lp.rows[r];
    const char* sense = row.sense == lp::RowSense::less_equal ? "<="
                        : row.sense == lp::RowSense::equal    ? "="
                                                              : ">=";
    out << "row " << r << ' ' << sense << ' ' << row.rhs << " :";
    for (const auto& t : row.terms) out << ' ' << t.coef << '*' << lp.names[t.var];
    out << "\n";
  }
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  std::vector<signed char> fixed;  // -1 free, else 0/1
  double bound;
  long id;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

constexpr double kIntTol = 1e-6;

bool is_integral(double v) { return std::abs(v - std::round(v)) <= kIntTol; }

// Tightens variable bounds implied by the fixed z entries. Returns false if the
// node is infeasible (more fixed treatments than budget).
bool propagate(const BudgetedProblem& p, const IntegerEncoding& e, std::vector<signed char>& fixed,
               lp::LinearProgram& lp) {
  const int n = p.size();
  const int cutoff = p.theta.cutoff();
  int ones = 0;
  for (auto f : fixed) ones += f == 1;
  if (ones > p.budget) return false;
  if (ones == p.budget)
    for (auto& f : fixed)
      if (f < 0) f = 0;
  const int spare = p.budget - ones;

  for (int j = 0; j < n; ++j) {
    if (fixed[j] < 0) continue;
    lp.lower[e.z[j]] = lp.upper[e.z[j]] = fixed[j];
  }
  for (int i = 0; i < n; ++i) {
    int lo = 0, open = 0;
    for (int j : p.graph.neighbors(i)) {
      if (fixed[j] == 1) ++lo;
      else if (fixed[j] < 0) ++open;
    }
    const int hi = lo + std::min(open, spare);
    const int plo = std::min(lo, cutoff);
    const int phi = std::min(hi, cutoff);
    for (int c = 0; c <= cutoff; ++c)
      if (c < plo || c > phi) lp.upper[e.y[i][c]] = 0.0;
    lp.lower[e.s[i]] = plo;
    lp.upper[e.s[i]] = phi;
    if (hi < cutoff) lp.upper[e.w[i]] = 0.0;
    else if (lo >= cutoff) lp.lower[e.w[i]] = 1.0;
  }
  return true;
}

}  // namespace

Solution solve_bnb(const BudgetedProblem& p, const BnbOptions& options, BnbStats* stats) {
  const int n = p.size();
  BnbStats local_stats;
  BnbStats& st = stats ? *stats : local_stats;
  st = BnbStats{};
  if (p.budget == 0) return make_solution(p, Treatment(n, 0), SolveStatus::forced_zero);

  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  const IntegerEncoding enc = IntegerEncoding::build(p);

  Treatment incumbent(n, 0);
  double incumbent_value = objective(p, incumbent);
  auto offer = [&](const Treatment& z, double v) {
    if (nearly_equal(v, incumbent_value) ? lex_less(z, incumbent) : v > incumbent_value) {
      incumbent = z;
      incumbent_value = v;
    }
  };
  if (options.seed_restarts > 0) {
    Rng rng(options.seed);
    auto ls = solve_local_search(p, LocalSearchOptions{options.seed_restarts, 100000}, rng);
    offer(ls.z, ls.objective);
  }

  auto prune_margin = [&] {
    return std::max(1e-9 * std::max(1.0, std::abs(incumbent_value)),
                    options.gap_tolerance * std::max(1.0, std::abs(incumbent_value)));
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push(Node{std::vector<signed char>(n, -1), std::numeric_limits<double>::infinity(), next_id++});
  double best_bound = std::numeric_limits<double>::infinity();

  while (!open.empty()) {
    best_bound = open.top().bound;
    if (best_bound - incumbent_value <= prune_margin()) break;
    if (elapsed() > options.time_limit_s || st.nodes >= options.max_nodes) {
      st.timed_out = true;
      break;
    }
    Node node = open.top();
    open.pop();
    ++st.nodes;

    lp::LinearProgram relax = enc.program;
    if (!propagate(p, enc, node.fixed, relax)) continue;
    const auto res = lp::solve(relax);
    st.lp_iterations += res.iterations;
    if (res.status == lp::LpStatus::infeasible) continue;
    if (res.status != lp::LpStatus::optimal) {
      // Cannot bound this subtree; keep it open so the result stays heuristic.
      st.timed_out = true;
      open.push(node);
      break;
    }
    const double bound = std::min(node.bound, res.objective);
    if (bound - incumbent_value <= prune_margin()) continue;

    int branch = -1;
    double most = -1.0;
    for (int j = 0; j < n; ++j) {
      if (node.fixed[j] >= 0) continue;
      const double v = res.x[enc.z[j]];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > kIntTol && frac > most) {
        most = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      Treatment z(n);
      for (int j = 0; j < n; ++j) z[j] = static_cast<std::uint8_t>(std::lround(res.x[enc.z[j]]));
      const double value = objective(p, z);
      offer(z, value);
      if (bound - value <= 1e-9 * std::max(1.0, std::abs(value))) continue;
      // z is integral but the count selectors are not: branch on an open
      // neighbor of the node whose selector is most fractional.
      double worst = -1.0;
      for (int i = 0; i < n; ++i) {
        double frac = 0.0;
        for (int var : enc.y[i]) frac = std::max(frac, is_integral(res.x[var]) ? 0.0 : 0.5 - std::abs(res.x[var] - 0.5));
        if (frac <= 0.0 || frac <= worst) continue;
        for (int j : p.graph.neighbors(i)) {
          if (node.fixed[j] < 0) {
            worst = frac;
            branch = j;
            break;
          }
        }
      }
      if (branch < 0)
        for (int j = 0; j < n && branch < 0; ++j)
          if (node.fixed[j] < 0) branch = j;
      if (branch < 0) continue;
    }
    for (signed char v : {1, 0}) {
      Node child{node.fixed, bound, next_id++};
      child.fixed[branch] = v;
      open.push(std::move(child));
    }
  }

  if (open.empty()) best_bound = incumbent_value;
  best_bound = std::max(best_bound, incumbent_value);
  st.best_bound = best_bound;
  st.gap = (best_bound - incumbent_value) / std::max(1.0, std::abs(incumbent_value));
  const bool proven = !st.timed_out || st.gap <= options.gap_tolerance + 1e-12;
  return make_solution(p, std::move(incumbent), proven ? SolveStatus::exact : SolveStatus::heuristic,
                       &incumbent_value);
}

}  // namespace netbandit
