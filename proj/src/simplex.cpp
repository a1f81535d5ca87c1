#include "netbandit/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "netbandit/errors.hpp"

namespace netbandit::lp {

int LinearProgram::add_variable(double lo, double hi, double cost, std::string name) {
  detail::require(std::isfinite(lo), "LP lower bounds must be finite");
  detail::require(hi >= lo, "LP variable upper bound below lower bound");
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  names.push_back(std::move(name));
  return variable_count() - 1;
}

void LinearProgram::add_row(std::vector<Term> terms, RowSense sense, double rhs) {
  rows.push_back(Row{std::move(terms), sense, rhs});
}

namespace {

enum class Where : unsigned char { basic, at_lower, at_upper };

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), a_(static_cast<std::size_t>(rows + 1) * cols, 0.0) {}

  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * n_; }
  // Row m_ holds the reduced costs.
  double* cost_row() { return row(m_); }

  void pivot(int r, int j) {
    double* pr = row(r);
    const double inv = 1.0 / pr[j];
    for (int c = 0; c < n_; ++c) pr[c] *= inv;
    pr[j] = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* pi = row(i);
      const double f = pi[j];
      if (f == 0.0) continue;
      for (int c = 0; c < n_; ++c) pi[c] -= f * pr[c];
      pi[j] = 0.0;
    }
  }

 private:
  int m_;
  int n_;
  std::vector<double> a_;
};

struct Work {
  int m = 0;
  int ncols = 0;
  int first_artificial = 0;
  std::vector<double> upper;   // shifted upper bound of every column (lower is 0)
  std::vector<double> value;   // current value of every column
  std::vector<Where> where;
  std::vector<int> basis;      // basic column for each row
  std::vector<double> beta;    // basic values per row
};

// Runs simplex iterations maximizing `cost` over columns not excluded.
// Returns optimal / unbounded / iteration_limit.
LpStatus iterate(Tableau& t, Work& w, const std::vector<double>& cost,
                 const std::vector<char>& may_enter, const SimplexOptions& opt, int& iterations) {
  double* d = t.cost_row();
  for (int j = 0; j < w.ncols; ++j) {
    double v = cost[j];
    for (int i = 0; i < w.m; ++i) {
      const double a = t.at(i, j);
      if (a != 0.0) v -= cost[w.basis[i]] * a;
    }
    d[j] = v;
  }

  int degenerate_run = 0;
  while (true) {
    if (iterations >= opt.max_iterations) return LpStatus::iteration_limit;
    const bool bland = degenerate_run > 50;

    int enter = -1;
    double best = 0.0;
    for (int j = 0; j < w.ncols; ++j) {
      if (w.where[j] == Where::basic || !may_enter[j]) continue;
      double score = 0.0;
      if (w.where[j] == Where::at_lower && d[j] > opt.optimality_tol) score = d[j];
      else if (w.where[j] == Where::at_upper && d[j] < -opt.optimality_tol) score = -d[j];
      if (score <= 0.0) continue;
      if (bland) { enter = j; break; }
      if (score > best) { best = score; enter = j; }
    }
    if (enter < 0) return LpStatus::optimal;

    // Moving the entering column by +step (increasing) or -step (decreasing).
    const double dir = w.where[enter] == Where::at_lower ? 1.0 : -1.0;
    double step = w.upper[enter];
    int leave = -1;
    bool leave_to_upper = false;
    for (int i = 0; i < w.m; ++i) {
      const double alpha = dir * t.at(i, enter);
      if (std::abs(alpha) <= opt.pivot_tol) continue;
      const int b = w.basis[i];
      double limit;
      bool to_upper;
      if (alpha > 0.0) {
        limit = w.beta[i] / alpha;
        to_upper = false;
      } else {
        if (!std::isfinite(w.upper[b])) continue;
        limit = (w.upper[b] - w.beta[i]) / (-alpha);
        to_upper = true;
      }
      limit = std::max(limit, 0.0);
      if (limit < step - 1e-12 || (leave >= 0 && limit <= step + 1e-12 && bland && b < w.basis[leave])) {
        step = limit;
        leave = i;
        leave_to_upper = to_upper;
      }
    }
    if (!std::isfinite(step)) return LpStatus::unbounded;
    ++iterations;
    degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;

    for (int i = 0; i < w.m; ++i) w.beta[i] -= dir * step * t.at(i, enter);

    if (leave < 0) {
      // Bound flip.
      w.where[enter] = dir > 0 ? Where::at_upper : Where::at_lower;
      w.value[enter] = dir > 0 ? w.upper[enter] : 0.0;
      continue;
    }
    const int out = w.basis[leave];
    w.where[out] = leave_to_upper ? Where::at_upper : Where::at_lower;
    w.value[out] = leave_to_upper ? w.upper[out] : 0.0;

    const double entering_value = (dir > 0 ? 0.0 : w.upper[enter]) + dir * step;
    t.pivot(leave, enter);
    w.basis[leave] = enter;
    w.where[enter] = Where::basic;
    w.beta[leave] = entering_value;
  }
}

}  // namespace

LpResult solve(const LinearProgram& lp, const SimplexOptions& opt) {
  const int nvars = lp.variable_count();
  LpResult result;

  // Free columns are the non-fixed structural variables; fixed ones fold into the rhs.
  std::vector<int> column_of(nvars, -1);
  std::vector<int> var_of;
  for (int v = 0; v < nvars; ++v) {
    if (lp.upper[v] > lp.lower[v]) {
      column_of[v] = static_cast<int>(var_of.size());
      var_of.push_back(v);
    }
  }
  const int nstruct = static_cast<int>(var_of.size());

  struct PreparedRow {
    std::vector<Term> terms;  // in column indices
    RowSense sense;
    double rhs;
  };
  std::vector<PreparedRow> rows;
  for (const auto& row : lp.rows) {
    PreparedRow pr{{}, row.sense, row.rhs};
    for (const auto& term : row.terms) {
      if (term.coef == 0.0) continue;
      pr.rhs -= term.coef * lp.lower[term.var];
      const int c = column_of[term.var];
      if (c >= 0) pr.terms.push_back({c, term.coef});
    }
    if (pr.terms.empty()) {
      const double tol = opt.feasibility_tol;
      const bool ok = (row.sense == RowSense::less_equal && pr.rhs >= -tol) ||
                      (row.sense == RowSense::greater_equal && pr.rhs <= tol) ||
                      (row.sense == RowSense::equal && std::abs(pr.rhs) <= tol);
      if (!ok) return result;  // infeasible
      continue;
    }
    rows.push_back(std::move(pr));
  }
  const int m = static_cast<int>(rows.size());

  // Columns: structural | slacks (one per inequality row) | artificials (as needed).
  int nslack = 0;
  for (const auto& r : rows) nslack += r.sense != RowSense::equal;
  std::vector<int> slack_col(m, -1);
  std::vector<double> slack_sign(m, 0.0);
  {
    int next = nstruct;
    for (int i = 0; i < m; ++i) {
      if (rows[i].sense == RowSense::equal) continue;
      slack_col[i] = next++;
      slack_sign[i] = rows[i].sense == RowSense::less_equal ? 1.0 : -1.0;
    }
  }
  // Normalize so rhs >= 0.
  std::vector<double> row_sign(m, 1.0);
  for (int i = 0; i < m; ++i)
    if (rows[i].rhs < 0.0) row_sign[i] = -1.0;

  std::vector<int> art_col(m, -1);
  int nart = 0;
  for (int i = 0; i < m; ++i)
    if (!(slack_col[i] >= 0 && slack_sign[i] * row_sign[i] > 0.0)) art_col[i] = nstruct + nslack + nart++;

  Work w;
  w.m = m;
  w.ncols = nstruct + nslack + nart;
  w.first_artificial = nstruct + nslack;
  w.upper.assign(w.ncols, kInfinity);
  w.value.assign(w.ncols, 0.0);
  w.where.assign(w.ncols, Where::at_lower);
  w.basis.assign(m, -1);
  w.beta.assign(m, 0.0);
  for (int c = 0; c < nstruct; ++c) w.upper[c] = lp.upper[var_of[c]] - lp.lower[var_of[c]];

  Tableau t(m, w.ncols);
  for (int i = 0; i < m; ++i) {
    double* r = t.row(i);
    for (const auto& term : rows[i].terms) r[term.var] += row_sign[i] * term.coef;
    if (slack_col[i] >= 0) r[slack_col[i]] = row_sign[i] * slack_sign[i];
    if (art_col[i] >= 0) r[art_col[i]] = 1.0;
    w.beta[i] = row_sign[i] * rows[i].rhs;
    w.basis[i] = art_col[i] >= 0 ? art_col[i] : slack_col[i];
    w.where[w.basis[i]] = Where::basic;
  }

  std::vector<char> may_enter(w.ncols, 1);
  int iterations = 0;

  if (nart > 0) {
    std::vector<double> phase1(w.ncols, 0.0);
    for (int c = w.first_artificial; c < w.ncols; ++c) phase1[c] = -1.0;
    LpStatus s = iterate(t, w, phase1, may_enter, opt, iterations);
    if (s == LpStatus::iteration_limit) {
      result.status = s;
      result.iterations = iterations;
      return result;
    }
    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i)
      if (w.basis[i] >= w.first_artificial) infeasibility += w.beta[i];
    if (infeasibility > opt.feasibility_tol * std::max(1, m)) {
      result.status = LpStatus::infeasible;
      result.iterations = iterations;
      return result;
    }
    // Artificials are pinned at zero for phase two.
    for (int c = w.first_artificial; c < w.ncols; ++c) {
      w.upper[c] = 0.0;
      may_enter[c] = 0;
    }
  }

  std::vector<double> phase2(w.ncols, 0.0);
  for (int c = 0; c < nstruct; ++c) phase2[c] = lp.objective[var_of[c]];
  LpStatus s = iterate(t, w, phase2, may_enter, opt, iterations);
  result.status = s;
  result.iterations = iterations;
  if (s != LpStatus::optimal) return result;

  for (int i = 0; i < m; ++i) w.value[w.basis[i]] = w.beta[i];
  result.x = lp.lower;
  for (int c = 0; c < nstruct; ++c) {
    const int v = var_of[c];
    result.x[v] = std::clamp(lp.lower[v] + w.value[c], lp.lower[v], lp.upper[v]);
  }
  result.objective = 0.0;
  for (int v = 0; v < nvars; ++v) result.objective += lp.objective[v] * result.x[v];
  return result;
}

}  // namespace netbandit::lp
