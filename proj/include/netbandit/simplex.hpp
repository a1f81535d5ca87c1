#pragma once

#include <limits>
#include <string>
#include <vector>

namespace netbandit::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { less_equal, equal, greater_equal };

struct Term {
  int var;
  double coef;
};

struct Row {
  std::vector<Term> terms;
  RowSense sense = RowSense::less_equal;
  double rhs = 0.0;
};

/// maximize c'x  subject to rows and lower <= x <= upper. Lower bounds must be
/// finite; upper bounds may be kInfinity.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int add_variable(double lo, double hi, double cost, std::string name = {});
  void add_row(std::vector<Term> terms, RowSense sense, double rhs);
  int variable_count() const { return static_cast<int>(objective.size()); }

  std::vector<std::string> names;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

struct SimplexOptions {
  int max_iterations = 200000;
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  double feasibility_tol = 1e-7;
};

/// Dense-tableau bounded-variable primal simplex, two phases. Variables with
/// lower == upper are substituted out before the tableau is built. Dantzig
/// pricing with a switch to Bland's rule after a run of degenerate pivots.
LpResult solve(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace netbandit::lp
