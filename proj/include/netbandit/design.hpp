#pragma once

#include <Eigen/Core>

#include "netbandit/graph.hpp"

namespace netbandit {

/// 0/1 design matrix mapping the flat parameter vector to per-node expected
/// rewards. Columns: k direct-effect columns (one per group), then C + 1
/// indirect-effect columns for pooled treated-neighbor counts 0..C.
struct DesignMatrix {
  Eigen::MatrixXd values;
  int group_count = 0;
  int cutoff = 0;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

inline int design_dimension(int group_count, int cutoff) { return group_count + cutoff + 1; }

DesignMatrix build_design(const Graph& g, const Treatment& z, int group_count, int cutoff);

/// Column sums, i.e. the single-observation design of the collapsed model.
Eigen::VectorXd collapse_to_sum(const DesignMatrix& x);

}  // namespace netbandit
