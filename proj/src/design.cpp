#include "netbandit/design.hpp"

#include <algorithm>
#include <string>

#include "netbandit/errors.hpp"

namespace netbandit {

DesignMatrix build_design(const Graph& g, const Treatment& z, int group_count, int cutoff) {
  detail::require(group_count >= 1 && cutoff >= 0, "design needs k >= 1 and C >= 0");
  detail::require(g.group_count() <= group_count,
                  "graph labels exceed the design's " + std::to_string(group_count) + " groups");
  const auto counts = treated_neighbor_counts(g, z);

  DesignMatrix x;
  x.group_count = group_count;
  x.cutoff = cutoff;
  x.values = Eigen::MatrixXd::Zero(g.size(), design_dimension(group_count, cutoff));
  for (int i = 0; i < g.size(); ++i) {
    if (z[i]) x.values(i, g.group(i)) = 1.0;
    x.values(i, group_count + std::min(counts[i], cutoff)) = 1.0;
  }
  return x;
}

Eigen::VectorXd collapse_to_sum(const DesignMatrix& x) { return x.values.colwise().sum().transpose(); }

}  // namespace netbandit
