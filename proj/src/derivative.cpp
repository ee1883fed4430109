#include "cvqite/derivative.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cvqite {

Eigen::MatrixXd fornberg_weights(std::span<const double> nodes, double x0, int max_order) {
  const int n = static_cast<int>(nodes.size());
  if (max_order < 0) throw std::invalid_argument("fornberg_weights: negative order");
  if (n < max_order + 1) {
    throw std::invalid_argument("fornberg_weights: need at least order + 1 nodes");
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, max_order + 1);
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      if (c3 == 0.0) throw std::invalid_argument("fornberg_weights: repeated node");
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c;
}

Eigen::VectorXd one_sided_weights(double spacing, int n_points, int order) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw std::invalid_argument("one_sided_weights: spacing must be positive");
  }
  std::vector<double> nodes(n_points);
  for (int i = 0; i < n_points; ++i) nodes[i] = i * spacing;
  return fornberg_weights(nodes, 0.0, order).col(order);
}

}  // namespace cvqite
