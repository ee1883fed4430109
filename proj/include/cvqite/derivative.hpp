#pragma once

#include <span>

#include <Eigen/Dense>

namespace cvqite {

/// Finite-difference weights at x0 for derivatives 0..max_order on arbitrary
/// distinct nodes (Fornberg's recursion). Column m of the result holds the
/// weights of the m-th derivative.
Eigen::MatrixXd fornberg_weights(std::span<const double> nodes, double x0, int max_order);

/// Weights for the order-th derivative at u = 0 from samples at
/// u = 0, h, 2h, ..., (n_points-1)h.
Eigen::VectorXd one_sided_weights(double spacing, int n_points, int order);

}  // namespace cvqite
