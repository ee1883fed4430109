#include <gtest/gtest.h>

#include <vector>

#include "cvqite/derivative.hpp"
#include "support.hpp"

using namespace cvqite;

TEST(Weights, MatchVandermondeSolve) {
  for (const double h : {0.1, 0.01}) {
    for (int order = 1; order <= 3; ++order) {
      for (const int n : {order + 2, order + 6}) {
        const auto w = one_sided_weights(h, n, order);
        const auto ref = ref::vandermonde_weights(h, n, order);
        ASSERT_EQ(w.size(), n);
        const double scale = ref.cwiseAbs().maxCoeff();
        EXPECT_LT((w - ref).cwiseAbs().maxCoeff() / scale, 1e-7) << h << ' ' << order << ' ' << n;
      }
    }
  }
}

TEST(Weights, ExactOnPolynomials) {
  // n points differentiate polynomials of degree n-1 exactly
  const int n = 7;
  const double h = 0.1;
  const auto w = one_sided_weights(h, n, 3);
  Eigen::VectorXd f(n);
  for (int j = 0; j < n; ++j) {
    const double u = j * h;
    f(j) = 2.0 - u + 0.5 * u * u + 4.0 * u * u * u - 3.0 * std::pow(u, 6);
  }
  EXPECT_NEAR(w.dot(f), 24.0, 1e-8);
}

TEST(Weights, ArbitraryNodesAndCentre) {
  const std::vector<double> nodes{-0.3, -0.1, 0.0, 0.2, 0.5};
  const auto w = fornberg_weights(nodes, 0.1, 2);
  ASSERT_EQ(w.rows(), 5);
  ASSERT_EQ(w.cols(), 3);
  // f = exp(u): every derivative at 0.1 equals e^0.1 up to the stencil error
  Eigen::VectorXd f(5);
  for (int j = 0; j < 5; ++j) f(j) = std::exp(nodes[j]);
  EXPECT_NEAR(w.col(0).dot(f), std::exp(0.1), 1e-5);
  EXPECT_NEAR(w.col(1).dot(f), std::exp(0.1), 1e-3);
  EXPECT_NEAR(w.col(2).dot(f), std::exp(0.1), 1e-2);
  EXPECT_NEAR(w.col(1).sum(), 0.0, 1e-12);
}

TEST(Weights, RejectsBadInput) {
  EXPECT_THROW(one_sided_weights(0.0, 5, 1), std::invalid_argument);
  EXPECT_THROW(one_sided_weights(0.1, 3, 3), std::invalid_argument);
  const std::vector<double> dup{0.0, 0.1, 0.1};
  EXPECT_THROW(fornberg_weights(dup, 0.0, 1), std::invalid_argument);
}
