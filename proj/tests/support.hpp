#pragma once

// Reference implementations used only by the tests. Nothing here calls into
// the eigensolver or derivative code under test.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cvqite/fock.hpp"

namespace cvqite::ref {

/// Cyclic Jacobi rotations on a real symmetric matrix; ascending eigenvalues.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-13) {
  const auto n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) < tol * std::max(1.0, a.norm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = a(i, i);
  std::sort(out.begin(), out.end());
  return out;
}

/// Eigenvalues of a Hermitian matrix via the real form [[Re, -Im], [Im, Re]],
/// whose spectrum is the Hermitian one with every value doubled.
inline std::vector<double> hermitian_eigenvalues(const MatrixX<cplx>& h) {
  const auto n = h.rows();
  Eigen::MatrixXd r(2 * n, 2 * n);
  r << h.real(), -h.imag(), h.imag(), h.real();
  const auto all = jacobi_eigenvalues(r);
  std::vector<double> out;
  for (std::size_t i = 0; i < all.size(); i += 2) out.push_back(0.5 * (all[i] + all[i + 1]));
  return out;
}

/// Weights of the order-th derivative at 0 from samples at 0, h, ..., (n-1)h,
/// solving the moment (Vandermonde) system sum_j w_j (j h)^i = i! delta_{i,order}.
inline Eigen::VectorXd vandermonde_weights(double h, int n, int order) {
  Eigen::MatrixXd v(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v(i, j) = std::pow(j * h, i);
  rhs(order) = std::tgamma(order + 1.0);
  return v.fullPivLu().solve(rhs);
}

/// <q^{2n}> of the Gaussian wavefunction exp(-s q^2 / 2): (2n-1)!! / (2s)^n.
inline double gaussian_moment(int n, double s = 1.0) {
  double dfact = 1.0;
  for (int k = 2 * n - 1; k > 1; k -= 2) dfact *= k;
  return dfact / std::pow(2.0 * s, n);
}

inline TruncatedState random_state(const TruncationSpec& spec, unsigned seed, int max_level = -1) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  VectorX<cplx> v(spec.dimension());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(dist(gen), dist(gen));
  if (max_level >= 0) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      auto rest = i;
      for (int m = spec.n_modes - 1; m >= 0; --m) {
        if (rest % spec.n_cutoff > max_level) v(i) = 0.0;
        rest /= spec.n_cutoff;
      }
    }
  }
  return {v / v.norm(), spec};
}

inline double max_abs(const MatrixX<cplx>& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace cvqite::ref
