#pragma once

#include <functional>
#include <vector>

#include "cvqite/gaussian.hpp"

namespace cvqite {

/// One probed quadrature power: q(mode)^{2 order} or p(mode)^{2 order}.
struct ProbeFactor {
  int mode = 0;
  Quadrature quadrature = Quadrature::q;
  int order = 1;
};

/// Largest derivative order a single probe variable may carry.
inline constexpr int max_probe_order = 3;

/// Mixed partial derivative at the origin of f over a uniform grid
/// u_i = index_i * spacing, one-sided in every variable. Variable i uses
/// orders[i] + extra_points samples.
double mixed_derivative(const std::function<double(std::span<const int>)>& f,
                        std::span<const int> orders, double spacing, int extra_points);

/// Zero-photon ancilla probes on a truncated system.
///
/// A q-probe is CX(eta) = exp(i eta p_anc q) with a vacuum ancilla detected in
/// |0>; it leaves exp(-eta^2 q^2 / 4) on the system. A p-probe uses
/// exp(i eta q_anc p) instead. The Kraus operators for the grid eta^2 = i h
/// are built once from the truncated gates.
class ProbeKit {
 public:
  ProbeKit(int n_cutoff, double eta_spacing, int extra_points = 6);

  /// Kraus operators from arbitrary zero-photon blocks, one per grid point
  /// (used to model imprecise gate parameters).
  ProbeKit(std::vector<MatrixX<cplx>> q_kraus, double eta_spacing, int extra_points);

  /// Joint zero-photon probability with probe variable i set to u = grid[i] h.
  /// Probes on one mode run q first, then p.
  double probability(const TruncatedState& state, std::span<const ProbeFactor> factors,
                     std::span<const int> grid) const;

  /// Re<prod factors> = prod (-2)^{order} * mixed derivative of the joint
  /// probability. Throws std::domain_error when the product cannot be read
  /// off a zero-photon probability (see supports()).
  double moment(const TruncatedState& state, std::span<const ProbeFactor> factors) const;

  /// A product is supported when every order is in 1..max_probe_order and a
  /// mode probed in both quadratures carries q^2 only.
  static bool supports(std::span<const ProbeFactor> factors);

  double eta_spacing() const { return spacing_; }
  int extra_points() const { return extra_; }
  int n_cutoff() const { return n_cutoff_; }

 private:
  const MatrixX<cplx>& kraus(Quadrature quad, int grid_index) const;

  int n_cutoff_;
  double spacing_;
  int extra_;
  std::vector<MatrixX<cplx>> q_kraus_;
  std::vector<MatrixX<cplx>> p_kraus_;
};

/// <q(k)^{2n}>, n = 1..max_order, from zero-photon probabilities on a grid
/// with n_points = max_order + extra_points samples in u = eta^2.
std::vector<double> moment_from_projection(const TruncatedState& state, int k, int max_order,
                                           double eta_spacing, int extra_points = 6);

/// d^3 P0 / du^3 at u = 0 with P0(u) = <exp(-u q(k)^2 / 2)>.
double third_derivative(const TruncatedState& state, int k, const ProbeKit& kit);

}  // namespace cvqite
