#include "cvqite/probes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvqite/derivative.hpp"

namespace cvqite {

double mixed_derivative(const std::function<double(std::span<const int>)>& f,
                        std::span<const int> orders, double spacing, int extra_points) {
  const auto vars = orders.size();
  std::vector<Eigen::VectorXd> weights;
  for (const int o : orders) weights.push_back(one_sided_weights(spacing, o + extra_points, o));
  if (vars == 0) return f({});

  std::vector<int> idx(vars, 0);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < vars; ++i) w *= weights[i](idx[i]);
    total += w * f(idx);
    std::size_t i = 0;
    while (i < vars && ++idx[i] == weights[i].size()) idx[i++] = 0;
    if (i == vars) break;
  }
  return total;
}

ProbeKit::ProbeKit(int n_cutoff, double eta_spacing, int extra_points)
    : n_cutoff_(n_cutoff), spacing_(eta_spacing), extra_(extra_points) {
  if (!(eta_spacing > 0.0) || !std::isfinite(eta_spacing)) {
    throw std::invalid_argument("ProbeKit: eta_spacing must be positive");
  }
  if (extra_points < 2) throw std::invalid_argument("ProbeKit: need at least 2 extra grid points");
  const ControlledQuadratureGate cx(n_cutoff, Quadrature::p, Quadrature::q);
  const ControlledQuadratureGate cz(n_cutoff, Quadrature::q, Quadrature::p);
  for (int i = 0; i < max_probe_order + extra_points; ++i) {
    const double eta = std::sqrt(i * eta_spacing);
    q_kraus_.push_back(cx.kraus(eta, 0));
    p_kraus_.push_back(cz.kraus(eta, 0));
  }
}

ProbeKit::ProbeKit(std::vector<MatrixX<cplx>> q_kraus, double eta_spacing, int extra_points)
    : spacing_(eta_spacing), extra_(extra_points), q_kraus_(std::move(q_kraus)) {
  if (q_kraus_.empty()) throw std::invalid_argument("ProbeKit: no Kraus operators given");
  n_cutoff_ = static_cast<int>(q_kraus_.front().rows());
}

const MatrixX<cplx>& ProbeKit::kraus(Quadrature quad, int grid_index) const {
  const auto& table = quad == Quadrature::q ? q_kraus_ : p_kraus_;
  if (grid_index < 0 || grid_index >= static_cast<int>(table.size())) {
    throw std::out_of_range("ProbeKit: grid index " + std::to_string(grid_index) +
                            " outside the prepared probe grid");
  }
  return table[grid_index];
}

bool ProbeKit::supports(std::span<const ProbeFactor> factors) {
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& a = factors[i];
    if (a.order < 1 || a.order > max_probe_order) return false;
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      const auto& b = factors[j];
      if (a.mode != b.mode) continue;
      if (a.quadrature == b.quadrature) return false;
      // The sandwich exp(-u q^2/4) X exp(-u q^2/4) only yields Re<q^2 X> at first order in u.
      const auto& q = a.quadrature == Quadrature::q ? a : b;
      if (q.order != 1) return false;
    }
  }
  return true;
}

double ProbeKit::probability(const TruncatedState& state, std::span<const ProbeFactor> factors,
                             std::span<const int> grid) const {
  if (grid.size() != factors.size()) {
    throw std::invalid_argument("ProbeKit: one grid index per probe factor expected");
  }
  if (state.spec.n_cutoff != n_cutoff_) {
    throw std::invalid_argument("ProbeKit: state cutoff differs from the probe cutoff");
  }
  TruncatedState cur = state;
  for (const auto quad : {Quadrature::q, Quadrature::p}) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i].quadrature != quad || grid[i] == 0) continue;
      cur = apply_local(kraus(quad, grid[i]), factors[i].mode, cur);
    }
  }
  return cur.amplitudes.squaredNorm();
}

double ProbeKit::moment(const TruncatedState& state, std::span<const ProbeFactor> factors) const {
  if (!supports(factors)) {
    throw std::domain_error("ProbeKit: product not expressible through zero-photon probes");
  }
  std::vector<int> orders;
  int total = 0;
  for (const auto& f : factors) {
    orders.push_back(f.order);
    total += f.order;
  }
  const double d = mixed_derivative(
      [&](std::span<const int> grid) { return probability(state, factors, grid); }, orders, spacing_,
      extra_);
  return std::pow(-2.0, total) * d;
}

std::vector<double> moment_from_projection(const TruncatedState& state, int k, int max_order,
                                           double eta_spacing, int extra_points) {
  if (max_order < 1 || max_order > max_probe_order) {
    throw std::invalid_argument("moment_from_projection: max_order must be in 1.." +
                                std::to_string(max_probe_order));
  }
  if (extra_points < 2) {
    throw std::invalid_argument("moment_from_projection: grid of " +
                                std::to_string(max_order + extra_points) + " points is too short for order " +
                                std::to_string(max_order) + " (need at least " +
                                std::to_string(max_order + 2) + ")");
  }
  if (k < 0 || k >= state.spec.n_modes) throw std::out_of_range("moment_from_projection: mode out of range");
  const ProbeKit kit(state.spec.n_cutoff, eta_spacing, extra_points);
  const int n_points = max_order + extra_points;
  std::vector<double> p(n_points);
  const ProbeFactor factor{k, Quadrature::q, max_order};
  for (int i = 0; i < n_points; ++i) {
    const int grid[] = {i};
    p[i] = kit.probability(state, std::span(&factor, 1), grid);
  }
  std::vector<double> out;
  for (int n = 1; n <= max_order; ++n) {
    const auto w = one_sided_weights(eta_spacing, n_points, n);
    double d = 0.0;
    for (int i = 0; i < n_points; ++i) d += w(i) * p[i];
    out.push_back(std::pow(-2.0, n) * d);
  }
  return out;
}

double third_derivative(const TruncatedState& state, int k, const ProbeKit& kit) {
  const ProbeFactor factor{k, Quadrature::q, 3};
  const int orders[] = {3};
  return mixed_derivative(
      [&](std::span<const int> grid) { return kit.probability(state, std::span(&factor, 1), grid); },
      orders, kit.eta_spacing(), kit.extra_points());
}

}  // namespace cvqite
