#include "cvqite/lattice.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace cvqite {
namespace {

void require_lattice_spec(const LatticeConfig& config, const TruncationSpec& spec) {
  config.validate();
  spec.validate();
  if (spec.n_modes != config.L) {
    throw std::invalid_argument("lattice: truncation has " + std::to_string(spec.n_modes) +
                                " modes but L = " + std::to_string(config.L));
  }
}

// cos and sin of 2 pi j / L, exact at multiples of a quarter turn.
std::pair<double, double> lattice_phase(long j, int L) {
  j %= L;
  if ((4 * j) % L == 0) {
    switch ((4 * j) / L) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * double(j) / double(L);
  return {std::cos(angle), std::sin(angle)};
}

ModeOperator scaled(const ModeOperator& op, double s) { return {op.matrix * s, op.spec, op.hermitian_hint}; }

ModeOperator zero_operator(const TruncationSpec& spec) {
  const auto d = spec.dimension();
  return {MatrixX<cplx>::Zero(d, d), spec, true};
}

// Polynomial in 2L commuting-by-label variables (q0, p0, q1, p1, ...).
using Key = std::vector<int>;
using Poly = std::map<Key, double>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      Key k(ka.size());
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      out[k] += ca * cb;
    }
  }
  return out;
}

void accumulate(Poly& into, const Poly& term, double scale) {
  for (const auto& [k, c] : term) into[k] += scale * c;
}

}  // namespace

void LatticeConfig::validate() const {
  if (L < 1) throw std::invalid_argument("LatticeConfig: L must be >= 1");
  if (!(m_sq() > 0.0)) {
    throw std::invalid_argument("LatticeConfig: m^2 = m0^2 + delta_m must satisfy m^2 > 0, got " +
                                std::to_string(m_sq()));
  }
  if (!(lambda >= 0.0)) throw std::invalid_argument("LatticeConfig: lambda must be >= 0");
}

Eigen::VectorXd dispersion(const LatticeConfig& config) {
  config.validate();
  Eigen::VectorXd omega(config.L);
  for (int k = 0; k < config.L; ++k) {
    const double s = std::sin(std::numbers::pi * k / config.L);
    omega(k) = k == 0 ? std::sqrt(config.m_sq()) : std::sqrt(config.m_sq() + 4.0 * s * s);
  }
  return omega;
}

ModeOperator build_h0(const LatticeConfig& config, const TruncationSpec& spec, ZeroPoint zero_point) {
  require_lattice_spec(config, spec);
  const auto omega = dispersion(config);
  const auto n = number_operator(spec);
  auto h0 = zero_operator(spec);
  for (int k = 0; k < config.L; ++k) h0.matrix += omega(k) * embed(n, k, spec).matrix;
  if (zero_point == ZeroPoint::included) {
    h0.matrix.diagonal().array() += 0.5 * omega.sum();
  }
  return h0;
}

FieldOperators field_operators(const LatticeConfig& config, const TruncationSpec& spec) {
  require_lattice_spec(config, spec);
  const auto omega = dispersion(config);
  const auto quad = quadratures(spec);
  std::vector<ModeOperator> q, p;
  for (int k = 0; k < config.L; ++k) {
    q.push_back(embed(quad.q, k, spec));
    p.push_back(embed(quad.p, k, spec));
  }
  const double norm = 1.0 / std::sqrt(double(config.L));
  FieldOperators out;
  for (int x = 0; x < config.L; ++x) {
    auto phi = zero_operator(spec);
    auto pi = zero_operator(spec);
    for (int k = 0; k < config.L; ++k) {
      const auto [c, s] = lattice_phase(long(k) * x, config.L);
      const double w = omega(k);
      if (c != 0.0) {
        phi.matrix += (c / std::sqrt(w)) * q[k].matrix;
        pi.matrix += (c * std::sqrt(w)) * p[k].matrix;
      }
      if (s != 0.0) {
        phi.matrix -= (s / std::sqrt(w)) * p[k].matrix;
        pi.matrix += (s * std::sqrt(w)) * q[k].matrix;
      }
    }
    out.phi.push_back(scaled(phi, norm));
    out.pi.push_back(scaled(pi, norm));
  }
  return out;
}

ModeOperator build_h0_position(const LatticeConfig& config, const TruncationSpec& spec,
                               ZeroPoint zero_point) {
  const auto fields = field_operators(config, spec);
  auto h0 = zero_operator(spec);
  for (int x = 0; x < config.L; ++x) {
    const auto& phi = fields.phi[x].matrix;
    const auto& pi = fields.pi[x].matrix;
    h0.matrix += 0.5 * (pi * pi + config.m_sq() * phi * phi);
    // A single periodic site has no gradient.
    if (config.L > 1) {
      const MatrixX<cplx> grad = fields.phi[(x + 1) % config.L].matrix - phi;
      h0.matrix += 0.5 * grad * grad;
    }
  }
  if (zero_point == ZeroPoint::subtracted) {
    h0.matrix.diagonal().array() -= 0.5 * dispersion(config).sum();
  }
  return h0;
}

ModeOperator build_h_interaction(const LatticeConfig& config, const TruncationSpec& spec) {
  require_lattice_spec(config, spec);
  auto hi = zero_operator(spec);
  if (config.delta_m == 0.0 && config.lambda == 0.0) return hi;
  const auto fields = field_operators(config, spec);
  for (const auto& phi : fields.phi) {
    const MatrixX<cplx> phi2 = phi.matrix * phi.matrix;
    hi.matrix += (-0.5 * config.delta_m) * phi2;
    if (config.lambda != 0.0) hi.matrix += config.g() * (phi2 * phi2);
  }
  return hi;
}

ModeOperator build_full_h(const LatticeConfig& config, const TruncationSpec& spec, ZeroPoint zero_point) {
  auto h = build_h0(config, spec, zero_point);
  h.matrix += build_h_interaction(config, spec).matrix;
  h.hermitian_hint = true;
  return h;
}

TruncatedState vacuum_state(const TruncationSpec& spec) {
  TruncatedState s{VectorX<cplx>::Zero(spec.dimension()), spec};
  s.amplitudes(0) = 1.0;
  return s;
}

TruncatedState single_particle_state(int k, const TruncationSpec& spec) {
  if (k < 0 || k >= spec.n_modes) {
    throw std::out_of_range("single_particle_state: mode " + std::to_string(k) + " out of range");
  }
  const auto q = quadratures(spec).q;
  return normalize(apply_local(q.matrix, k, vacuum_state(spec)));
}

ModeOperator mode_parity(int mode, const TruncationSpec& spec) {
  spec.validate();
  VectorX<cplx> d(spec.n_cutoff);
  for (int n = 0; n < spec.n_cutoff; ++n) d(n) = (n % 2 == 0) ? 1.0 : -1.0;
  return embed(ModeOperator{d.asDiagonal().toDenseMatrix(), spec.single_mode(), true}, mode, spec);
}

ModeOperator total_parity(const TruncationSpec& spec) {
  auto out = identity_operator(spec);
  for (int k = 0; k < spec.n_modes; ++k) out.matrix = out.matrix * mode_parity(k, spec).matrix;
  return out;
}

QuadraturePolynomial hamiltonian_polynomial(const LatticeConfig& config, ZeroPoint zero_point) {
  config.validate();
  const int L = config.L;
  const auto omega = dispersion(config);
  const Key zero_key(2 * L, 0);
  auto unit = [&](int var) {
    Key k = zero_key;
    k[var] = 1;
    return k;
  };

  Poly total;
  for (int k = 0; k < L; ++k) {
    Key q2 = zero_key, p2 = zero_key;
    q2[2 * k] = 2;
    p2[2 * k + 1] = 2;
    total[q2] += 0.5 * omega(k);
    total[p2] += 0.5 * omega(k);
    if (zero_point == ZeroPoint::subtracted) total[zero_key] -= 0.5 * omega(k);
  }

  if (config.delta_m != 0.0 || config.lambda != 0.0) {
    const double norm = 1.0 / std::sqrt(double(L));
    for (int x = 0; x < L; ++x) {
      Poly phi;
      for (int k = 0; k < L; ++k) {
        const auto [c, s] = lattice_phase(long(k) * x, L);
        if (c != 0.0) phi[unit(2 * k)] += norm * c / std::sqrt(omega(k));
        if (s != 0.0) phi[unit(2 * k + 1)] -= norm * s / std::sqrt(omega(k));
      }
      const Poly phi2 = multiply(phi, phi);
      accumulate(total, phi2, -0.5 * config.delta_m);
      if (config.lambda != 0.0) accumulate(total, multiply(phi2, phi2), config.g());
    }
  }

  double scale = 0.0;
  for (const auto& [key, c] : total) scale = std::max(scale, std::abs(c));

  QuadraturePolynomial out;
  out.n_modes = L;
  for (const auto& [key, c] : total) {
    if (std::abs(c) <= 1e-14 * scale) continue;
    QuadratureMonomial term;
    term.coefficient = c;
    for (int k = 0; k < L; ++k) {
      term.powers.push_back({key[2 * k], key[2 * k + 1]});
      if (key[2 * k] > 0 && key[2 * k + 1] > 0) out.ordered = false;
    }
    out.terms.push_back(std::move(term));
  }
  return out;
}

ModeOperator to_operator(const QuadraturePolynomial& poly, const TruncationSpec& spec) {
  spec.validate();
  if (spec.n_modes != poly.n_modes) {
    throw std::invalid_argument("to_operator: polynomial and truncation disagree on mode count");
  }
  const auto quad = quadratures(spec);
  auto out = zero_operator(spec);
  for (const auto& term : poly.terms) {
    MatrixX<cplx> m = MatrixX<cplx>::Identity(spec.dimension(), spec.dimension());
    for (int k = 0; k < poly.n_modes; ++k) {
      const auto& pw = term.powers[k];
      if (pw.q == 0 && pw.p == 0) continue;
      MatrixX<cplx> local = MatrixX<cplx>::Identity(spec.n_cutoff, spec.n_cutoff);
      for (int i = 0; i < pw.q; ++i) local = local * quad.q.matrix;
      for (int i = 0; i < pw.p; ++i) local = local * quad.p.matrix;
      m = m * embed(ModeOperator{local, spec.single_mode(), false}, k, spec).matrix;
    }
    out.matrix += term.coefficient * m;
  }
  return out;
}

LatticeHamiltonian make_hamiltonian(const LatticeConfig& config, int n_cutoff, ZeroPoint zero_point) {
  const TruncationSpec spec{n_cutoff, config.L};
  return {config, spec, zero_point, build_full_h(config, spec, zero_point),
          hamiltonian_polynomial(config, zero_point)};
}

}  // namespace cvqite
