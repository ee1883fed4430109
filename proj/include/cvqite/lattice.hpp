#pragma once

#include <vector>

#include "cvqite/fock.hpp"

namespace cvqite {

/// Physical parameters of the phi^4 lattice (spacing a = 1, periodic).
struct LatticeConfig {
  int L = 1;
  double m0_sq = 1.0;    ///< bare mass squared
  double delta_m = 0.0;  ///< counter term, m^2 = m0^2 + delta_m
  double lambda = 0.0;   ///< quartic coupling; H_I uses g = lambda / 4!

  double m_sq() const { return m0_sq + delta_m; }
  double g() const { return lambda / 24.0; }
  void validate() const;
};

/// Whether H0 keeps the sum_k omega(k)/2 vacuum energy.
enum class ZeroPoint { subtracted, included };

/// omega(k) = sqrt(m^2 + 4 sin^2(pi k / L)), k = 0..L-1.
Eigen::VectorXd dispersion(const LatticeConfig& config);

/// H0 = sum_k omega(k) a^dag(k) a(k), diagonal in the momentum-mode Fock basis.
ModeOperator build_h0(const LatticeConfig& config, const TruncationSpec& spec,
                      ZeroPoint zero_point = ZeroPoint::subtracted);

/// H0 assembled in position space, (1/2) sum_x [pi^2 + (grad phi)^2 + m^2 phi^2],
/// with the periodic forward difference phi(x+1) - phi(x). Agrees with build_h0
/// away from the truncation boundary; used as a cross-check.
ModeOperator build_h0_position(const LatticeConfig& config, const TruncationSpec& spec,
                               ZeroPoint zero_point = ZeroPoint::subtracted);

struct FieldOperators {
  std::vector<ModeOperator> phi;  ///< phi(x), x = 0..L-1
  std::vector<ModeOperator> pi;   ///< pi(x)
};

/// Bogoliubov map from the momentum quadratures q(k), p(k) to phi(x), pi(x).
FieldOperators field_operators(const LatticeConfig& config, const TruncationSpec& spec);

/// H_I = sum_x [ -(delta_m/2) phi^2(x) + g phi^4(x) ].
ModeOperator build_h_interaction(const LatticeConfig& config, const TruncationSpec& spec);

ModeOperator build_full_h(const LatticeConfig& config, const TruncationSpec& spec,
                          ZeroPoint zero_point = ZeroPoint::subtracted);

/// |0>^{(x)L}.
TruncatedState vacuum_state(const TruncationSpec& spec);
/// Normalized q(k)|Omega_0>, i.e. one photon in mode k.
TruncatedState single_particle_state(int k, const TruncationSpec& spec);

/// (-1)^{n_k} on one mode.
ModeOperator mode_parity(int mode, const TruncationSpec& spec);
/// (-1)^{sum_k n_k}.
ModeOperator total_parity(const TruncationSpec& spec);

// ---------------------------------------------------------------------------
// H as a polynomial in the quadratures, for moment-based estimation.

struct QuadraturePower {
  int q = 0;
  int p = 0;
  bool operator==(const QuadraturePower&) const = default;
};

/// coefficient * prod_k q(k)^{powers[k].q} p(k)^{powers[k].p}
struct QuadratureMonomial {
  std::vector<QuadraturePower> powers;
  double coefficient = 0.0;
};

struct QuadraturePolynomial {
  int n_modes = 0;
  std::vector<QuadratureMonomial> terms;
  /// False when some term carries both q(k) and p(k) of one mode; the
  /// operator ordering of such a term is not represented.
  bool ordered = true;
};

/// H0 as sum_k omega/2 (q^2 + p^2) (minus omega/2 when subtracted) plus H_I
/// expanded from the field operators. Like terms are merged and cancelled.
QuadraturePolynomial hamiltonian_polynomial(const LatticeConfig& config,
                                            ZeroPoint zero_point = ZeroPoint::subtracted);

/// Matrix of the polynomial with truncated q and p (q placed before p).
ModeOperator to_operator(const QuadraturePolynomial& poly, const TruncationSpec& spec);

/// H in both forms, built once per run.
struct LatticeHamiltonian {
  LatticeConfig config;
  TruncationSpec spec;
  ZeroPoint zero_point = ZeroPoint::subtracted;
  ModeOperator matrix;
  QuadraturePolynomial polynomial;
};

LatticeHamiltonian make_hamiltonian(const LatticeConfig& config, int n_cutoff,
                                    ZeroPoint zero_point = ZeroPoint::subtracted);

}  // namespace cvqite
