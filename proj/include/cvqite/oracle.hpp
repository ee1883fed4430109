#pragma once

#include <optional>
#include <vector>

#include "cvqite/lattice.hpp"

namespace cvqite {

/// Lowest levels of a truncated Hamiltonian with photon-parity labels.
///
/// Bit k of a parity pattern is set when the level is odd in mode k. Only
/// modes whose parity commutes with H carry a label; `conserved_mask` says
/// which. Total parity is always a symmetry of the phi^4 Hamiltonians here
/// and is checked, not assumed.
struct SpectrumReport {
  TruncationSpec spec;
  std::vector<double> eigenvalues;  ///< ascending
  std::vector<unsigned> parity;     ///< per-mode pattern, restricted to conserved_mask
  std::vector<bool> even;           ///< total photon parity
  unsigned conserved_mask = 0;
  MatrixX<cplx> eigenvectors;  ///< column i belongs to eigenvalues[i]
  double gap = 0.0;            ///< E1 - E0

  /// Index of the level closest to `energy`.
  int rank_of(double energy) const;
  /// Lowest level in a parity sector, or nullopt if none was computed.
  std::optional<double> sector_minimum(unsigned pattern) const;
};

/// Modes whose parity operator commutes with h to 1e-10, as a bit mask.
unsigned conserved_parity_mask(const ModeOperator& h);

/// Dense diagonalization, block by block over the conserved parity sectors.
/// Levels that tie within 1e-12 are ordered even before odd, then by pattern.
SpectrumReport exact_spectrum(const ModeOperator& h, int n_levels);

/// Eigenvalues of h restricted to basis states with the given parity pattern
/// on the modes in `mask`.
std::vector<double> sector_spectrum(const ModeOperator& h, unsigned pattern, unsigned mask, int n_levels);

struct VariationalOptimum {
  double energy = 0.0;
  std::vector<double> sigma_sq;
  int sweeps = 0;
};

/// min <H> over normalize(prod_k exp(-(sigma^2(k) - 1) q(k)^2 / 2) |Omega>),
/// |Omega> the vacuum or single_particle_state(parity_mode). Only modes in
/// active_modes (empty: all) are varied; the others stay at sigma^2 = 1.
/// Coordinate descent: log scan over [0.05, 20] refined by golden section to
/// 1e-10 in sigma^2, widened once to [0.01, 100] if the minimum sits on the
/// scan boundary.
VariationalOptimum gaussian_variational_optimum(const ModeOperator& h, std::optional<int> parity_mode,
                                                std::vector<int> active_modes = {});

/// The variational state itself.
TruncatedState gaussian_family_state(const TruncationSpec& spec, std::span<const double> sigma_sq,
                                     std::optional<int> parity_mode);

struct InnerProducts {
  Eigen::MatrixXd H;
  Eigen::MatrixXd T;
};

/// Real parts of <psi_i|H|psi_j> and <psi_i|psi_j>.
InnerProducts direct_inner_products(std::span<const TruncatedState> states, const ModeOperator& h);

}  // namespace cvqite
