#pragma once

// Numerical tolerances shared by every module. Tests and the acceptance suite
// read their thresholds from here as well, so a change is visible everywhere.

namespace cvqite::tolerance {

// Algebraic identities: commutators, Hermiticity, vanishing amplitudes.
inline constexpr double algebraic = 1e-10;
// Construction checks: matrix elements, vacuum moments, normalization.
inline constexpr double construction = 1e-12;
// Smallest norm a state may have before normalize() refuses it.
inline constexpr double min_norm = 1e-12;
// Floor on <q^4> - <q^2>^2 below which no Gaussian update is defined.
inline constexpr double variance_floor = 1e-10;
// Overlap-matrix eigenvalues below this are deflated in QLanczos.
inline constexpr double overlap_regularization = 1e-8;
// Default abort threshold on probability mass in the top two Fock levels.
inline constexpr double truncation_guard = 1e-6;
// Default QITE convergence criterion on |E[s] - E[s-1]|.
inline constexpr double convergence = 1e-6;
// Eigenvalues closer than this are treated as tied when ordering by parity.
inline constexpr double parity_tie = 1e-12;
// Parity labels must be +-1 within this.
inline constexpr double parity_label = 1e-8;
// Energy may rise by at most this much per step and still count as monotone.
inline constexpr double monotonicity_slack = 1e-9;

}  // namespace cvqite::tolerance
