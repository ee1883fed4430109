#pragma once

#include <optional>

#include "cvqite/fock.hpp"

namespace cvqite {

enum class Quadrature { q, p };

/// S(r, phi) = exp[(r/2)(e^{-i phi} a^2 - e^{i phi} a^dag^2)]. With phi = 0 a
/// positive r squeezes q: S(r)|0> has Var(q) = e^{-2r}/2.
struct SqueezeParams {
  double r = 0.0;
  double phi = 0.0;
};

/// B(theta, phi) = exp[theta (e^{i phi} a_i a_j^dag - e^{-i phi} a_i^dag a_j)].
struct BeamsplitterParams {
  double theta = 0.0;
  double phi = 0.0;
};

/// CX(Gamma) = B(pi/2 + theta, 0) (S(-r) on control (x) S(r) on target) B(theta, 0)
/// with sinh r = -Gamma/2 and sin 2 theta = -1/cosh r. theta is the principal
/// root for Gamma >= 0 and pi/2 minus it for Gamma < 0.
struct CXDecomposition {
  double theta = 0.0;
  double r = 0.0;
};

// ---------------------------------------------------------------------------
// Local gate matrices. Two-mode matrices act on (first, second) with the
// first listed mode slowest, matching embed() and apply_local().

MatrixX<cplx> squeezer_matrix(const SqueezeParams& params, int n_cutoff);
MatrixX<cplx> beamsplitter_matrix(const BeamsplitterParams& params, int n_cutoff);

/// Estimated truncation error of S(r) acting on Fock levels <= max_input,
/// from a comparison against the same gate built with 12 extra levels. The
/// default covers the vacuum and single-photon inputs the circuits here use.
double squeezer_truncation_error(double r, int n_cutoff, int max_input = 1);

/// exp(i Gamma X_control (x) Y_target) for a fixed pair of quadratures.
///
/// Both quadratures are diagonalized once; every Gamma afterwards costs one
/// product of small matrices.
class ControlledQuadratureGate {
 public:
  ControlledQuadratureGate(int n_cutoff, Quadrature control, Quadrature target);

  /// Local two-mode matrix on (control, target).
  MatrixX<cplx> local(double gamma) const;

  /// <n|_control G(gamma) |0>_control as an operator on the target mode, i.e.
  /// the unnormalized effect on the target of a vacuum ancilla, the gate, and
  /// detection of n photons in the ancilla.
  MatrixX<cplx> kraus(double gamma, int n) const;

  int n_cutoff() const { return n_cutoff_; }

 private:
  int n_cutoff_;
  Eigen::VectorXd control_values_;
  MatrixX<cplx> control_vectors_;
  Eigen::VectorXd target_values_;
  MatrixX<cplx> target_vectors_;
};

/// B(theta, phi) on a local two-mode space for many theta at fixed phi.
///
/// The generator conserves the total photon number, so it is diagonalized one
/// photon-number block at a time.
class BeamsplitterFamily {
 public:
  explicit BeamsplitterFamily(int n_cutoff, double phi = 0.0);

  MatrixX<cplx> matrix(double theta) const;
  VectorX<cplx> apply(double theta, const VectorX<cplx>& local_state) const;
  /// B(theta) * m for a matrix with n_cutoff^2 rows.
  MatrixX<cplx> left_multiply(double theta, const MatrixX<cplx>& m) const;

 private:
  struct Block {
    std::vector<Eigen::Index> indices;
    HermitianExponential<cplx> generator;
  };
  int n_cutoff_;
  std::vector<Block> blocks_;
};

// ---------------------------------------------------------------------------
// Gates embedded in a multimode space

ModeOperator squeezer(const SqueezeParams& params, int mode, const TruncationSpec& spec);
ModeOperator beamsplitter(const BeamsplitterParams& params, int i, int j, const TruncationSpec& spec);

/// Controlled addition exp(i Gamma p_control (x) q_target).
ModeOperator cx_gate(double gamma, int control, int target, const TruncationSpec& spec);

/// p-quadrature probe exp(i Gamma q_control (x) p_target). A vacuum ancilla
/// detected with zero photons leaves exp(-Gamma^2 p^2 / 4) on the target.
ModeOperator cz_gate(double gamma, int control, int target, const TruncationSpec& spec);

/// exp(i Gamma q_control (x) q_target), the other form of CZ in circulation.
/// Its zero-photon projection probes q again, not p; kept for comparison.
ModeOperator cz_gate_qq(double gamma, int control, int target, const TruncationSpec& spec);

CXDecomposition cx_decompose(double gamma);

/// Beamsplitter/squeezer circuit for CX. `squeeze_offset` is added to r in
/// both squeezers (used to model squeezing-parameter imprecision).
ModeOperator cx_reconstruct(const CXDecomposition& decomposition, int control, int target,
                            const TruncationSpec& spec, double squeeze_offset = 0.0);

/// <n|_control C |0>_control for the decomposed circuit C, as an operator on
/// the target. Only the needed columns of the circuit are formed.
MatrixX<cplx> cx_reconstruct_kraus(const CXDecomposition& decomposition, int n_cutoff,
                                   double squeeze_offset = 0.0, int n = 0);

// ---------------------------------------------------------------------------
// Ancilla handling and measurement

/// state (x) |0>, with the new mode appended last.
TruncatedState append_vacuum_mode(const TruncatedState& state);

struct Projection {
  TruncatedState state;  ///< unnormalized, with `mode` removed
  double probability = 0.0;
};

/// Detect n photons in `mode`: keeps the amplitude slice with Fock index n.
Projection project_photon_number(const TruncatedState& state, int mode, int n);

/// Probability mass in the top two Fock levels, maximized over modes.
double top_levels_mass(const TruncatedState& state);

/// Max-norm of (U^dag U - I) on the columns with total photon number <= max_photons.
double unitarity_defect(const ModeOperator& op, int max_photons);

/// Flat indices whose total photon number is <= max_photons.
std::vector<Eigen::Index> low_photon_indices(const TruncationSpec& spec, int max_photons);

}  // namespace cvqite
