#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cvqite/tolerances.hpp"

namespace cvqite {

using cplx = std::complex<double>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Per-mode Fock truncation shared by every state and operator.
///
/// The multimode basis is the Kronecker product of single-mode bases with
/// mode 0 as the slowest-varying factor. Ancilla modes are appended after the
/// system modes, so an amplitude dump is reproducible across runs.
struct TruncationSpec {
  int n_cutoff = 2;  ///< Fock levels 0..n_cutoff-1 in every mode.
  int n_modes = 1;

  void validate() const;
  Eigen::Index dimension() const;
  /// Distance in the flat index between consecutive Fock levels of `mode`.
  Eigen::Index stride(int mode) const;
  TruncationSpec single_mode() const { return {n_cutoff, 1}; }
  TruncationSpec with_modes(int modes) const { return {n_cutoff, modes}; }
  bool operator==(const TruncationSpec&) const = default;
};

/// Index bookkeeping for an operator acting on a subset of modes.
///
/// Every flat index of the full space is `bases[r] + offsets[a]` where `a` is
/// the local index over `modes` (first listed mode slowest) and `r` enumerates
/// the configurations of the remaining modes.
struct LocalLayout {
  std::vector<Eigen::Index> bases;
  std::vector<Eigen::Index> offsets;
};

LocalLayout local_layout(const TruncationSpec& spec, std::span<const int> modes);

template <typename Scalar>
struct BasicState {
  VectorX<Scalar> amplitudes;
  TruncationSpec spec;
};

template <typename Scalar>
struct BasicModeOperator {
  MatrixX<Scalar> matrix;
  TruncationSpec spec;
  bool hermitian_hint = false;
};

template <typename Scalar>
struct BasicQuadratures {
  BasicModeOperator<Scalar> q;
  BasicModeOperator<Scalar> p;
};

using TruncatedState = BasicState<cplx>;
using ModeOperator = BasicModeOperator<cplx>;
using Quadratures = BasicQuadratures<cplx>;

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace detail {

inline void require_same_spec(const TruncationSpec& a, const TruncationSpec& b,
                              const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": truncation specs differ (" +
                                std::to_string(a.n_cutoff) + "^" + std::to_string(a.n_modes) +
                                " vs " + std::to_string(b.n_cutoff) + "^" +
                                std::to_string(b.n_modes) + ")");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Single-mode ladder and quadrature operators

/// Truncated annihilation operator: element (n-1, n) = sqrt(n).
template <typename Scalar = cplx>
BasicModeOperator<Scalar> annihilation(const TruncationSpec& spec) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  spec.validate();
  const int n = spec.n_cutoff;
  MatrixX<Scalar> a = MatrixX<Scalar>::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = Scalar(std::sqrt(Real(k)));
  return {std::move(a), spec.single_mode(), false};
}

template <typename Scalar = cplx>
BasicModeOperator<Scalar> creation(const TruncationSpec& spec) {
  auto a = annihilation<Scalar>(spec);
  a.matrix = a.matrix.adjoint().eval();
  return a;
}

template <typename Scalar = cplx>
BasicModeOperator<Scalar> number_operator(const TruncationSpec& spec) {
  spec.validate();
  VectorX<Scalar> diag(spec.n_cutoff);
  for (int k = 0; k < spec.n_cutoff; ++k) diag(k) = Scalar(k);
  return {diag.asDiagonal().toDenseMatrix(), spec.single_mode(), true};
}

/// q = (a^dag + a)/sqrt(2), p = i(a^dag - a)/sqrt(2) on one mode.
template <typename Scalar = cplx>
BasicQuadratures<Scalar> quadratures(const TruncationSpec& spec) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const MatrixX<Scalar> a = annihilation<Scalar>(spec).matrix;
  const MatrixX<Scalar> ad = a.adjoint();
  const Real s = Real(1) / std::sqrt(Real(2));
  BasicQuadratures<Scalar> out;
  out.q = {(ad + a) * Scalar(s), spec.single_mode(), true};
  out.p = {(ad - a) * Scalar(0, s), spec.single_mode(), true};
  return out;
}

template <typename Scalar = cplx>
BasicModeOperator<Scalar> identity_operator(const TruncationSpec& spec) {
  const auto d = spec.dimension();
  return {MatrixX<Scalar>::Identity(d, d), spec, true};
}

// ---------------------------------------------------------------------------
// Embedding and application

/// Embed an operator on `modes` (first listed mode slowest) into `spec`,
/// acting as the identity on all other modes.
template <typename Scalar>
BasicModeOperator<Scalar> embed(const BasicModeOperator<Scalar>& local, std::span<const int> modes,
                                const TruncationSpec& spec) {
  const auto layout = local_layout(spec, modes);
  const auto ld = static_cast<Eigen::Index>(layout.offsets.size());
  if (local.matrix.rows() != ld || local.matrix.cols() != ld) {
    throw std::invalid_argument("embed: local operator dimension does not match the listed modes");
  }
  const auto d = spec.dimension();
  MatrixX<Scalar> full = MatrixX<Scalar>::Zero(d, d);
  for (const auto base : layout.bases) {
    for (Eigen::Index b = 0; b < ld; ++b) {
      for (Eigen::Index a = 0; a < ld; ++a) {
        full(base + layout.offsets[a], base + layout.offsets[b]) = local.matrix(a, b);
      }
    }
  }
  return {std::move(full), spec, local.hermitian_hint};
}

template <typename Scalar>
BasicModeOperator<Scalar> embed(const BasicModeOperator<Scalar>& single, int mode,
                                const TruncationSpec& spec) {
  if (single.spec.n_modes != 1 || single.spec.n_cutoff != spec.n_cutoff) {
    throw std::invalid_argument("embed: expected a single-mode operator with matching cutoff");
  }
  const int modes[] = {mode};
  return embed(single, std::span<const int>(modes), spec);
}

/// Apply a local operator on `modes` without forming the full matrix.
template <typename Scalar, typename Derived>
BasicState<Scalar> apply_local(const Eigen::MatrixBase<Derived>& local, std::span<const int> modes,
                               const BasicState<Scalar>& state) {
  const auto layout = local_layout(state.spec, modes);
  const auto ld = static_cast<Eigen::Index>(layout.offsets.size());
  if (local.rows() != ld || local.cols() != ld) {
    throw std::invalid_argument("apply_local: operator dimension does not match the listed modes");
  }
  BasicState<Scalar> out{VectorX<Scalar>(state.amplitudes.size()), state.spec};
  VectorX<Scalar> in(ld);
  VectorX<Scalar> res(ld);
  for (const auto base : layout.bases) {
    for (Eigen::Index a = 0; a < ld; ++a) in(a) = state.amplitudes(base + layout.offsets[a]);
    res.noalias() = local * in;
    for (Eigen::Index a = 0; a < ld; ++a) out.amplitudes(base + layout.offsets[a]) = res(a);
  }
  return out;
}

template <typename Scalar, typename Derived>
BasicState<Scalar> apply_local(const Eigen::MatrixBase<Derived>& local, int mode,
                               const BasicState<Scalar>& state) {
  const int modes[] = {mode};
  return apply_local(local, std::span<const int>(modes), state);
}

template <typename Scalar>
BasicState<Scalar> apply(const BasicModeOperator<Scalar>& op, const BasicState<Scalar>& state) {
  detail::require_same_spec(op.spec, state.spec, "apply");
  return {op.matrix * state.amplitudes, state.spec};
}

template <typename Scalar>
Scalar inner(const BasicState<Scalar>& bra, const BasicState<Scalar>& ket) {
  detail::require_same_spec(bra.spec, ket.spec, "inner");
  return bra.amplitudes.dot(ket.amplitudes);
}

template <typename Scalar>
Scalar expectation(const BasicModeOperator<Scalar>& op, const BasicState<Scalar>& state) {
  detail::require_same_spec(op.spec, state.spec, "expectation");
  return state.amplitudes.dot(op.matrix * state.amplitudes);
}

template <typename Scalar>
typename Eigen::NumTraits<Scalar>::Real norm(const BasicState<Scalar>& state) {
  return state.amplitudes.norm();
}

template <typename Scalar>
BasicState<Scalar> normalize(const BasicState<Scalar>& state) {
  const auto n = norm(state);
  if (!(n > tolerance::min_norm)) {
    throw std::domain_error("normalize: state norm " + std::to_string(double(n)) +
                            " is below the minimum");
  }
  return {state.amplitudes / n, state.spec};
}

// ---------------------------------------------------------------------------
// Exponentials

/// exp(scale * H) for a fixed Hermitian H and any scalar scale.
///
/// The eigendecomposition is computed once, so families such as exp(i t G)
/// over a grid of t cost one matrix product each.
template <typename Scalar = cplx>
class HermitianExponential {
 public:
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  explicit HermitianExponential(const MatrixX<Scalar>& hermitian) {
    if (!hermitian.allFinite()) {
      throw std::domain_error("HermitianExponential: non-finite matrix entries");
    }
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(hermitian);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("HermitianExponential: eigendecomposition failed");
    }
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  MatrixX<Scalar> operator()(Scalar scale) const {
    return vectors_ * phases(scale).asDiagonal() * vectors_.adjoint();
  }

  template <typename Derived>
  VectorX<Scalar> apply(Scalar scale, const Eigen::MatrixBase<Derived>& v) const {
    VectorX<Scalar> c = vectors_.adjoint() * v;
    c.array() *= phases(scale).array();
    return vectors_ * c;
  }

  const VectorX<Real>& eigenvalues() const { return values_; }
  const MatrixX<Scalar>& eigenvectors() const { return vectors_; }

 private:
  VectorX<Scalar> phases(Scalar scale) const {
    VectorX<Scalar> out(values_.size());
    for (Eigen::Index i = 0; i < values_.size(); ++i) out(i) = std::exp(scale * values_(i));
    return out;
  }

  VectorX<Real> values_;
  MatrixX<Scalar> vectors_;
};

/// exp(scale * op). Hermitian operators go through an eigendecomposition,
/// everything else through scaling-and-squaring.
template <typename Scalar>
BasicModeOperator<Scalar> matrix_exponential(const BasicModeOperator<Scalar>& op, Scalar scale) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  if (!op.matrix.allFinite() || !std::isfinite(std::abs(scale))) {
    throw std::domain_error("matrix_exponential: non-finite input");
  }
  const bool hermitian = op.hermitian_hint && hermiticity_defect(op.matrix) < Real(tolerance::algebraic);
  BasicModeOperator<Scalar> out{{}, op.spec, false};
  if (hermitian) {
    out.matrix = HermitianExponential<Scalar>(op.matrix)(scale);
    out.hermitian_hint = std::imag(scale) == Real(0);
  } else {
    out.matrix = (op.matrix * scale).exp();
  }
  return out;
}

}  // namespace cvqite
