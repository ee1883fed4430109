#include "cvqite/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cvqite/diagnostics.hpp"

namespace cvqite {
namespace {

constexpr cplx I{0.0, 1.0};

MatrixX<cplx> kron(const MatrixX<cplx>& a, const MatrixX<cplx>& b) {
  MatrixX<cplx> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// (a (x) b) * m without forming the Kronecker product: each column of m,
// read as an n x n matrix C with C(j, i) = entry i*n + j, maps to b C a^T.
MatrixX<cplx> kron_apply(const MatrixX<cplx>& a, const MatrixX<cplx>& b, MatrixX<cplx> m) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    Eigen::Map<MatrixX<cplx>> c(m.col(col).data(), n, n);
    c = (b * c * a.transpose()).eval();
  }
  return m;
}

MatrixX<cplx> ladder(int n_cutoff) { return annihilation(TruncationSpec{n_cutoff, 1}).matrix; }

MatrixX<cplx> quadrature_matrix(int n_cutoff, Quadrature which) {
  const auto quad = quadratures(TruncationSpec{n_cutoff, 1});
  return which == Quadrature::q ? quad.q.matrix : quad.p.matrix;
}

// Hermitian generator G with B(theta) = exp(-i theta G), built entrywise:
// a_i a_j^dag |a, b> = sqrt(a (b + 1)) |a - 1, b + 1>.
MatrixX<cplx> beamsplitter_generator(int n_cutoff, double phi) {
  const Eigen::Index n = n_cutoff;
  const cplx e = std::exp(I * phi);
  MatrixX<cplx> g = MatrixX<cplx>::Zero(n * n, n * n);
  for (Eigen::Index a = 1; a < n; ++a) {
    for (Eigen::Index b = 0; b + 1 < n; ++b) {
      const double amp = std::sqrt(double(a) * double(b + 1));
      const Eigen::Index from = a * n + b, to = (a - 1) * n + (b + 1);
      g(to, from) += I * e * amp;
      g(from, to) -= I * std::conj(e) * amp;
    }
  }
  return g;
}

void check_distinct(int i, int j, const char* what) {
  if (i == j) throw std::invalid_argument(std::string(what) + ": modes must be distinct");
}

ModeOperator embed_pair(MatrixX<cplx> local, int first, int second, const TruncationSpec& spec) {
  const int modes[] = {first, second};
  return embed(ModeOperator{std::move(local), spec.with_modes(2), false}, std::span<const int>(modes),
               spec);
}

}  // namespace

MatrixX<cplx> squeezer_matrix(const SqueezeParams& params, int n_cutoff) {
  if (!std::isfinite(params.r) || !std::isfinite(params.phi)) {
    throw std::domain_error("squeezer: non-finite parameters");
  }
  const auto a = ladder(n_cutoff);
  const MatrixX<cplx> a2 = a * a;
  const cplx e = std::exp(-I * params.phi);
  const MatrixX<cplx> anti = (0.5 * params.r) * (e * a2 - std::conj(e) * a2.adjoint());
  return HermitianExponential<cplx>(I * anti)(-I);
}

double squeezer_truncation_error(double r, int n_cutoff, int max_input) {
  const int big = n_cutoff + 12;
  const auto small_s = squeezer_matrix({r, 0.0}, n_cutoff);
  const auto big_s = squeezer_matrix({r, 0.0}, big);
  const int top = std::min(max_input, n_cutoff - 1);
  double err = 0.0;
  for (int col = 0; col <= top; ++col) {
    for (int row = 0; row < big; ++row) {
      const cplx ref = big_s(row, col);
      const cplx got = row < n_cutoff ? small_s(row, col) : cplx{};
      err = std::max(err, std::abs(ref - got));
    }
  }
  return err;
}

MatrixX<cplx> beamsplitter_matrix(const BeamsplitterParams& params, int n_cutoff) {
  return BeamsplitterFamily(n_cutoff, params.phi).matrix(params.theta);
}

BeamsplitterFamily::BeamsplitterFamily(int n_cutoff, double phi) : n_cutoff_(n_cutoff) {
  const MatrixX<cplx> g = beamsplitter_generator(n_cutoff, phi);
  for (int total = 0; total <= 2 * (n_cutoff - 1); ++total) {
    std::vector<Eigen::Index> idx;
    for (int a = std::max(0, total - n_cutoff + 1); a <= std::min(total, n_cutoff - 1); ++a) {
      idx.push_back(Eigen::Index(a) * n_cutoff + (total - a));
    }
    MatrixX<cplx> block(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < idx.size(); ++c) block(r, c) = g(idx[r], idx[c]);
    }
    blocks_.push_back({std::move(idx), HermitianExponential<cplx>(block)});
  }
}

MatrixX<cplx> BeamsplitterFamily::matrix(double theta) const {
  if (!std::isfinite(theta)) throw std::domain_error("beamsplitter: non-finite angle");
  const Eigen::Index d = Eigen::Index(n_cutoff_) * n_cutoff_;
  MatrixX<cplx> out = MatrixX<cplx>::Zero(d, d);
  for (const auto& b : blocks_) {
    const MatrixX<cplx> u = b.generator(-I * theta);
    for (std::size_t r = 0; r < b.indices.size(); ++r) {
      for (std::size_t c = 0; c < b.indices.size(); ++c) out(b.indices[r], b.indices[c]) = u(r, c);
    }
  }
  return out;
}

VectorX<cplx> BeamsplitterFamily::apply(double theta, const VectorX<cplx>& local_state) const {
  if (!std::isfinite(theta)) throw std::domain_error("beamsplitter: non-finite angle");
  if (local_state.size() != Eigen::Index(n_cutoff_) * n_cutoff_) {
    throw std::invalid_argument("beamsplitter: local state has the wrong dimension");
  }
  VectorX<cplx> out(local_state.size());
  for (const auto& b : blocks_) {
    VectorX<cplx> v(b.indices.size());
    for (std::size_t r = 0; r < b.indices.size(); ++r) v(r) = local_state(b.indices[r]);
    v = b.generator.apply(-I * theta, v);
    for (std::size_t r = 0; r < b.indices.size(); ++r) out(b.indices[r]) = v(r);
  }
  return out;
}

MatrixX<cplx> BeamsplitterFamily::left_multiply(double theta, const MatrixX<cplx>& m) const {
  if (!std::isfinite(theta)) throw std::domain_error("beamsplitter: non-finite angle");
  if (m.rows() != Eigen::Index(n_cutoff_) * n_cutoff_) {
    throw std::invalid_argument("beamsplitter: operand has the wrong number of rows");
  }
  MatrixX<cplx> out(m.rows(), m.cols());
  for (const auto& b : blocks_) {
    const auto n = static_cast<Eigen::Index>(b.indices.size());
    MatrixX<cplx> rows(n, m.cols());
    for (Eigen::Index r = 0; r < n; ++r) rows.row(r) = m.row(b.indices[r]);
    rows = b.generator(-I * theta) * rows;
    for (Eigen::Index r = 0; r < n; ++r) out.row(b.indices[r]) = rows.row(r);
  }
  return out;
}

ControlledQuadratureGate::ControlledQuadratureGate(int n_cutoff, Quadrature control, Quadrature target)
    : n_cutoff_(n_cutoff) {
  Eigen::SelfAdjointEigenSolver<MatrixX<cplx>> xc(quadrature_matrix(n_cutoff, control));
  Eigen::SelfAdjointEigenSolver<MatrixX<cplx>> yt(quadrature_matrix(n_cutoff, target));
  control_values_ = xc.eigenvalues();
  control_vectors_ = xc.eigenvectors();
  target_values_ = yt.eigenvalues();
  target_vectors_ = yt.eigenvectors();
}

MatrixX<cplx> ControlledQuadratureGate::local(double gamma) const {
  const int n = n_cutoff_;
  VectorX<cplx> phases(n * n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      phases(j * n + l) = std::exp(I * (gamma * control_values_(j) * target_values_(l)));
    }
  }
  const MatrixX<cplx> w_adj = kron(control_vectors_.adjoint(), target_vectors_.adjoint());
  return kron_apply(control_vectors_, target_vectors_, phases.asDiagonal() * w_adj);
}

MatrixX<cplx> ControlledQuadratureGate::kraus(double gamma, int n) const {
  if (n < 0 || n >= n_cutoff_) throw std::out_of_range("kraus: photon number out of range");
  VectorX<cplx> f = VectorX<cplx>::Zero(n_cutoff_);
  for (int l = 0; l < n_cutoff_; ++l) {
    for (int j = 0; j < n_cutoff_; ++j) {
      f(l) += control_vectors_(n, j) * std::conj(control_vectors_(0, j)) *
              std::exp(I * (gamma * control_values_(j) * target_values_(l)));
    }
  }
  return target_vectors_ * f.asDiagonal() * target_vectors_.adjoint();
}

ModeOperator squeezer(const SqueezeParams& params, int mode, const TruncationSpec& spec) {
  spec.validate();
  const double err = squeezer_truncation_error(params.r, spec.n_cutoff);
  if (err > tolerance::truncation_guard) {
    warn("squeezer: r = " + std::to_string(params.r) + " has truncation error " + std::to_string(err) +
         " at n_cutoff = " + std::to_string(spec.n_cutoff));
  }
  return embed(ModeOperator{squeezer_matrix(params, spec.n_cutoff), spec.single_mode(), false}, mode, spec);
}

ModeOperator beamsplitter(const BeamsplitterParams& params, int i, int j, const TruncationSpec& spec) {
  check_distinct(i, j, "beamsplitter");
  spec.validate();
  return embed_pair(beamsplitter_matrix(params, spec.n_cutoff), i, j, spec);
}

ModeOperator cx_gate(double gamma, int control, int target, const TruncationSpec& spec) {
  check_distinct(control, target, "cx_gate");
  spec.validate();
  return embed_pair(ControlledQuadratureGate(spec.n_cutoff, Quadrature::p, Quadrature::q).local(gamma),
                    control, target, spec);
}

ModeOperator cz_gate(double gamma, int control, int target, const TruncationSpec& spec) {
  check_distinct(control, target, "cz_gate");
  spec.validate();
  return embed_pair(ControlledQuadratureGate(spec.n_cutoff, Quadrature::q, Quadrature::p).local(gamma),
                    control, target, spec);
}

ModeOperator cz_gate_qq(double gamma, int control, int target, const TruncationSpec& spec) {
  check_distinct(control, target, "cz_gate_qq");
  spec.validate();
  return embed_pair(ControlledQuadratureGate(spec.n_cutoff, Quadrature::q, Quadrature::q).local(gamma),
                    control, target, spec);
}

CXDecomposition cx_decompose(double gamma) {
  if (!std::isfinite(gamma)) throw std::domain_error("cx_decompose: non-finite Gamma");
  CXDecomposition d;
  d.r = std::asinh(-0.5 * gamma);
  d.theta = 0.5 * std::asin(-1.0 / std::cosh(d.r));
  // both roots of sin 2theta solve the constraint; only this one reproduces CX for Gamma < 0
  if (gamma < 0.0) d.theta = 0.5 * M_PI - d.theta;
  return d;
}

ModeOperator cx_reconstruct(const CXDecomposition& decomposition, int control, int target,
                            const TruncationSpec& spec, double squeeze_offset) {
  check_distinct(control, target, "cx_reconstruct");
  spec.validate();
  const int n = spec.n_cutoff;
  const BeamsplitterFamily bs(n);
  const double r = decomposition.r + squeeze_offset;
  const MatrixX<cplx> s_control = squeezer_matrix({-r, 0.0}, n);
  const MatrixX<cplx> s_target = squeezer_matrix({r, 0.0}, n);
  const MatrixX<cplx> m = kron_apply(s_control, s_target, bs.matrix(decomposition.theta));
  return embed_pair(bs.left_multiply(0.5 * std::numbers::pi + decomposition.theta, m), control, target, spec);
}

MatrixX<cplx> cx_reconstruct_kraus(const CXDecomposition& decomposition, int n_cutoff, double squeeze_offset,
                                   int n) {
  TruncationSpec{n_cutoff, 2}.validate();
  if (n < 0 || n >= n_cutoff) throw std::out_of_range("cx_reconstruct_kraus: photon number out of range");
  const BeamsplitterFamily bs(n_cutoff);
  const double r = decomposition.r + squeeze_offset;
  MatrixX<cplx> m = MatrixX<cplx>::Zero(Eigen::Index(n_cutoff) * n_cutoff, n_cutoff);
  for (int b = 0; b < n_cutoff; ++b) m(b, b) = 1.0;  // control in |0>
  m = bs.left_multiply(decomposition.theta, m);
  m = kron_apply(squeezer_matrix({-r, 0.0}, n_cutoff), squeezer_matrix({r, 0.0}, n_cutoff), std::move(m));
  m = bs.left_multiply(0.5 * std::numbers::pi + decomposition.theta, m);
  return m.middleRows(Eigen::Index(n) * n_cutoff, n_cutoff);
}

TruncatedState append_vacuum_mode(const TruncatedState& state) {
  const auto spec = state.spec.with_modes(state.spec.n_modes + 1);
  TruncatedState out{VectorX<cplx>::Zero(spec.dimension()), spec};
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    out.amplitudes(i * spec.n_cutoff) = state.amplitudes(i);
  }
  return out;
}

Projection project_photon_number(const TruncatedState& state, int mode, int n) {
  if (state.spec.n_modes < 2) {
    throw std::invalid_argument("project_photon_number: need at least two modes");
  }
  if (n < 0 || n >= state.spec.n_cutoff) {
    throw std::out_of_range("project_photon_number: photon number out of range");
  }
  const int modes[] = {mode};
  const auto layout = local_layout(state.spec, modes);
  const auto offset = layout.offsets[n];
  Projection out;
  out.state.spec = state.spec.with_modes(state.spec.n_modes - 1);
  out.state.amplitudes.resize(static_cast<Eigen::Index>(layout.bases.size()));
  for (std::size_t r = 0; r < layout.bases.size(); ++r) {
    out.state.amplitudes(r) = state.amplitudes(layout.bases[r] + offset);
  }
  out.probability = out.state.amplitudes.squaredNorm();
  return out;
}

double top_levels_mass(const TruncatedState& state) {
  const auto& spec = state.spec;
  const Eigen::Index nc = spec.n_cutoff;
  double worst = 0.0;
  for (int m = 0; m < spec.n_modes; ++m) {
    const auto s = spec.stride(m);
    double mass = 0.0;
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
      if ((i / s) % nc >= nc - 2) mass += std::norm(state.amplitudes(i));
    }
    worst = std::max(worst, mass);
  }
  return worst;
}

std::vector<Eigen::Index> low_photon_indices(const TruncationSpec& spec, int max_photons) {
  std::vector<Eigen::Index> out;
  const auto d = spec.dimension();
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index rest = i;
    int total = 0;
    for (int m = 0; m < spec.n_modes; ++m) {
      total += int(rest % spec.n_cutoff);
      rest /= spec.n_cutoff;
    }
    if (total <= max_photons) out.push_back(i);
  }
  return out;
}

double unitarity_defect(const ModeOperator& op, int max_photons) {
  const auto idx = low_photon_indices(op.spec, max_photons);
  MatrixX<cplx> cols(op.matrix.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) cols.col(c) = op.matrix.col(idx[c]);
  const MatrixX<cplx> gram = cols.adjoint() * cols;
  return (gram - MatrixX<cplx>::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace cvqite
