#include "cvqite/qlanczos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvqite/oracle.hpp"

namespace cvqite {

void KrylovSelection::validate() const {
  if (steps.empty()) throw std::invalid_argument("KrylovSelection: no steps selected");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] < 0) throw std::invalid_argument("KrylovSelection: negative step");
    if (i > 0 && steps[i] <= steps[i - 1]) {
      throw std::invalid_argument("KrylovSelection: steps must be strictly increasing");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if ((steps[i] - steps[j]) % 2) {
        throw std::invalid_argument("KrylovSelection: steps " + std::to_string(steps[j]) + " and " +
                                    std::to_string(steps[i]) + " differ by an odd number");
      }
    }
  }
}

KrylovSelection KrylovSelection::default_for(int last_step) {
  if (last_step < 4) throw std::invalid_argument("KrylovSelection: trace too short for a default selection");
  const int s1 = last_step / 4;
  int s2 = 3 * last_step / 4;
  if ((s2 - s1) % 2) --s2;
  return {{s1, s2}};
}

KrylovMatrices build_krylov(const QiteTrace& trace, const KrylovSelection& selection, KrylovMode mode,
                            const ModeOperator* hamiltonian, T12Formula formula, CRecursion recursion) {
  selection.validate();
  const int last = static_cast<int>(trace.steps.size()) - 1;
  for (const int s : selection.steps) {
    if (s > last) {
      throw std::invalid_argument("build_krylov: step " + std::to_string(s) + " not in the trace (last step " +
                                  std::to_string(last) + ")");
    }
  }
  const auto d = static_cast<Eigen::Index>(selection.steps.size());
  KrylovMatrices out{Eigen::MatrixXd(d, d), Eigen::MatrixXd(d, d), selection, mode, formula};

  if (mode == KrylovMode::from_states) {
    if (!hamiltonian) throw std::invalid_argument("build_krylov: from_states needs the Hamiltonian");
    if (static_cast<int>(trace.states.size()) != last + 1) {
      throw std::invalid_argument("build_krylov: from_states needs a trace recorded with keep_states");
    }
    std::vector<TruncatedState> picked;
    for (const int s : selection.steps) picked.push_back(trace.states[s]);
    const auto direct = direct_inner_products(picked, *hamiltonian);
    out.H = 0.5 * (direct.H + direct.H.transpose());
    out.T = 0.5 * (direct.T + direct.T.transpose());
    return out;
  }

  auto c_of = [&](int s) {
    return recursion == CRecursion::exact ? trace.steps[s].c : trace.steps[s].c_first_order;
  };
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const int si = selection.steps[i], sj = selection.steps[j];
      const int mid = (si + sj) / 2;
      double t = 1.0;
      if (i != j) {
        const double cm = c_of(mid);
        t = c_of(si) * c_of(sj) / (formula == T12Formula::squared ? cm * cm : cm);
      }
      out.T(i, j) = t;
      out.H(i, j) = t * trace.steps[mid].energy;
    }
  }
  return out;
}

std::vector<GeneralizedEigenpair> solve_generalized(const Eigen::MatrixXd& H, const Eigen::MatrixXd& T,
                                                    double regularization) {
  if (H.rows() != H.cols() || T.rows() != T.cols() || H.rows() != T.rows()) {
    throw std::invalid_argument("solve_generalized: H and T must be square and of equal size");
  }
  if (!H.allFinite() || !T.allFinite()) throw std::domain_error("solve_generalized: non-finite input");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > tolerance::algebraic ||
      (T - T.transpose()).cwiseAbs().maxCoeff() > tolerance::algebraic) {
    throw std::invalid_argument("solve_generalized: H and T must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> overlap(T);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < T.rows(); ++i) {
    if (overlap.eigenvalues()(i) > regularization) keep.push_back(i);
  }
  if (keep.empty()) {
    throw std::domain_error("solve_generalized: overlap matrix is degenerate; the selected states are linearly dependent");
  }
  Eigen::MatrixXd X(T.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    X.col(c) = overlap.eigenvectors().col(keep[c]) / std::sqrt(overlap.eigenvalues()(keep[c]));
  }
  const Eigen::MatrixXd reduced = X.transpose() * H * X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (reduced + reduced.transpose()));
  std::vector<GeneralizedEigenpair> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    out.push_back({solver.eigenvalues()(i), X * solver.eigenvectors().col(i)});
  }
  return out;
}

TruncatedState reconstruct_state(const Eigen::VectorXd& x, std::span<const TruncatedState> states) {
  if (x.size() != static_cast<Eigen::Index>(states.size()) || states.empty()) {
    throw std::invalid_argument("reconstruct_state: one coefficient per state expected");
  }
  TruncatedState out{VectorX<cplx>::Zero(states[0].amplitudes.size()), states[0].spec};
  for (std::size_t i = 0; i < states.size(); ++i) {
    detail::require_same_spec(states[i].spec, out.spec, "reconstruct_state");
    out.amplitudes += x(static_cast<Eigen::Index>(i)) * states[i].amplitudes;
  }
  return normalize(out);
}

}  // namespace cvqite
