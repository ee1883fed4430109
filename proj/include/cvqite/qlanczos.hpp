#pragma once

#include <vector>

#include "cvqite/qite.hpp"

namespace cvqite {

/// QITE steps spanning the Krylov space. Steps increase and every pairwise
/// difference is even, so each midpoint (s_i + s_j)/2 is itself a step.
struct KrylovSelection {
  std::vector<int> steps;

  void validate() const;
  /// (n/4, 3n/4) with the upper step lowered by one if the difference is odd.
  static KrylovSelection default_for(int last_step);
};

enum class KrylovMode { from_trace, from_states };

/// How T_12 is formed from normalization constants. `squared` is
/// c1 c2 / c_mid^2, which follows from c_s^2 <exp(-2 s dtau H)> = 1;
/// `printed` is c1 c2 / c_mid.
enum class T12Formula { squared, printed };

/// Which normalization-constant recursion feeds from_trace.
enum class CRecursion { exact, first_order };

struct KrylovMatrices {
  Eigen::MatrixXd H;
  Eigen::MatrixXd T;
  KrylovSelection selection;
  KrylovMode mode = KrylovMode::from_trace;
  T12Formula formula = T12Formula::squared;
};

/// from_trace uses the recorded c_s and E[s]; from_states takes inner products
/// of the stored snapshots and needs `hamiltonian`.
KrylovMatrices build_krylov(const QiteTrace& trace, const KrylovSelection& selection, KrylovMode mode,
                            const ModeOperator* hamiltonian = nullptr,
                            T12Formula formula = T12Formula::squared,
                            CRecursion recursion = CRecursion::exact);

struct GeneralizedEigenpair {
  double energy = 0.0;
  Eigen::VectorXd x;  ///< T-normalized: x^T T x = 1
};

/// H x = E T x by canonical orthogonalization. Eigendirections of T below
/// `regularization` are dropped; throws if none survive.
std::vector<GeneralizedEigenpair> solve_generalized(const Eigen::MatrixXd& H, const Eigen::MatrixXd& T,
                                                    double regularization = tolerance::overlap_regularization);

/// normalize(sum_i x_i |psi_i>).
TruncatedState reconstruct_state(const Eigen::VectorXd& x, std::span<const TruncatedState> states);

}  // namespace cvqite
