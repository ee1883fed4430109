#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvqite/lattice.hpp"
#include "cvqite/probes.hpp"

namespace cvqite {

enum class Estimator { exact, measurement };

struct QiteConfig {
  double delta_tau = 0.1;
  int n_steps = 200;
  Estimator estimator = Estimator::exact;
  double eta_spacing = 0.1;
  /// Grid points beyond the derivative order in each probe variable.
  int stencil_extra_points = 6;
  /// Modes whose gamma is estimated; empty means all.
  std::vector<int> active_modes;
  double convergence_tol = tolerance::convergence;
  double truncation_guard = tolerance::truncation_guard;
  bool stop_at_convergence = false;
  /// Store every |Psi[s]> in the trace (needed for QLanczos from_states).
  bool keep_states = false;

  void validate(int n_modes) const;
  std::vector<int> resolved_modes(int n_modes) const;
};

struct InitialState {
  enum class Kind { vacuum, single_particle };
  Kind kind = Kind::vacuum;
  int k = 0;

  static InitialState vacuum() { return {}; }
  static InitialState single_particle(int mode) { return {Kind::single_particle, mode}; }
  std::optional<int> parity_mode() const;
};

TruncatedState make_initial_state(const InitialState& initial, const TruncationSpec& spec);

/// Record of |Psi[s]>. Step 0 is the initial state with gamma = 0, sigma^2 = 1.
struct QiteStep {
  int step = 0;
  double tau = 0.0;
  double energy = 0.0;
  std::vector<double> gamma;     ///< gamma_s(k) used to reach this step
  std::vector<double> sigma_sq;  ///< 1 + delta_tau * sum_{s' <= s} gamma_{s'}(k)
  double c_ratio = 1.0;          ///< c_s / c_{s-1} from <exp(-2 delta_tau H)>
  double c = 1.0;
  double c_ratio_first_order = 1.0;  ///< from 1 - 2 delta_tau <H>
  double c_first_order = 1.0;
  double top_mass = 0.0;
  double wall_seconds = 0.0;
};

struct QiteTrace {
  QiteConfig config;
  InitialState initial;
  std::vector<QiteStep> steps;
  std::vector<TruncatedState> states;  ///< filled when keep_states
  double parity_leakage = 0.0;         ///< max off-sector amplitude norm over steps
  bool monotone = true;
  bool converged = false;
  int converged_step = -1;  ///< first s with |E[s] - E[s-1]| < tol, or -1
  double max_top_mass = 0.0;
  std::vector<std::string> notices;

  const QiteStep& final_step() const { return steps.back(); }
  double final_energy() const { return steps.back().energy; }
};

/// Thrown when the probability mass in the top two Fock levels exceeds the
/// configured guard. Carries the trace up to and including the offending step.
class TruncationAbort : public std::runtime_error {
 public:
  TruncationAbort(const std::string& what, QiteTrace partial)
      : std::runtime_error(what), trace(std::move(partial)) {}
  QiteTrace trace;
};

/// Ingredients of the gamma formula for one mode.
struct MomentSet {
  int mode = 0;
  double q2 = 0.0;
  double q4 = 0.0;
  double q2h = 0.0;  ///< Re <q^2 H>
  double h = 0.0;
};

/// Moment backend. `exact` takes expectations on the state vector;
/// `measurement` reads every moment off zero-photon probe probabilities via
/// the quadrature-polynomial form of H. Products the probes cannot express
/// fall back to exact expectations and leave a notice.
class MomentEstimator {
 public:
  MomentEstimator(const LatticeHamiltonian& hamiltonian, Estimator kind, double eta_spacing = 0.1,
                  int extra_points = 6);

  MomentSet moments(const TruncatedState& state, int k) const;
  double energy(const TruncatedState& state) const;
  double cross_moment_qqH(const TruncatedState& state, int k) const;

  Estimator kind() const { return kind_; }
  const LatticeHamiltonian& hamiltonian() const { return *hamiltonian_; }
  /// Fallback notices issued so far, without repeats.
  const std::vector<std::string>& notices() const { return notices_; }

 private:
  double polynomial_moment(const TruncatedState& state, const QuadratureMonomial& term,
                           std::optional<int> q2_mode) const;
  void notice(const std::string& text) const;

  const LatticeHamiltonian* hamiltonian_;
  Estimator kind_;
  std::unique_ptr<ProbeKit> kit_;
  std::vector<ModeOperator> q2_;
  std::vector<ModeOperator> q4_;
  std::vector<ModeOperator> q2h_;
  mutable std::vector<std::string> notices_;
};

/// gamma = 2(<q^2 H> - <q^2><H>) / (<q^4> - <q^2>^2). Returns 0 and sets
/// `degenerate` when the variance is below the floor.
double gamma_from_moments(const MomentSet& m, bool* degenerate = nullptr);

double estimate_gamma(const TruncatedState& state, int k, const MomentEstimator& estimator);
double cross_moment_qqH(const TruncatedState& state, int k, const MomentEstimator& estimator);

/// normalize(exp(-delta_tau sum_k gamma(k) q(k)^2 / 2) |Psi>).
TruncatedState qite_step(const TruncatedState& state, std::span<const double> gamma, double delta_tau);

/// prod_k exp(-sigma^2(k) q(k)^2 / 2), times q(parity_mode) when given,
/// built from the vacuum with squeezers. The odd factor is made by a
/// single-photon ancilla detection before squeezing.
TruncatedState prepare_state_squeezers(std::span<const double> sigma_sq, std::optional<int> parity_mode,
                                       int n_cutoff);

struct AncillaPreparation {
  TruncatedState state;
  double probability = 1.0;  ///< joint probability of all ancilla outcomes
};

/// Same family through one CX probe per mode with a fresh vacuum ancilla,
/// detected in |0> (|1> for parity_mode). The gate strength sqrt(2) Gamma(k)
/// gives sigma^2(k) = 1 + Gamma(k)^2.
AncillaPreparation prepare_state_ancilla(std::span<const double> gamma_param, std::optional<int> parity_mode,
                                         int n_cutoff);

QiteTrace run_qite(const LatticeHamiltonian& hamiltonian, const QiteConfig& config, const InitialState& initial);

struct GapResult {
  double gap = 0.0;
  bool provisional = false;  ///< set when either trace did not converge
};

GapResult mass_gap(const QiteTrace& ground, const QiteTrace& excited);

/// Off-sector amplitude norm relative to the per-mode parity pattern of `reference_pattern`
/// (bit k set = odd in mode k).
double parity_leakage(const TruncatedState& state, unsigned reference_pattern);

/// Bit pattern of per-mode photon parities for a basis index.
unsigned parity_pattern(Eigen::Index index, const TruncationSpec& spec);

}  // namespace cvqite
