#include "cvqite/qite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include "cvqite/diagnostics.hpp"

namespace cvqite {
namespace {

ModeOperator local_power(const MatrixX<cplx>& m, int power, const TruncationSpec& spec) {
  MatrixX<cplx> out = MatrixX<cplx>::Identity(m.rows(), m.cols());
  for (int i = 0; i < power; ++i) out = out * m;
  return {std::move(out), spec.single_mode(), true};
}

double real_expectation(const MatrixX<cplx>& m, const TruncatedState& s) {
  return std::real(s.amplitudes.dot(m * s.amplitudes));
}

double squeeze_r(double sigma_sq) { return 0.5 * std::log(sigma_sq); }

TruncatedState apply_squeezer(double r, int mode, const TruncatedState& state) {
  const int nc = state.spec.n_cutoff;
  const double err = squeezer_truncation_error(r, nc);
  if (err > tolerance::truncation_guard) {
    warn("squeezer r = " + std::to_string(r) + " has truncation error " + std::to_string(err) +
         " at n_cutoff = " + std::to_string(nc));
  }
  return apply_local(squeezer_matrix({r, 0.0}, nc), mode, state);
}

// Ancilla appended last, CX(eta) from it onto `mode`, detection of `photons`.
Projection probe_and_detect(const TruncatedState& state, int mode, double eta, int photons) {
  auto extended = append_vacuum_mode(state);
  const int anc = extended.spec.n_modes - 1;
  const int modes[] = {anc, mode};
  const ControlledQuadratureGate cx(state.spec.n_cutoff, Quadrature::p, Quadrature::q);
  extended = apply_local(cx.local(eta), std::span<const int>(modes), extended);
  return project_photon_number(extended, anc, photons);
}

// Ancilla strength for the single-photon route that seeds the odd factor.
constexpr double odd_seed_eta = 1.0;

}  // namespace

void QiteConfig::validate(int n_modes) const {
  if (!(delta_tau > 0.0) || !std::isfinite(delta_tau)) {
    throw std::invalid_argument("qite: delta_tau must be positive");
  }
  if (n_steps < 1) throw std::invalid_argument("qite: n_steps must be positive");
  if (!(eta_spacing > 0.0) || !std::isfinite(eta_spacing)) {
    throw std::invalid_argument("qite: eta_spacing must be positive");
  }
  if (stencil_extra_points < 2) {
    throw std::invalid_argument("qite: stencil_extra_points must be >= 2");
  }
  if (!(convergence_tol > 0.0)) throw std::invalid_argument("qite: convergence_tol must be positive");
  if (!(truncation_guard > 0.0)) throw std::invalid_argument("qite: truncation_guard must be positive");
  std::set<int> seen;
  for (const int k : active_modes) {
    if (k < 0 || k >= n_modes) {
      throw std::invalid_argument("qite: active mode " + std::to_string(k) + " out of range");
    }
    if (!seen.insert(k).second) throw std::invalid_argument("qite: active mode listed twice");
  }
}

std::vector<int> QiteConfig::resolved_modes(int n_modes) const {
  if (!active_modes.empty()) {
    auto out = active_modes;
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<int> out(n_modes);
  for (int k = 0; k < n_modes; ++k) out[k] = k;
  return out;
}

std::optional<int> InitialState::parity_mode() const {
  if (kind == Kind::single_particle) return k;
  return std::nullopt;
}

TruncatedState make_initial_state(const InitialState& initial, const TruncationSpec& spec) {
  if (initial.kind == InitialState::Kind::vacuum) return vacuum_state(spec);
  return single_particle_state(initial.k, spec);
}

// ---------------------------------------------------------------------------

MomentEstimator::MomentEstimator(const LatticeHamiltonian& hamiltonian, Estimator kind, double eta_spacing,
                                 int extra_points)
    : hamiltonian_(&hamiltonian), kind_(kind) {
  const auto& spec = hamiltonian.spec;
  const auto q = quadratures(spec).q.matrix;
  for (int k = 0; k < spec.n_modes; ++k) {
    q2_.push_back(embed(local_power(q, 2, spec), k, spec));
    q4_.push_back(embed(local_power(q, 4, spec), k, spec));
    q2h_.push_back({q2_.back().matrix * hamiltonian.matrix.matrix, spec, false});
  }
  if (kind == Estimator::measurement) {
    kit_ = std::make_unique<ProbeKit>(spec.n_cutoff, eta_spacing, extra_points);
    if (!hamiltonian.polynomial.ordered) {
      notice("H mixes q and p of one mode within a term; exact moments used for H");
    }
  }
}

void MomentEstimator::notice(const std::string& text) const {
  if (std::find(notices_.begin(), notices_.end(), text) != notices_.end()) return;
  notices_.push_back(text);
  warn(text);
}

double MomentEstimator::polynomial_moment(const TruncatedState& state, const QuadratureMonomial& term,
                                          std::optional<int> q2_mode) const {
  const int L = hamiltonian_->polynomial.n_modes;
  std::vector<ProbeFactor> factors;
  bool odd = false;
  for (int k = 0; k < L; ++k) {
    const int qp = term.powers[k].q + (q2_mode == k ? 2 : 0);
    const int pp = term.powers[k].p;
    if (qp % 2 || pp % 2) odd = true;
    if (qp > 0) factors.push_back({k, Quadrature::q, qp / 2});
    if (pp > 0) factors.push_back({k, Quadrature::p, pp / 2});
  }
  if (factors.empty()) return term.coefficient * state.amplitudes.squaredNorm();
  if (!odd && ProbeKit::supports(factors)) return term.coefficient * kit_->moment(state, factors);

  std::string label;
  for (int k = 0; k < L; ++k) {
    label += " q" + std::to_string(k) + "^" + std::to_string(term.powers[k].q) + " p" + std::to_string(k) +
             "^" + std::to_string(term.powers[k].p);
  }
  notice("monomial" + label + (q2_mode ? " with q" + std::to_string(*q2_mode) + "^2" : "") +
         " is not probe-measurable; exact expectation used");
  QuadraturePolynomial single{L, {term}, true};
  auto op = to_operator(single, state.spec).matrix;
  if (q2_mode) op = q2_[*q2_mode].matrix * op;
  return real_expectation(op, state);
}

double MomentEstimator::energy(const TruncatedState& state) const {
  const auto& h = *hamiltonian_;
  if (kind_ == Estimator::exact || !h.polynomial.ordered) return real_expectation(h.matrix.matrix, state);
  double total = 0.0;
  for (const auto& term : h.polynomial.terms) total += polynomial_moment(state, term, std::nullopt);
  return total;
}

double MomentEstimator::cross_moment_qqH(const TruncatedState& state, int k) const {
  const auto& h = *hamiltonian_;
  if (k < 0 || k >= h.spec.n_modes) throw std::out_of_range("cross_moment_qqH: mode out of range");
  if (kind_ == Estimator::exact || !h.polynomial.ordered) return real_expectation(q2h_[k].matrix, state);
  double total = 0.0;
  for (const auto& term : h.polynomial.terms) total += polynomial_moment(state, term, k);
  return total;
}

MomentSet MomentEstimator::moments(const TruncatedState& state, int k) const {
  detail::require_same_spec(state.spec, hamiltonian_->spec, "MomentEstimator");
  if (k < 0 || k >= state.spec.n_modes) throw std::out_of_range("MomentEstimator: mode out of range");
  MomentSet m;
  m.mode = k;
  if (kind_ == Estimator::exact) {
    m.q2 = real_expectation(q2_[k].matrix, state);
    m.q4 = real_expectation(q4_[k].matrix, state);
  } else {
    const ProbeFactor f1{k, Quadrature::q, 1};
    const ProbeFactor f2{k, Quadrature::q, 2};
    m.q2 = kit_->moment(state, std::span(&f1, 1));
    m.q4 = kit_->moment(state, std::span(&f2, 1));
  }
  m.q2h = cross_moment_qqH(state, k);
  m.h = energy(state);
  return m;
}

double gamma_from_moments(const MomentSet& m, bool* degenerate) {
  const double var = m.q4 - m.q2 * m.q2;
  if (degenerate) *degenerate = false;
  if (!(var > tolerance::variance_floor)) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  return 2.0 * (m.q2h - m.q2 * m.h) / var;
}

double estimate_gamma(const TruncatedState& state, int k, const MomentEstimator& estimator) {
  bool degenerate = false;
  const double g = gamma_from_moments(estimator.moments(state, k), &degenerate);
  if (degenerate) warn("estimate_gamma: degenerate q^2 variance in mode " + std::to_string(k) + ", gamma set to 0");
  return g;
}

double cross_moment_qqH(const TruncatedState& state, int k, const MomentEstimator& estimator) {
  return estimator.cross_moment_qqH(state, k);
}

TruncatedState qite_step(const TruncatedState& state, std::span<const double> gamma, double delta_tau) {
  if (static_cast<int>(gamma.size()) != state.spec.n_modes) {
    throw std::invalid_argument("qite_step: one gamma per mode expected");
  }
  const auto q = quadratures(state.spec).q.matrix;
  const HermitianExponential<cplx> q2(q * q);
  TruncatedState out = state;
  for (int k = 0; k < state.spec.n_modes; ++k) {
    if (!std::isfinite(gamma[k])) throw std::domain_error("qite_step: non-finite gamma");
    if (gamma[k] == 0.0) continue;
    out = apply_local(q2(cplx(-0.5 * delta_tau * gamma[k])), k, out);
  }
  return normalize(out);
}

TruncatedState prepare_state_squeezers(std::span<const double> sigma_sq, std::optional<int> parity_mode,
                                       int n_cutoff) {
  const TruncationSpec spec{n_cutoff, static_cast<int>(sigma_sq.size())};
  spec.validate();
  for (const double s : sigma_sq) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("prepare_state_squeezers: sigma^2 must be > 0");
  }
  if (parity_mode && (*parity_mode < 0 || *parity_mode >= spec.n_modes)) {
    throw std::out_of_range("prepare_state_squeezers: parity mode out of range");
  }
  TruncatedState state = vacuum_state(spec);
  for (int k = 0; k < spec.n_modes; ++k) {
    double base = 1.0;
    if (parity_mode == k) {
      // One detected photon after CX(eta) leaves q exp(-(1 + eta^2/2) q^2 / 2).
      state = normalize(probe_and_detect(state, k, odd_seed_eta, 1).state);
      base = 1.0 + 0.5 * odd_seed_eta * odd_seed_eta;
    }
    const double r = squeeze_r(sigma_sq[k] / base);
    if (r != 0.0) state = apply_squeezer(r, k, state);
  }
  return normalize(state);
}

AncillaPreparation prepare_state_ancilla(std::span<const double> gamma_param, std::optional<int> parity_mode,
                                         int n_cutoff) {
  const TruncationSpec spec{n_cutoff, static_cast<int>(gamma_param.size())};
  spec.validate();
  if (parity_mode && (*parity_mode < 0 || *parity_mode >= spec.n_modes)) {
    throw std::out_of_range("prepare_state_ancilla: parity mode out of range");
  }
  AncillaPreparation out{vacuum_state(spec), 1.0};
  for (int k = 0; k < spec.n_modes; ++k) {
    if (!std::isfinite(gamma_param[k])) throw std::invalid_argument("prepare_state_ancilla: non-finite Gamma");
    const auto proj = probe_and_detect(out.state, k, std::sqrt(2.0) * gamma_param[k], parity_mode == k ? 1 : 0);
    if (!(proj.probability > tolerance::min_norm)) {
      throw std::domain_error("prepare_state_ancilla: ancilla outcome in mode " + std::to_string(k) +
                              " has zero probability");
    }
    out.probability *= proj.probability;
    out.state = normalize(proj.state);
  }
  return out;
}

// ---------------------------------------------------------------------------

unsigned parity_pattern(Eigen::Index index, const TruncationSpec& spec) {
  unsigned bits = 0;
  for (int m = spec.n_modes - 1; m >= 0; --m) {
    if ((index % spec.n_cutoff) % 2) bits |= 1u << m;
    index /= spec.n_cutoff;
  }
  return bits;
}

double parity_leakage(const TruncatedState& state, unsigned reference_pattern) {
  double mass = 0.0;
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    if (parity_pattern(i, state.spec) != reference_pattern) mass += std::norm(state.amplitudes(i));
  }
  return std::sqrt(mass);
}

QiteTrace run_qite(const LatticeHamiltonian& hamiltonian, const QiteConfig& config, const InitialState& initial) {
  const auto& spec = hamiltonian.spec;
  const int L = spec.n_modes;
  config.validate(L);
  if (initial.kind == InitialState::Kind::single_particle && (initial.k < 0 || initial.k >= L)) {
    throw std::invalid_argument("run_qite: single-particle mode " + std::to_string(initial.k) + " out of range");
  }
  const auto modes = config.resolved_modes(L);
  const MomentEstimator estimator(hamiltonian, config.estimator, config.eta_spacing, config.stencil_extra_points);
  const HermitianExponential<cplx> evolution(hamiltonian.matrix.matrix);
  const auto& h = hamiltonian.matrix.matrix;

  QiteTrace trace;
  trace.config = config;
  trace.initial = initial;
  const unsigned pattern = initial.parity_mode() ? (1u << *initial.parity_mode()) : 0u;

  TruncatedState psi = make_initial_state(initial, spec);
  auto record = [&](QiteStep step, const TruncatedState& state) {
    step.energy = real_expectation(h, state);
    if (!std::isfinite(step.energy)) throw std::runtime_error("run_qite: non-finite energy at step " + std::to_string(step.step));
    step.top_mass = top_levels_mass(state);
    trace.max_top_mass = std::max(trace.max_top_mass, step.top_mass);
    trace.parity_leakage = std::max(trace.parity_leakage, parity_leakage(state, pattern));
    if (!trace.steps.empty()) {
      const double prev = trace.steps.back().energy;
      if (step.energy > prev + tolerance::monotonicity_slack) trace.monotone = false;
      if (trace.converged_step < 0 && std::abs(step.energy - prev) < config.convergence_tol) {
        trace.converged_step = step.step;
      }
    }
    trace.steps.push_back(std::move(step));
    if (config.keep_states) trace.states.push_back(state);
    if (trace.steps.back().top_mass > config.truncation_guard) {
      trace.notices = estimator.notices();
      throw TruncationAbort("run_qite: Fock-level mass " + std::to_string(trace.steps.back().top_mass) +
                                " in the top two levels at step " + std::to_string(trace.steps.back().step) +
                                " exceeds the guard " + std::to_string(config.truncation_guard),
                            trace);
    }
  };

  QiteStep first;
  first.gamma.assign(L, 0.0);
  first.sigma_sq.assign(L, 1.0);
  record(first, psi);

  for (int s = 1; s <= config.n_steps; ++s) {
    const auto start = std::chrono::steady_clock::now();
    const auto& prev = trace.steps.back();
    QiteStep step;
    step.step = s;
    step.tau = s * config.delta_tau;
    step.gamma.assign(L, 0.0);
    for (const int k : modes) step.gamma[k] = estimate_gamma(psi, k, estimator);
    step.sigma_sq = prev.sigma_sq;
    for (int k = 0; k < L; ++k) step.sigma_sq[k] += config.delta_tau * step.gamma[k];

    const VectorX<cplx> w = evolution.eigenvectors().adjoint() * psi.amplitudes;
    double damped = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      damped += std::norm(w(i)) * std::exp(-2.0 * config.delta_tau * evolution.eigenvalues()(i));
    }
    step.c_ratio = 1.0 / std::sqrt(damped);
    step.c = prev.c * step.c_ratio;
    const double first_order = 1.0 - 2.0 * config.delta_tau * prev.energy;
    step.c_ratio_first_order =
        first_order > 0.0 ? 1.0 / std::sqrt(first_order) : std::numeric_limits<double>::quiet_NaN();
    step.c_first_order = prev.c_first_order * step.c_ratio_first_order;

    psi = qite_step(psi, step.gamma, config.delta_tau);
    step.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    record(std::move(step), psi);
    if (config.stop_at_convergence && trace.converged_step >= 0) break;
  }

  const auto n = trace.steps.size();
  trace.converged = n >= 2 && std::abs(trace.steps[n - 1].energy - trace.steps[n - 2].energy) < config.convergence_tol;
  trace.notices = estimator.notices();
  return trace;
}

GapResult mass_gap(const QiteTrace& ground, const QiteTrace& excited) {
  if (ground.steps.empty() || excited.steps.empty()) throw std::invalid_argument("mass_gap: empty trace");
  return {excited.final_energy() - ground.final_energy(), !(ground.converged && excited.converged)};
}

}  // namespace cvqite
