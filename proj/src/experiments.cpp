#include "cvqite/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "cvqite/probes.hpp"

namespace cvqite {
namespace {

using nlohmann::json;

const char* estimator_name(Estimator e) { return e == Estimator::exact ? "exact" : "measurement"; }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json initial_json(const InitialState& s) {
  if (s.kind == InitialState::Kind::vacuum) return {{"kind", "vacuum"}};
  return {{"kind", "single_particle"}, {"k", s.k}};
}

json parameters_json(const RunConfig& c) {
  const auto& q = c.qite;
  return {
      {"lattice",
       {{"L", c.lattice.L},
        {"m0_sq", c.lattice.m0_sq},
        {"delta_m", c.lattice.delta_m},
        {"lambda", c.lattice.lambda},
        {"g", c.lattice.g()},
        {"m_sq", c.lattice.m_sq()},
        {"zero_point", c.zero_point == ZeroPoint::subtracted ? "subtracted" : "included"}}},
      {"n_cutoff", c.n_cutoff},
      {"qite",
       {{"delta_tau", q.delta_tau},
        {"n_steps", q.n_steps},
        {"estimator", estimator_name(q.estimator)},
        {"eta_spacing", q.eta_spacing},
        {"stencil_extra_points", q.stencil_extra_points},
        {"active_modes", q.resolved_modes(c.lattice.L)},
        {"convergence_tol", q.convergence_tol},
        {"truncation_guard", q.truncation_guard}}},
      {"initial_state", initial_json(c.initial)},
  };
}

json header_json(const RunConfig& c, const char* command) {
  return {{"schema", "cvqite-summary/1"},
          {"command", command},
          {"tag", c.tag},
          {"parameters", parameters_json(c)},
          {"assumed", c.assumed}};
}

json trace_json(const QiteTrace& t) {
  return {{"converged", t.converged},
          {"converged_step", t.converged_step},
          {"steps_run", static_cast<int>(t.steps.size()) - 1},
          {"final_energy", t.final_energy()},
          {"final_gamma", t.final_step().gamma},
          {"final_sigma_sq", t.final_step().sigma_sq},
          {"monotone", t.monotone},
          {"parity_leakage", t.parity_leakage},
          {"max_top_mass", t.max_top_mass},
          {"notices", t.notices}};
}

double relative(double value, double reference) {
  return reference == 0.0 ? std::abs(value) : std::abs(value - reference) / std::abs(reference);
}

unsigned run_pattern(const InitialState& s) { return s.parity_mode() ? 1u << *s.parity_mode() : 0u; }

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string level_name(int rank) {
  static const char* names[] = {"ground", "first excited", "second excited", "third excited",
                                "fourth excited", "fifth excited"};
  if (rank >= 0 && rank < 6) return names[rank];
  return "excited level " + std::to_string(rank);
}

// ---------------------------------------------------------------------------

QiteOutcome run_qite_experiment(const RunConfig& config, bool keep_states) {
  config.validate();
  QiteOutcome out{make_hamiltonian(config.lattice, config.n_cutoff, config.zero_point), {}, {}, {}, {}, 0.0, 0, 0, {}};
  auto qc = config.qite;
  qc.keep_states = qc.keep_states || keep_states;
  out.trace = run_qite(out.hamiltonian, qc, config.initial);

  const auto& h = out.hamiltonian.matrix;
  out.spectrum = exact_spectrum(h, config.oracle.n_levels);
  const unsigned pattern = run_pattern(config.initial);
  const auto mask = out.spectrum.conserved_mask;
  const auto sector = sector_spectrum(h, pattern, mask, 1);
  out.sector_level = sector.at(0);
  out.optimum = gaussian_variational_optimum(h, config.initial.parity_mode(), qc.resolved_modes(config.lattice.L));

  const double e = out.trace.final_energy();
  out.rank_same_cutoff = out.spectrum.rank_of(e);
  out.rank = out.rank_same_cutoff;
  if (config.oracle.reference_cutoff) {
    const auto ref = make_hamiltonian(config.lattice, *config.oracle.reference_cutoff, config.zero_point);
    out.reference = exact_spectrum(ref.matrix, config.oracle.n_levels);
    out.rank = out.reference->rank_of(e);
  }
  const auto& ranked = out.reference ? *out.reference : out.spectrum;

  out.summary = header_json(config, "qite");
  out.summary["trace"] = trace_json(out.trace);
  json oracle = {
      {"exact_levels", out.spectrum.eigenvalues},
      {"E0", out.spectrum.eigenvalues.at(0)},
      {"abs_error_vs_E0", std::abs(e - out.spectrum.eigenvalues.at(0))},
      {"rel_error_vs_E0", relative(e, out.spectrum.eigenvalues.at(0))},
      {"sector_pattern", pattern},
      {"sector_level", out.sector_level},
      {"abs_error_vs_sector_level", std::abs(e - out.sector_level)},
      {"rel_error_vs_sector_level", relative(e, out.sector_level)},
      {"rank_same_cutoff", out.rank_same_cutoff},
      {"rank", out.rank},
      {"rank_label", level_name(out.rank)},
      {"matched_level", ranked.eigenvalues.at(out.rank)},
      {"rel_error_vs_matched_level", relative(e, ranked.eigenvalues.at(out.rank))},
      {"gaussian_optimum",
       {{"energy", out.optimum.energy},
        {"sigma_sq", out.optimum.sigma_sq},
        {"abs_error", std::abs(e - out.optimum.energy)},
        {"rel_error", relative(e, out.optimum.energy)}}},
  };
  if (out.reference) {
    oracle["reference_cutoff"] = *config.oracle.reference_cutoff;
    oracle["reference_levels"] = out.reference->eigenvalues;
  }
  out.summary["oracle"] = oracle;
  return out;
}

MassGapOutcome run_massgap_experiment(const RunConfig& config) {
  config.validate();
  const auto h = make_hamiltonian(config.lattice, config.n_cutoff, config.zero_point);
  MassGapOutcome out;
  out.ground = run_qite(h, config.qite, InitialState::vacuum());
  out.excited = run_qite(h, config.qite, InitialState::single_particle(0));
  out.gap = mass_gap(out.ground, out.excited);

  const auto mask = conserved_parity_mask(h.matrix);
  const double e0 = sector_spectrum(h.matrix, 0u, mask, 1).at(0);
  const double e1 = sector_spectrum(h.matrix, 1u, mask, 1).at(0);
  out.oracle_gap = e1 - e0;

  out.summary = header_json(config, "massgap");
  out.summary["ground"] = trace_json(out.ground);
  out.summary["excited"] = trace_json(out.excited);
  out.summary["gap"] = out.gap.gap;
  out.summary["provisional"] = out.gap.provisional;
  out.summary["oracle"] = {{"E0", e0},
                           {"E1", e1},
                           {"gap", out.oracle_gap},
                           {"abs_error", std::abs(out.gap.gap - out.oracle_gap)},
                           {"rel_error", relative(out.gap.gap, out.oracle_gap)}};
  return out;
}

json spectrum_json(const SpectrumReport& report) {
  json levels = json::array();
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    levels.push_back({{"energy", report.eigenvalues[i]},
                      {"parity_pattern", report.parity[i]},
                      {"even", static_cast<bool>(report.even[i])}});
  }
  return {{"n_cutoff", report.spec.n_cutoff},
          {"n_modes", report.spec.n_modes},
          {"conserved_parity_mask", report.conserved_mask},
          {"eigenvalues", report.eigenvalues},
          {"levels", levels},
          {"gap", report.gap}};
}

json run_spectrum_experiment(const RunConfig& config) {
  config.validate();
  const auto h = make_hamiltonian(config.lattice, config.n_cutoff, config.zero_point);
  auto report = header_json(config, "spectrum");
  report["spectrum"] = spectrum_json(exact_spectrum(h.matrix, config.oracle.n_levels));
  if (config.oracle.reference_cutoff) {
    const auto ref = make_hamiltonian(config.lattice, *config.oracle.reference_cutoff, config.zero_point);
    report["reference"] = spectrum_json(exact_spectrum(ref.matrix, config.oracle.n_levels));
  }
  return report;
}

QlanczosOutcome run_qlanczos_experiment(const RunConfig& config) {
  config.validate();
  const auto h = make_hamiltonian(config.lattice, config.n_cutoff, config.zero_point);
  QlanczosOutcome out;
  auto qc = config.qite;
  qc.keep_states = true;
  out.trace = run_qite(h, qc, config.initial);
  out.spectrum = exact_spectrum(h.matrix, static_cast<int>(h.spec.dimension()));
  const int last = static_cast<int>(out.trace.steps.size()) - 1;

  auto selections = config.qlanczos.selections;
  if (selections.empty()) selections.push_back(KrylovSelection::default_for(last));
  const auto& opt = config.qlanczos;

  json entries = json::array();
  for (const auto& sel : selections) {
    out.matrices.push_back(build_krylov(out.trace, sel, opt.mode, &h.matrix, opt.formula, opt.recursion));
    out.direct.push_back(build_krylov(out.trace, sel, KrylovMode::from_states, &h.matrix));
    out.eigenpairs.push_back(solve_generalized(out.matrices.back().H, out.matrices.back().T));
    out.direct_eigenpairs.push_back(solve_generalized(out.direct.back().H, out.direct.back().T));

    json eig = json::array(), direct_eig = json::array(), nearest = json::array();
    for (const auto& p : out.eigenpairs.back()) {
      eig.push_back(p.energy);
      const int r = out.spectrum.rank_of(p.energy);
      nearest.push_back({{"rank", r}, {"level", out.spectrum.eigenvalues[r]}});
    }
    for (const auto& p : out.direct_eigenpairs.back()) direct_eig.push_back(p.energy);

    json entry = {{"selection", sel.steps},
                  {"T", matrix_json(out.matrices.back().T)},
                  {"H", matrix_json(out.matrices.back().H)},
                  {"eigenvalues", eig},
                  {"nearest_levels", nearest},
                  {"direct", {{"T", matrix_json(out.direct.back().T)},
                              {"H", matrix_json(out.direct.back().H)},
                              {"eigenvalues", direct_eig}}}};
    if (sel.steps.size() >= 2) {
      const KrylovSelection pair{{sel.steps[0], sel.steps[1]}};
      const double sq = build_krylov(out.trace, pair, KrylovMode::from_trace, nullptr, T12Formula::squared,
                                     opt.recursion).T(0, 1);
      const double pr = build_krylov(out.trace, pair, KrylovMode::from_trace, nullptr, T12Formula::printed,
                                     opt.recursion).T(0, 1);
      const double direct = out.direct.back().T(0, 1);
      entry["t12"] = {{"squared", sq},
                      {"printed", pr},
                      {"direct", direct},
                      {"squared_minus_direct", sq - direct},
                      {"printed_minus_direct", pr - direct},
                      {"formulas_disagree", std::abs(sq - pr) > 1e-3}};
    }
    entries.push_back(entry);
  }

  out.report = header_json(config, "qlanczos");
  out.report["t12_formula_used"] = opt.formula == T12Formula::squared ? "squared" : "printed";
  out.report["t12_note"] =
      "squared: c1 c2 / c_mid^2 from the normalization identity; printed: c1 c2 / c_mid. Both are reported.";
  out.report["c_recursion"] = opt.recursion == CRecursion::exact ? "exact" : "first_order";
  out.report["mode"] = opt.mode == KrylovMode::from_trace ? "from_trace" : "from_states";
  out.report["trace"] = trace_json(out.trace);
  out.report["exact_range"] = {out.spectrum.eigenvalues.front(), out.spectrum.eigenvalues.back()};
  out.report["exact_levels"] = std::vector<double>(
      out.spectrum.eigenvalues.begin(),
      out.spectrum.eigenvalues.begin() + std::min<std::ptrdiff_t>(config.oracle.n_levels, out.spectrum.eigenvalues.size()));
  out.report["selections"] = entries;
  return out;
}

double decomposed_probe_d3(const SensitivityOptions& options, double spacing, double delta_r, int extra_points) {
  std::vector<MatrixX<cplx>> kraus;
  for (int i = 0; i < max_probe_order + extra_points; ++i) {
    kraus.push_back(cx_reconstruct_kraus(cx_decompose(std::sqrt(i * spacing)), options.n_cutoff, delta_r));
  }
  const ProbeKit kit(std::move(kraus), spacing, extra_points);
  const TruncationSpec spec{options.n_cutoff, 1};
  const double s[] = {options.sigma_sq};
  const auto state = gaussian_family_state(spec, s, std::nullopt);
  return third_derivative(state, 0, kit);
}

std::vector<SensitivityRow> run_sensitivity(const SensitivityOptions& options, int extra_points) {
  std::vector<SensitivityRow> rows;
  for (const double h : options.spacings) {
    const double ref = decomposed_probe_d3(options, h, 0.0, extra_points);
    for (const double dr : options.delta_r) {
      SensitivityRow row;
      row.spacing = h;
      row.delta_r = dr;
      row.d3_reference = ref;
      row.d3_plus = dr == 0.0 ? ref : decomposed_probe_d3(options, h, dr, extra_points);
      row.d3_minus = dr == 0.0 ? ref : decomposed_probe_d3(options, h, -dr, extra_points);
      const double dev = std::max(std::abs(row.d3_plus - ref), std::abs(row.d3_minus - ref));
      row.relative = std::abs(ref) > tolerance::construction;
      row.uncertainty = row.relative ? dev / std::abs(ref) : dev;
      rows.push_back(row);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

void write_trace_csv(std::ostream& out, const QiteTrace& trace) {
  const auto L = trace.steps.empty() ? 0 : trace.steps.front().gamma.size();
  out << "# schema=" << trace_schema << '\n';
  out << "step,tau,energy";
  for (std::size_t k = 0; k < L; ++k) out << ",gamma_" << k;
  for (std::size_t k = 0; k < L; ++k) out << ",sigma_sq_" << k;
  out << ",c_ratio,c,c_ratio_first_order,c_first_order,top_mass\n";
  for (const auto& s : trace.steps) {
    out << s.step << ',' << format_number(s.tau) << ',' << format_number(s.energy);
    for (const double g : s.gamma) out << ',' << format_number(g);
    for (const double v : s.sigma_sq) out << ',' << format_number(v);
    out << ',' << format_number(s.c_ratio) << ',' << format_number(s.c) << ',' << format_number(s.c_ratio_first_order)
        << ',' << format_number(s.c_first_order) << ',' << format_number(s.top_mass) << '\n';
  }
}

void write_gap_csv(std::ostream& out, const QiteTrace& ground, const QiteTrace& excited) {
  out << "# schema=" << gap_schema << '\n';
  out << "step,tau,energy_ground,energy_excited,gap\n";
  const auto n = std::min(ground.steps.size(), excited.steps.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = ground.steps[i];
    const auto& e = excited.steps[i];
    out << g.step << ',' << format_number(g.tau) << ',' << format_number(g.energy) << ',' << format_number(e.energy)
        << ',' << format_number(e.energy - g.energy) << '\n';
  }
}

void write_sensitivity_csv(std::ostream& out, const std::vector<SensitivityRow>& rows) {
  out << "# schema=" << sensitivity_schema << '\n';
  out << "spacing,delta_r,d3_reference,d3_plus,d3_minus,relative_uncertainty,absolute_uncertainty\n";
  for (const auto& r : rows) {
    out << format_number(r.spacing) << ',' << format_number(r.delta_r) << ',' << format_number(r.d3_reference) << ','
        << format_number(r.d3_plus) << ',' << format_number(r.d3_minus) << ','
        << (r.relative ? format_number(r.uncertainty) : "") << ','
        << (r.relative ? format_number(r.uncertainty * std::abs(r.d3_reference)) : format_number(r.uncertainty))
        << '\n';
  }
}

}  // namespace cvqite
