#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvqite/config.hpp"
#include "cvqite/oracle.hpp"

namespace cvqite {

/// Shortest round-trip decimal form; "nan"/"inf" for non-finite values.
std::string format_number(double x);

/// "ground", "first excited", ... for level index `rank`.
std::string level_name(int rank);

// ---------------------------------------------------------------------------
// qite

struct QiteOutcome {
  LatticeHamiltonian hamiltonian;
  QiteTrace trace;
  SpectrumReport spectrum;                  ///< at the run cutoff
  std::optional<SpectrumReport> reference;  ///< at oracle.reference_cutoff
  VariationalOptimum optimum;               ///< same parity sector and active modes
  double sector_level = 0.0;                ///< lowest exact level of the run's parity sector
  int rank = 0;                             ///< rank of the final energy (reference spectrum if any)
  int rank_same_cutoff = 0;
  nlohmann::json summary;
};

/// QITE run plus every oracle comparison. TruncationAbort propagates.
QiteOutcome run_qite_experiment(const RunConfig& config, bool keep_states = false);

// ---------------------------------------------------------------------------
// massgap

struct MassGapOutcome {
  QiteTrace ground;
  QiteTrace excited;
  GapResult gap;
  double oracle_gap = 0.0;  ///< lowest odd-in-mode-0 level minus E0, same cutoff
  nlohmann::json summary;
};

/// Traces from |Omega_0> and |Omega(0)> with the config's QITE settings.
MassGapOutcome run_massgap_experiment(const RunConfig& config);

// ---------------------------------------------------------------------------
// spectrum, qlanczos, sensitivity

nlohmann::json spectrum_json(const SpectrumReport& report);
nlohmann::json run_spectrum_experiment(const RunConfig& config);

struct QlanczosOutcome {
  QiteTrace trace;
  std::vector<KrylovMatrices> matrices;  ///< configured mode and formula
  std::vector<KrylovMatrices> direct;    ///< from_states, always
  std::vector<std::vector<GeneralizedEigenpair>> eigenpairs;
  std::vector<std::vector<GeneralizedEigenpair>> direct_eigenpairs;
  SpectrumReport spectrum;
  nlohmann::json report;
};

QlanczosOutcome run_qlanczos_experiment(const RunConfig& config);

struct SensitivityRow {
  double spacing = 0.0;
  double delta_r = 0.0;
  double d3_reference = 0.0;
  double d3_plus = 0.0;
  double d3_minus = 0.0;
  double uncertainty = 0.0;  ///< max |d3(+-dr) - d3(0)|, relative unless d3(0) = 0
  bool relative = true;
};

/// d3 = d^3 P0 / du^3 at 0 through the decomposed CX probe with r shifted by
/// +-delta_r in both squeezers.
double decomposed_probe_d3(const SensitivityOptions& options, double spacing, double delta_r,
                           int extra_points = 6);
std::vector<SensitivityRow> run_sensitivity(const SensitivityOptions& options, int extra_points = 6);

// ---------------------------------------------------------------------------
// Writers

inline constexpr const char* trace_schema = "cvqite-trace/1";
inline constexpr const char* gap_schema = "cvqite-gap/1";
inline constexpr const char* sensitivity_schema = "cvqite-sensitivity/1";

void write_trace_csv(std::ostream& out, const QiteTrace& trace);
void write_gap_csv(std::ostream& out, const QiteTrace& ground, const QiteTrace& excited);
void write_sensitivity_csv(std::ostream& out, const std::vector<SensitivityRow>& rows);

}  // namespace cvqite
