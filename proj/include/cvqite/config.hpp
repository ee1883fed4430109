#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvqite/qite.hpp"
#include "cvqite/qlanczos.hpp"

namespace cvqite {

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QlanczosOptions {
  std::vector<KrylovSelection> selections;  ///< empty: default selection
  KrylovMode mode = KrylovMode::from_trace;
  T12Formula formula = T12Formula::squared;
  CRecursion recursion = CRecursion::exact;
};

struct OracleOptions {
  int n_levels = 8;
  /// Cutoff for a second, truncation-converged spectrum used for rank
  /// matching. Unset: the run's own cutoff.
  std::optional<int> reference_cutoff;
};

struct SensitivityOptions {
  std::vector<double> delta_r{0.0, 0.001, 0.002, 0.005, 0.01, 0.02};
  std::vector<double> spacings{0.1, 0.01};
  int n_cutoff = 30;
  double sigma_sq = 1.0;  ///< probed single-mode Gaussian; 1 is the vacuum
};

struct RunConfig {
  std::string tag = "run";
  LatticeConfig lattice;
  ZeroPoint zero_point = ZeroPoint::subtracted;
  int n_cutoff = 10;
  QiteConfig qite;
  InitialState initial;
  QlanczosOptions qlanczos;
  OracleOptions oracle;
  SensitivityOptions sensitivity;
  std::optional<std::filesystem::path> outputs;
  /// Dotted keys whose values are assumptions rather than given parameters.
  std::vector<std::string> assumed;

  void validate() const;
};

/// Parses a JSON document. Unknown keys, wrong types and out-of-range values
/// throw ConfigError naming the line (syntax) or the dotted key (content).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace cvqite
