#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace cvqite::cli {

enum ExitCode : int {
  ok = 0,
  failure = 1,
  config_error = 2,
  numerical_abort = 3,
  not_converged = 4,
};

/// Runs one subcommand (qite, massgap, spectrum, qlanczos, sensitivity).
/// An empty `out_dir` falls back to the config's "outputs" entry.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace cvqite::cli
