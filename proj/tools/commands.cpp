#include "commands.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include "cvqite/experiments.hpp"

namespace cvqite::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path prepare_dir(const fs::path& requested, const RunConfig& config) {
  fs::path dir = requested;
  if (dir.empty()) {
    if (!config.outputs) throw ConfigError("config: no output directory (pass --out or set outputs)");
    dir = *config.outputs;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("config: output directory " + dir.string() + " is not writable");
  return dir;
}

std::ofstream open(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("config: cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& doc) { open(path) << doc.dump(2) << '\n'; }

int cmd_qite(const RunConfig& config, const fs::path& dir, std::ostream& log) {
  try {
    const auto outcome = run_qite_experiment(config);
    auto file = open(dir / "trace.csv");
    write_trace_csv(file, outcome.trace);
    write_json(dir / "summary.json", outcome.summary);
    const auto& o = outcome.summary["oracle"];
    log << "E = " << format_number(outcome.trace.final_energy()) << " (" << level_name(outcome.rank)
        << "), exact E0 = " << format_number(o["E0"].get<double>())
        << ", rel. error vs matched level = " << format_number(o["rel_error_vs_matched_level"].get<double>()) << '\n';
    if (!outcome.trace.converged) {
      log << "not converged after " << config.qite.n_steps << " steps\n";
      return not_converged;
    }
    return ok;
  } catch (const TruncationAbort& e) {
    auto file = open(dir / "trace.csv");
    write_trace_csv(file, e.trace);
    json summary = {{"schema", "cvqite-summary/1"}, {"command", "qite"}, {"tag", config.tag},
                    {"aborted", true}, {"reason", e.what()}, {"steps_run", int(e.trace.steps.size()) - 1}};
    write_json(dir / "summary.json", summary);
    log << e.what() << '\n';
    return numerical_abort;
  }
}

int cmd_massgap(const RunConfig& config, const fs::path& dir, std::ostream& log) {
  try {
    const auto outcome = run_massgap_experiment(config);
    auto file = open(dir / "gap.csv");
    write_gap_csv(file, outcome.ground, outcome.excited);
    write_json(dir / "summary.json", outcome.summary);
    log << "gap = " << format_number(outcome.gap.gap) << ", exact = " << format_number(outcome.oracle_gap) << '\n';
    if (outcome.gap.provisional) {
      log << "gap is provisional: a trace did not converge\n";
      return not_converged;
    }
    return ok;
  } catch (const TruncationAbort& e) {
    auto file = open(dir / "trace.csv");
    write_trace_csv(file, e.trace);
    log << e.what() << '\n';
    return numerical_abort;
  }
}

int cmd_spectrum(const RunConfig& config, const fs::path& dir, std::ostream& log) {
  const auto report = run_spectrum_experiment(config);
  write_json(dir / "spectrum.json", report);
  for (const auto& e : report["spectrum"]["eigenvalues"]) log << format_number(e.get<double>()) << '\n';
  return ok;
}

int cmd_qlanczos(const RunConfig& config, const fs::path& dir, std::ostream& log) {
  try {
    const auto outcome = run_qlanczos_experiment(config);
    write_json(dir / "qlanczos.json", outcome.report);
    for (std::size_t i = 0; i < outcome.eigenpairs.size(); ++i) {
      log << "selection " << i << ": lowest " << format_number(outcome.eigenpairs[i].front().energy)
          << ", QITE final " << format_number(outcome.trace.final_energy()) << '\n';
    }
    return ok;
  } catch (const TruncationAbort& e) {
    log << e.what() << '\n';
    return numerical_abort;
  }
}

int cmd_sensitivity(const RunConfig& config, const fs::path& dir, std::ostream& log) {
  const auto rows = run_sensitivity(config.sensitivity, config.qite.stencil_extra_points);
  auto file = open(dir / "sensitivity.csv");
  write_sensitivity_csv(file, rows);
  log << rows.size() << " rows written\n";
  return ok;
}

}  // namespace

int run_command(const std::string& command, const fs::path& config_path, const fs::path& out_dir,
                std::ostream& log) {
  using Handler = std::function<int(const RunConfig&, const fs::path&, std::ostream&)>;
  static const std::map<std::string, Handler> handlers = {
      {"qite", cmd_qite},         {"massgap", cmd_massgap},         {"spectrum", cmd_spectrum},
      {"qlanczos", cmd_qlanczos}, {"sensitivity", cmd_sensitivity},
  };
  const auto it = handlers.find(command);
  if (it == handlers.end()) {
    log << "unknown command " << command << '\n';
    return config_error;
  }
  try {
    const auto config = load_config(config_path);
    const auto dir = prepare_dir(out_dir, config);
    return it->second(config, dir, log);
  } catch (const ConfigError& e) {
    log << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    log << command << ": " << e.what() << '\n';
    return failure;
  }
}

}  // namespace cvqite::cli
