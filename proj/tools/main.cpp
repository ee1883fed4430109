#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"CV imaginary-time evolution for lattice phi^4"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  for (const char* name : {"qite", "massgap", "spectrum", "qlanczos", "sensitivity"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "output directory (default: outputs from the config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cvqite::cli::config_error;
  }
  return cvqite::cli::run_command(app.get_subcommands().front()->get_name(), config, out, std::cerr);
}
