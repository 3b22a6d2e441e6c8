// qcool <command> --config <path> [--seed N] [--out <path>] [--format csv|jsonl]

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcool/cli/commands.hpp"
#include "qcool/cli/config.hpp"

int main(int argc, char** argv) {
  using namespace qcool::cli;

  CLI::App app{"Cooling-limit, photonic simulation and tomography driver"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::vector<std::string> sets;

  app.add_option("command", command, "limits | surface | simulate | tomo | pipeline")->required();
  app.add_option("--config", config_path, "key = value configuration file")->required();
  app.add_option("--seed", seed, "master RNG seed");
  app.add_option("--out", out, "output path, '-' for stdout");
  app.add_option("--format", format, "csv or jsonl");
  app.add_option("--set", sets, "extra key=value, applied after the file")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_status::config;
  }

  try {
    const Command cmd = parse_command(command);
    Config config = Config::load(config_path);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("set", "expected key=value, got '" + kv + "'");
      auto key = kv.substr(0, eq);
      auto value = kv.substr(eq + 1);
      while (!key.empty() && key.back() == ' ') key.pop_back();
      while (!value.empty() && value.front() == ' ') value.erase(0, 1);
      config.set(key, value);
    }
    const RunConfig rc = make_run_config(cmd, std::move(config), Overrides{seed, out, format});
    return run(rc, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_status::config;
  }
}
