#pragma once

// Command drivers behind the `qcool` executable:
//
//   qcool <command> --config <path> [--seed N] [--out <path>] [--format csv|jsonl]
//
// Commands: limits, surface, simulate, tomo, pipeline. Exit status is 0 on
// success, 2 when the configuration fails validation (the message names the
// offending key) and 3 on a numerical failure such as a missing bisection
// bracket.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qcool/cli/config.hpp"
#include "qcool/cli/table.hpp"

namespace qcool::cli {

enum class Command { limits, surface, simulate, tomo, pipeline };

Command parse_command(const std::string& text);
const char* to_string(Command c);

namespace exit_status {
inline constexpr int ok = 0;
inline constexpr int io = 1;
inline constexpr int config = 2;
inline constexpr int numeric = 3;
}  // namespace exit_status

struct RunConfig {
  Command command = Command::limits;
  Config params;
  std::uint64_t seed = 0;
  std::string out = "-";
  Format format = Format::csv;
  unsigned workers = 1;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

/// Folds flag overrides into the file values and reads the common keys
/// `seed`, `out`, `format` and `workers`.
RunConfig make_run_config(Command command, Config params, const Overrides& overrides = {});

/// Validates the whole configuration, opens the output and runs the
/// command. Diagnostics go to `log`; the return value is the exit status.
int run(const RunConfig& config, std::ostream& log);

/// Same as run() but writes data rows to `out` instead of the configured
/// path. Exceptions propagate.
void run_to_stream(const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace qcool::cli
