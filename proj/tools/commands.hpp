#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sudfdr/config.hpp"

namespace sud {

using sudfdr::Json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPrecision = 2;
inline constexpr int kExitValidation = 3;

enum class Format { Csv, Json };

/// A result table plus the provenance echoed into its header block.
struct Table {
  std::string command;
  Json config;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  std::vector<std::string> notes;  // extra '#' lines, e.g. the verdict
};

void render(const Table& table, Format format, std::ostream& out);

/// Built-in configuration of a command; --config and --set are layered on top.
Json default_config(const std::string& command);

/// Default config, merge-patched with `file_config`, then `overrides` applied in order.
Json resolve_config(const std::string& command, const Json& file_config, const std::vector<std::string>& overrides);

struct CommandResult {
  Table table;
  int exit_code = kExitOk;
};

CommandResult cmd_fdr_sweep(const Json& config);
CommandResult cmd_fdp_dist(const Json& config);
CommandResult cmd_bound(const Json& config);
CommandResult cmd_counterexample(const Json& config);
CommandResult cmd_validate(const Json& config);

/// Dispatch by command name; throws sudfdr::ConfigError for unknown commands.
CommandResult run_command(const std::string& command, const Json& config);

/// FNV-1a of the compact JSON dump, as 16 hex digits.
std::string config_hash(const Json& config);

const std::vector<std::string>& command_names();

/// Full command line: `sud <command> [--config f] [--out p] [--seed N] [--n N] [--format csv|json] [--set k=v ...]`.
/// Returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sud
