#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "sudfdr/steck.hpp"

namespace sud {

namespace {

struct Flags {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> n;
};

sud::Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sudfdr::ConfigError("cannot open configuration file '" + path + "'");
  sud::Json j = sud::Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw sudfdr::ConfigError("configuration file '" + path + "' is not valid JSON");
  return j;
}

int execute(const std::string& command, const Flags& flags, std::ostream& out, std::ostream& err) {
  try {
    const sud::Json file = flags.config_path.empty() ? sud::Json() : load_json(flags.config_path);
    sud::Json config = sud::resolve_config(command, file, flags.overrides);
    if (flags.seed) config["seed"] = *flags.seed;
    if (flags.n) config["n"] = *flags.n;
    const auto format = flags.format == "json" ? sud::Format::Json : sud::Format::Csv;

    const sud::CommandResult result = sud::run_command(command, config);
    if (flags.out_path.empty()) {
      sud::render(result.table, format, out);
    } else {
      std::ofstream file_out(flags.out_path);
      if (!file_out) throw sudfdr::ConfigError("cannot write '" + flags.out_path + "'");
      sud::render(result.table, format, file_out);
    }
    for (const auto& note : result.table.notes) {
      if (note.rfind("verdict:", 0) == 0) err << note << '\n';
    }
    return result.exit_code;
  } catch (const sudfdr::ConfigError& e) {
    err << "sud " << command << ": " << e.what() << '\n';
    return sud::kExitUsage;
  } catch (const sudfdr::PrecisionError& e) {
    err << "sud " << command << ": precision failure: " << e.what() << '\n';
    return sud::kExitPrecision;
  } catch (const std::exception& e) {
    err << "sud " << command << ": " << e.what() << '\n';
    return sud::kExitUsage;
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and Monte-Carlo FDR of step-up-down procedures"};
  app.require_subcommand(1);

  std::map<std::string, Flags> flags;
  const std::map<std::string, std::string> help = {
      {"fdr-sweep", "exact FDR over a lambda sweep"},
      {"fdp-dist", "exact FDP distribution as bin masses"},
      {"bound", "finite-m bound on the gap to the Dirac-uniform FDR"},
      {"counterexample", "m=10 configuration where Dirac-uniform is not least favorable"},
      {"validate", "exact vs Monte-Carlo cross-validation"},
  };
  for (const auto& name : sud::command_names()) {
    Flags& f = flags[name];
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", f.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out_path, "output path (default: stdout)");
    sub->add_option("--seed", f.seed, "Monte-Carlo seed");
    sub->add_option("--n", f.n, "Monte-Carlo replicates");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--set", f.overrides, "override key=value (dotted keys, JSON values)")->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : sud::kExitUsage;
  }
  for (const auto& name : sud::command_names()) {
    if (app.got_subcommand(name)) return execute(name, flags[name], out, err);
  }
  return sud::kExitUsage;
}

}  // namespace sud
