#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fedscreen/cli.hpp"
#include "fedscreen/errors.hpp"

namespace fedscreen {
namespace {

struct Flags {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::optional<std::string> out_dir;
  std::string format = "table";
  std::map<SourceId, std::string> paths;
  std::vector<std::string> silos;
  std::optional<std::string> missing_policy;
  std::optional<std::string> feature_mode;
  std::optional<std::string> classifier;
  std::optional<std::string> aggregation;
  std::optional<std::string> vote_weighting;
  std::optional<int> rounds;
  std::optional<int> local_epochs;
  bool echo_reference = false;
};

RunConfig resolve(const Flags& flags) {
  RunConfig cfg;
  if (!flags.config.empty()) {
    std::ifstream in(flags.config);
    if (!in) throw ConfigError("cannot read config file " + flags.config);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError("config file " + flags.config + " is not valid JSON: " + e.what());
    }
    cfg = apply_config_json(j, cfg);
  }
  // Flags override file values.
  Json overrides = Json::object();
  if (flags.seed) overrides["seed"] = *flags.seed;
  if (flags.out_dir) overrides["out_dir"] = *flags.out_dir;
  if (flags.missing_policy) overrides["missing_policy"] = *flags.missing_policy;
  if (flags.feature_mode) overrides["feature_mode"] = *flags.feature_mode;
  if (flags.classifier) overrides["classifier_kind"] = *flags.classifier;
  if (flags.aggregation) overrides["aggregation"] = *flags.aggregation;
  if (flags.vote_weighting) overrides["vote_weighting"] = *flags.vote_weighting;
  if (flags.rounds) overrides["n_rounds"] = *flags.rounds;
  if (flags.local_epochs) overrides["local_epochs"] = *flags.local_epochs;
  if (!flags.silos.empty()) overrides["silos"] = flags.silos;
  cfg = apply_config_json(overrides, cfg);
  for (const auto& [id, path] : flags.paths) cfg.source_paths[id] = path;
  return cfg;
}

void print_reports(std::span<const MetricsReport> reports, const std::string& format,
                   std::ostream& out) {
  if (format == "json") {
    out << render_json(reports) << '\n';
  } else {
    out << render_table(reports);
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const MissingArtifactError*>(&e)) return kExitMissingArtifact;
  if (const auto* cell = dynamic_cast<const ExperimentError*>(&e)) {
    return cell->training_failure() ? kExitTraining : kExitUsage;
  }
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
      dynamic_cast<const CellError*>(&e) || dynamic_cast<const ImputationError*>(&e)) {
    return kExitUsage;
  }
  return kExitTraining;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Federated screening-classifier simulator", "fedscreen"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--seed", flags.seed, "Training seed");
  app.add_option("--config", flags.config, "JSON run configuration (flat keys)");
  app.add_option("--out-dir", flags.out_dir, "Output directory");
  app.add_option("--format", flags.format, "Report format")
      ->check(CLI::IsMember({"table", "json"}));
  for (SourceId id : kAllSources) {
    const std::string name(to_string(id));
    app.add_option_function<std::string>(
        "--" + name, [&flags, id](const std::string& path) { flags.paths[id] = path; },
        "CSV file for the " + name + " silo");
  }
  app.add_option("--silo", flags.silos, "Restrict to these silos");
  app.add_option("--missing-policy", flags.missing_policy, "drop-row or mode-impute");
  app.add_option("--feature-mode", flags.feature_mode, "responses-only or full");
  app.add_option("--classifier", flags.classifier, "svc, dt or rf");
  app.add_option("--aggregation", flags.aggregation, "fedavg or meta-vote");
  app.add_option("--vote-weighting", flags.vote_weighting, "samples or validation-accuracy");
  app.add_option("--rounds", flags.rounds, "Federation rounds");
  app.add_option("--local-epochs", flags.local_epochs, "Local epochs per round");

  auto* ingest = app.add_subcommand("ingest", "Clean, encode and write the silos");
  auto* train_local = app.add_subcommand("train-local", "Train one silo on its own");
  auto* federate = app.add_subcommand("federate", "Run the federation");
  auto* report = app.add_subcommand("report", "Run the experiment matrix");
  report->add_flag("--echo-paper-table", flags.echo_reference,
                   "Print the pinned reference table and exit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (report->parsed() && flags.echo_reference) {
      print_reports(reference_table_reports(), flags.format, out);
      return kExitOk;
    }
    const RunConfig cfg = resolve(flags);
    if (ingest->parsed()) {
      const IngestSummary summary = cmd_ingest(cfg);
      for (const auto& [id, rows] : summary.rows_prepared) {
        out << to_string(id) << ": " << rows << " rows prepared\n";
      }
    } else if (train_local->parsed()) {
      if (cfg.silos.size() != 1) throw ConfigError("train-local needs exactly one --silo");
      out << "wrote " << cmd_train_local(cfg, cfg.silos.front()) << '\n';
    } else if (federate->parsed()) {
      const FederationResult result = cmd_federate(cfg);
      out << "federation finished after " << result.log.size() << " round(s)\n";
    } else if (report->parsed()) {
      print_reports(cmd_report(cfg), flags.format, out);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace fedscreen
