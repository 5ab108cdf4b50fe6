#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fedscreen/cli.hpp"
#include "fedscreen/encoding.hpp"
#include "fedscreen/errors.hpp"
#include "fedscreen/split.hpp"

namespace fedscreen {
namespace fs = std::filesystem;
namespace {

std::optional<std::string> try_read(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string read_input(const fs::path& path) {
  auto text = try_read(path);
  if (!text) throw ConfigError("cannot read input file " + path.string());
  return std::move(*text);
}

std::string read_artifact(const fs::path& path, std::string_view producer) {
  auto text = try_read(path);
  if (!text) {
    throw MissingArtifactError("missing artifact " + path.string() + " (run '" +
                               std::string(producer) + "' first)");
  }
  return std::move(*text);
}

void write_output(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError("cannot write " + path.string());
}

fs::path prepared_path(const RunConfig& cfg, SourceId id) {
  return fs::path(cfg.out_dir) / "prepared" / (std::string(to_string(id)) + ".csv");
}

std::vector<Dataset> load_prepared(const RunConfig& cfg) {
  const Schema schema = Schema::screening().encoded();
  std::vector<Dataset> out;
  for (SourceId id : cfg.active_silos()) {
    const fs::path path = prepared_path(cfg, id);
    out.push_back(parse_csv(read_artifact(path, "ingest"), schema, id));
  }
  return out;
}

std::vector<SiloData> silo_matrices(const RunConfig& cfg, const SiloSplit& split) {
  std::vector<SiloData> silos;
  for (const Dataset& d : split.train) silos.push_back({d.source, to_matrix(d, cfg.feature_mode)});
  return silos;
}

}  // namespace

IngestSummary cmd_ingest(const RunConfig& cfg) {
  std::vector<SourceId> sources;
  for (SourceId id : cfg.active_silos()) {
    if (cfg.source_paths.count(id) != 0) sources.push_back(id);
  }
  if (sources.empty()) {
    throw ConfigError("no source files given (use --children-uci, --children-kaggle, "
                      "--adults-uci, --adults-kaggle or a config file)");
  }

  const Schema schema = Schema::screening();
  std::vector<Dataset> raw;
  for (SourceId id : sources) {
    const std::string& path = cfg.source_paths.at(id);
    const std::string text = read_input(path);
    try {
      raw.push_back(parse_csv(text, schema, id));
    } catch (const CellError& e) {
      throw SchemaError(path + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError(path + ": " + e.what());
    }
  }

  const std::vector<Dataset> unique = deduplicate(raw);
  std::vector<Dataset> repaired;
  Json quality = Json::object();
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const std::vector<std::size_t> missing = missing_counts(unique[k]);
    repaired.push_back(handle_missing(unique[k], cfg.missing_policy));
    Json missing_cells = Json::object();
    for (std::size_t c = 0; c < schema.size(); ++c) missing_cells[schema.column(c).name] = missing[c];
    quality[std::string(to_string(sources[k]))] = {
        {"rows_read", raw[k].size()},
        {"duplicates_removed", raw[k].size() - unique[k].size()},
        {"missing_cells", missing_cells},
        {"rows_dropped_missing", unique[k].size() - repaired[k].size()},
        {"rows_prepared", repaired[k].size()}};
  }

  const EncodingMap map = build_encoding_map(repaired);
  IngestSummary summary;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    write_output(prepared_path(cfg, sources[k]), write_csv(apply_encoding(repaired[k], map)));
    summary.rows_prepared[sources[k]] = repaired[k].size();
  }
  const fs::path out(cfg.out_dir);
  write_output(out / "encoding_map.json", canonical_dump(map.to_json()) + "\n");
  write_output(out / "data_quality.json",
               canonical_dump({{"missing_policy", std::string(to_string(cfg.missing_policy))},
                               {"sources", quality}}) +
                   "\n");
  return summary;
}

std::string cmd_train_local(const RunConfig& cfg, SourceId silo) {
  cfg.validate();
  const std::vector<SourceId> active = cfg.active_silos();
  const auto pos = std::find(active.begin(), active.end(), silo);
  if (pos == active.end()) {
    throw ConfigError("silo " + std::string(to_string(silo)) + " is not among the active silos");
  }
  const std::vector<Dataset> prepared = load_prepared(cfg);
  const SiloSplit split = split_silos(prepared, kTestFraction, kTestSplitSeed);
  const auto index = static_cast<std::size_t>(pos - active.begin());

  const ClientState client{silo, to_matrix(split.train[index], cfg.feature_mode), std::nullopt,
                           cfg.seed};
  const MatrixSplit local = local_split(client);
  const Standardization standardization = SufficientStats::of(local.train).finalize();
  const RoundConfig round = cfg.round_config();
  TrainConfig train_cfg = round.train_config();

  // Same schedule and checkpoints a single federation client would follow.
  std::optional<GlobalModel> model;
  if (round.aggregation == Aggregation::kFedAvg) {
    train_cfg.svc.epochs = round.n_rounds * round.local_epochs_per_round;
    train_cfg.svc.checkpoint_interval = std::max(1, round.local_epochs_per_round);
    model.emplace(svc_train(local.train, train_cfg, standardization));
  } else {
    Ensemble ensemble;
    ensemble.members.push_back({train_model(local.train, train_cfg, standardization), 1.0});
    model.emplace(std::move(ensemble));
  }

  const fs::path path = fs::path(cfg.out_dir) / "local" / (std::string(to_string(silo)) + ".json");
  write_output(path, model->serialize() + "\n");
  return path.string();
}

FederationResult cmd_federate(const RunConfig& cfg) {
  cfg.validate();
  const std::vector<Dataset> prepared = load_prepared(cfg);
  const SiloSplit split = split_silos(prepared, kTestFraction, kTestSplitSeed);

  std::vector<ClientState> clients;
  for (SiloData& silo : silo_matrices(cfg, split)) {
    clients.push_back({silo.id, std::move(silo.train), std::nullopt, cfg.seed});
  }
  FederationResult result = run_federation(std::move(clients), cfg.round_config());

  const fs::path out(cfg.out_dir);
  write_output(out / "model.json", result.model.serialize() + "\n");
  write_output(out / "round_log.jsonl", round_log_jsonl(result.log));
  write_output(out / "test.csv", write_csv(split.test));
  return result;
}

std::vector<MetricsReport> cmd_report(const RunConfig& cfg) {
  cfg.validate();
  const fs::path out(cfg.out_dir);
  const std::vector<Dataset> prepared = load_prepared(cfg);
  const std::string model_text = read_artifact(out / "model.json", "federate");
  try {
    GlobalModel::from_json(Json::parse(model_text));
  } catch (const Json::exception& e) {
    throw MissingArtifactError("unreadable artifact " + (out / "model.json").string() + ": " +
                               e.what());
  } catch (const ProtocolError& e) {
    throw MissingArtifactError("unreadable artifact " + (out / "model.json").string() + ": " +
                               e.what());
  }
  const Dataset test = parse_csv(read_artifact(out / "test.csv", "federate"),
                                 Schema::screening().encoded(), prepared.front().source);

  const SiloSplit split = split_silos(prepared, kTestFraction, kTestSplitSeed);
  ExperimentSetup setup{silo_matrices(cfg, split), to_matrix(test, cfg.feature_mode),
                        cfg.round_config()};
  const std::vector<SourceId> active = cfg.active_silos();
  const std::vector<ExperimentCell> cells = default_cells(active);
  std::vector<MetricsReport> reports = run_experiment_matrix(setup, cells);
  write_output(out / "report.json", render_json(reports) + "\n");
  return reports;
}

}  // namespace fedscreen
