#pragma once

// Command-line pipeline: ingest -> train-local / federate -> report.
//
// Layout under the output directory:
//   prepared/<source>.csv   encoded, deduplicated, repaired silo
//   encoding_map.json       category codes shared by all silos
//   data_quality.json       per-source duplicate and missing-cell counts
//   model.json              federated global model
//   round_log.jsonl         one line per round
//   test.csv                held-out rows drawn from the union of silos
//   local/<source>.json     train-local model
//   report.json             experiment-matrix reports

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fedscreen/canonical_json.hpp"
#include "fedscreen/dataset.hpp"
#include "fedscreen/evaluation.hpp"
#include "fedscreen/federation.hpp"

namespace fedscreen {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTraining = 3;
inline constexpr int kExitMissingArtifact = 4;

inline constexpr double kTestFraction = 0.2;
inline constexpr std::uint64_t kTestSplitSeed = 42;

class MissingArtifactError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::map<SourceId, std::string> source_paths;
  MissingPolicy missing_policy = MissingPolicy::kDropRow;
  FeatureMode feature_mode = FeatureMode::kFull;
  ClassifierKind classifier_kind = ClassifierKind::kSvc;
  Aggregation aggregation = Aggregation::kFedAvg;
  VoteWeighting vote_weighting = VoteWeighting::kSamples;
  int n_rounds = 10;
  int local_epochs = 20;
  std::uint64_t seed = 7;
  std::string out_dir = "out";
  // Silos taking part in training; empty means all four.
  std::vector<SourceId> silos;
  TrainConfig train;

  // Throws ConfigError.
  void validate() const;
  std::vector<SourceId> active_silos() const;
  RoundConfig round_config() const;
};

// Overlays the flat keys of a JSON object onto `base`. Unknown keys and
// ill-typed values raise ConfigError. Keys: children_uci, children_kaggle,
// adults_uci, adults_kaggle, missing_policy, feature_mode, classifier_kind,
// aggregation, vote_weighting, n_rounds, local_epochs, seed, out_dir,
// silos, svc_c, svc_epochs, tree_max_depth, tree_min_samples_leaf,
// forest_trees, forest_features_per_split.
RunConfig apply_config_json(const Json& j, RunConfig base);

// ---- commands --------------------------------------------------------------
// Each returns normally on success and throws on failure; run_cli maps the
// exception type to an exit code.

struct IngestSummary {
  std::map<SourceId, std::size_t> rows_prepared;
};

IngestSummary cmd_ingest(const RunConfig& cfg);

// Trains on the silo's local training split exactly as a lone federation
// client would and writes local/<silo>.json. Returns the written path.
std::string cmd_train_local(const RunConfig& cfg, SourceId silo);

FederationResult cmd_federate(const RunConfig& cfg);

std::vector<MetricsReport> cmd_report(const RunConfig& cfg);

// Entry point shared by the executable and the tests. args excludes the
// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fedscreen
