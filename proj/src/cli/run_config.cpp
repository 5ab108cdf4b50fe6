#include <algorithm>

#include "fedscreen/cli.hpp"
#include "fedscreen/errors.hpp"

namespace fedscreen {
namespace {

std::string source_key(SourceId id) {
  std::string key(to_string(id));
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

template <typename T>
T value_of(const Json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type: " + j.dump());
  }
}

template <typename Enum, typename Parse>
Enum enum_of(const Json& j, const std::string& key, Parse parse) {
  const auto text = value_of<std::string>(j, key);
  const auto parsed = parse(text);
  if (!parsed) throw ConfigError("config key '" + key + "' has invalid value '" + text + "'");
  return *parsed;
}

std::optional<VoteWeighting> parse_vote_weighting(std::string_view text) {
  if (text == "samples") return VoteWeighting::kSamples;
  if (text == "validation-accuracy") return VoteWeighting::kValidationAccuracy;
  return std::nullopt;
}

}  // namespace

void RunConfig::validate() const {
  if (n_rounds < 1) throw ConfigError("n_rounds must be >= 1, got " + std::to_string(n_rounds));
  if (local_epochs < 0) throw ConfigError("local_epochs must be >= 0");
  round_config().validate();
  const std::size_t arity = feature_arity(Schema::screening(), feature_mode);
  TrainConfig check = train;
  check.kind = classifier_kind;
  check.validate(arity);
}

std::vector<SourceId> RunConfig::active_silos() const {
  if (silos.empty()) return {std::begin(kAllSources), std::end(kAllSources)};
  std::vector<SourceId> out = silos;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RoundConfig RunConfig::round_config() const {
  RoundConfig round;
  round.classifier_kind = classifier_kind;
  round.aggregation = aggregation;
  round.n_rounds = n_rounds;
  round.local_epochs_per_round = local_epochs;
  round.seed = seed;
  round.vote_weighting = vote_weighting;
  round.train = train;
  return round;
}

RunConfig apply_config_json(const Json& j, RunConfig cfg) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool matched_source = false;
    for (SourceId id : kAllSources) {
      if (key == source_key(id)) {
        cfg.source_paths[id] = value_of<std::string>(value, key);
        matched_source = true;
      }
    }
    if (matched_source) continue;

    if (key == "missing_policy") {
      cfg.missing_policy = enum_of<MissingPolicy>(value, key, parse_missing_policy);
    } else if (key == "feature_mode") {
      cfg.feature_mode = enum_of<FeatureMode>(value, key, parse_feature_mode);
    } else if (key == "classifier_kind") {
      cfg.classifier_kind = enum_of<ClassifierKind>(value, key, parse_classifier_kind);
    } else if (key == "aggregation") {
      cfg.aggregation = enum_of<Aggregation>(value, key, parse_aggregation);
    } else if (key == "vote_weighting") {
      cfg.vote_weighting = enum_of<VoteWeighting>(value, key, parse_vote_weighting);
    } else if (key == "n_rounds") {
      cfg.n_rounds = value_of<int>(value, key);
    } else if (key == "local_epochs") {
      cfg.local_epochs = value_of<int>(value, key);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "out_dir") {
      cfg.out_dir = value_of<std::string>(value, key);
    } else if (key == "silos") {
      cfg.silos.clear();
      for (const Json& s : value_of<std::vector<Json>>(value, key)) {
        cfg.silos.push_back(enum_of<SourceId>(s, key, parse_source_id));
      }
    } else if (key == "svc_c") {
      cfg.train.svc.c = value_of<double>(value, key);
    } else if (key == "svc_epochs") {
      cfg.train.svc.epochs = value_of<int>(value, key);
    } else if (key == "tree_max_depth") {
      cfg.train.tree.max_depth = value_of<int>(value, key);
    } else if (key == "tree_min_samples_leaf") {
      cfg.train.tree.min_samples_leaf = value_of<int>(value, key);
    } else if (key == "forest_trees") {
      cfg.train.forest.n_trees = value_of<int>(value, key);
    } else if (key == "forest_features_per_split") {
      cfg.train.forest.features_per_split = value_of<int>(value, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace fedscreen
