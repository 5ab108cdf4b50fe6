#include "fedscreen/train_config.hpp"

#include <cmath>
#include <string>

#include "fedscreen/errors.hpp"

namespace fedscreen {

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kSvc:
      return "svc";
    case ClassifierKind::kDecisionTree:
      return "dt";
    case ClassifierKind::kRandomForest:
      return "rf";
  }
  return "unknown";
}

std::optional<ClassifierKind> parse_classifier_kind(std::string_view text) {
  if (text == "svc") return ClassifierKind::kSvc;
  if (text == "dt") return ClassifierKind::kDecisionTree;
  if (text == "rf") return ClassifierKind::kRandomForest;
  return std::nullopt;
}

int TrainConfig::features_per_split(std::size_t arity) const {
  if (forest.features_per_split > 0) return forest.features_per_split;
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(arity))));
}

void TrainConfig::validate(std::size_t arity) const {
  if (!(svc.c > 0.0) || !std::isfinite(svc.c)) throw ConfigError("svc C must be positive");
  if (svc.epochs < 0) throw ConfigError("svc epochs must be non-negative");
  if (svc.checkpoint_interval < 1) throw ConfigError("checkpoint interval must be >= 1");
  if (tree.max_depth < 0) throw ConfigError("max_depth must be non-negative");
  if (tree.min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
  if (forest.n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (arity == 0) throw ConfigError("feature arity must be positive");
  const int k = features_per_split(arity);
  if (forest.features_per_split < 0 || k < 1 || static_cast<std::size_t>(k) > arity) {
    throw ConfigError("features_per_split must lie in [1, " + std::to_string(arity) + "]");
  }
}

}  // namespace fedscreen
