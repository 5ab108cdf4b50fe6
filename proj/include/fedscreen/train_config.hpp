#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace fedscreen {

enum class ClassifierKind { kSvc, kDecisionTree, kRandomForest };

std::string_view to_string(ClassifierKind kind);  // "svc", "dt", "rf"
std::optional<ClassifierKind> parse_classifier_kind(std::string_view text);

struct SvcConfig {
  double c = 1.0;
  int epochs = 200;
  // The objective is evaluated on the initial model, every
  // checkpoint_interval epochs and after the last epoch; training returns
  // the checkpoint with the lowest objective.
  int checkpoint_interval = 1;
  // Test hook: one full-batch subgradient step per epoch instead of one
  // stochastic step per sample.
  bool full_batch = false;
};

struct TreeConfig {
  int max_depth = 8;
  int min_samples_leaf = 2;
};

struct ForestConfig {
  int n_trees = 100;
  // 0 selects ceil(sqrt(arity)).
  int features_per_split = 0;
  // Test hook: when false every tree sees the training rows unchanged.
  bool bootstrap = true;
};

struct TrainConfig {
  ClassifierKind kind = ClassifierKind::kSvc;
  SvcConfig svc;
  TreeConfig tree;
  ForestConfig forest;
  std::uint64_t seed = 0;

  // Throws ConfigError when a hyperparameter is out of range.
  void validate(std::size_t arity) const;
  int features_per_split(std::size_t arity) const;
};

}  // namespace fedscreen
