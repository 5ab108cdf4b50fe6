#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedscreen/tree.hpp"

namespace fedscreen {

struct ForestModel {
  std::vector<TreeModel> trees;
  int features_per_split = 1;
  std::uint64_t seed = 0;

  bool operator==(const ForestModel&) const = default;
};

// Bagged CART trees. Tree k draws its bootstrap sample and per-node feature
// subsets from a generator seeded by derive_seed(seed, k).
ForestModel forest_train(const LabeledMatrix& train, const TrainConfig& cfg);

std::uint8_t forest_predict(const ForestModel& model, std::span<const double> features);

// 1 iff at least half of the votes are 1. Empty input votes 1.
std::uint8_t majority_vote(std::span<const std::uint8_t> votes);

}  // namespace fedscreen
