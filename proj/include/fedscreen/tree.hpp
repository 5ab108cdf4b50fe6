#pragma once

// CART decision tree with Gini impurity. Splits route `x[f] <= threshold`
// to the left child; candidate thresholds are midpoints between consecutive
// distinct values present at the node.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fedscreen/matrix.hpp"
#include "fedscreen/train_config.hpp"

namespace fedscreen {

using ClassCounts = std::array<std::uint64_t, 2>;

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::uint8_t label = 0;  // leaves only
  ClassCounts counts{};    // leaves only

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

// Nodes in preorder; nodes[0] is the root.
struct TreeModel {
  std::vector<TreeNode> nodes;
  int max_depth = 0;
  std::size_t arity = 0;

  bool operator==(const TreeModel&) const = default;
};

// 1 - p0^2 - p1^2. Throws DegenerateNodeError for (0, 0).
double gini(const ClassCounts& counts);

// Greedy CART. Ties in split quality go to the lowest feature index, then
// the lowest threshold; a leaf predicts the majority class with ties to 1.
TreeModel tree_train(const LabeledMatrix& train, const TrainConfig& cfg);

std::uint8_t tree_predict(const TreeModel& model, std::span<const double> features);

// Index of the leaf that `features` reaches.
std::size_t tree_leaf(const TreeModel& model, std::span<const double> features);

}  // namespace fedscreen
