#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fedscreen/tree.hpp"

namespace fedscreen::detail {

// Chooses the candidate features for one node, in ascending order. An empty
// function means "all features".
using FeaturePicker = std::function<std::vector<std::size_t>(std::size_t arity)>;

// Grows a tree on the rows named by `sample` (indices may repeat, as in a
// bootstrap sample; repeated rows count with multiplicity).
TreeModel grow_tree(const LabeledMatrix& data, std::vector<std::size_t> sample,
                    const TreeConfig& cfg, const FeaturePicker& pick_features);

}  // namespace fedscreen::detail
