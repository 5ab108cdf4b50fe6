#include "fedscreen/forest.hpp"

#include <algorithm>
#include <numeric>

#include "classifiers/tree_builder.hpp"
#include "fedscreen/rng.hpp"

namespace fedscreen {

ForestModel forest_train(const LabeledMatrix& train, const TrainConfig& cfg) {
  if (train.empty()) throw TrainingError("training set is empty");
  cfg.validate(train.cols());
  const std::size_t n = train.rows();
  const std::size_t arity = train.cols();
  const auto per_split = static_cast<std::size_t>(cfg.features_per_split(arity));

  ForestModel forest;
  forest.features_per_split = static_cast<int>(per_split);
  forest.seed = cfg.seed;
  forest.trees.reserve(static_cast<std::size_t>(cfg.forest.n_trees));

  std::vector<std::size_t> all_features(arity);
  for (int t = 0; t < cfg.forest.n_trees; ++t) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));

    std::vector<std::size_t> sample(n);
    if (cfg.forest.bootstrap) {
      for (auto& s : sample) s = static_cast<std::size_t>(rng.uniform_below(n));
    } else {
      std::iota(sample.begin(), sample.end(), std::size_t{0});
    }

    const detail::FeaturePicker pick = [&](std::size_t) {
      std::iota(all_features.begin(), all_features.end(), std::size_t{0});
      for (std::size_t i = 0; i < per_split; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_below(arity - i));
        std::swap(all_features[i], all_features[j]);
      }
      std::vector<std::size_t> chosen(all_features.begin(),
                                      all_features.begin() + static_cast<std::ptrdiff_t>(per_split));
      std::sort(chosen.begin(), chosen.end());
      return chosen;
    };
    forest.trees.push_back(detail::grow_tree(train, std::move(sample), cfg.tree, pick));
  }
  return forest;
}

std::uint8_t majority_vote(std::span<const std::uint8_t> votes) {
  std::size_t ones = 0;
  for (auto v : votes) ones += (v == 1);
  return 2 * ones >= votes.size() ? 1 : 0;
}

std::uint8_t forest_predict(const ForestModel& model, std::span<const double> features) {
  std::vector<std::uint8_t> votes;
  votes.reserve(model.trees.size());
  for (const TreeModel& tree : model.trees) votes.push_back(tree_predict(tree, features));
  return majority_vote(votes);
}

}  // namespace fedscreen
