#include "fedscreen/tree.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>

#include "classifiers/tree_builder.hpp"

namespace fedscreen {
namespace {

__extension__ using Wide = unsigned __int128;

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  // Split quality sum_child (c0^2 + c1^2) / n_child as an exact fraction;
  // maximizing it minimizes the weighted child Gini impurity.
  Wide numerator = 0;
  Wide denominator = 1;
};

bool better_than(Wide num, Wide den, const SplitCandidate& best) {
  return num * best.denominator > best.numerator * den;
}

double split_point(double lo, double hi) {
  const double mid = std::midpoint(lo, hi);
  return mid < hi ? mid : lo;
}

class TreeBuilder {
 public:
  TreeBuilder(const LabeledMatrix& data, const TreeConfig& cfg,
              const detail::FeaturePicker& pick)
      : data_(data), cfg_(cfg), pick_(pick) {
    model_.max_depth = cfg.max_depth;
    model_.arity = data.cols();
  }

  TreeModel build(std::vector<std::size_t> sample) {
    grow(sample, 0);
    return std::move(model_);
  }

 private:
  int grow(std::vector<std::size_t>& sample, int depth) {
    ClassCounts counts{};
    for (std::size_t i : sample) ++counts[data_.label(i)];

    const int node = static_cast<int>(model_.nodes.size());
    model_.nodes.emplace_back();

    std::optional<SplitCandidate> split;
    const bool pure = counts[0] == 0 || counts[1] == 0;
    if (depth < cfg_.max_depth && !pure &&
        sample.size() >= 2 * static_cast<std::size_t>(cfg_.min_samples_leaf)) {
      split = best_split(sample);
    }
    if (!split) {
      TreeNode& leaf = model_.nodes[static_cast<std::size_t>(node)];
      leaf.counts = counts;
      leaf.label = counts[1] >= counts[0] ? 1 : 0;
      return node;
    }

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : sample) {
      (data_.row(i)[split->feature] <= split->threshold ? left : right).push_back(i);
    }
    sample.clear();
    sample.shrink_to_fit();

    const int left_child = grow(left, depth + 1);
    const int right_child = grow(right, depth + 1);
    TreeNode& inner = model_.nodes[static_cast<std::size_t>(node)];
    inner.feature = static_cast<int>(split->feature);
    inner.threshold = split->threshold;
    inner.left = left_child;
    inner.right = right_child;
    return node;
  }

  std::optional<SplitCandidate> best_split(const std::vector<std::size_t>& sample) {
    std::vector<std::size_t> features;
    if (pick_) {
      features = pick_(data_.cols());
    } else {
      features.resize(data_.cols());
      std::iota(features.begin(), features.end(), std::size_t{0});
    }

    const std::size_t n = sample.size();
    const auto min_leaf = static_cast<std::size_t>(cfg_.min_samples_leaf);
    ClassCounts total{};
    for (std::size_t i : sample) ++total[data_.label(i)];

    std::optional<SplitCandidate> best;
    std::vector<std::pair<double, std::uint8_t>> column(n);
    for (std::size_t f : features) {
      for (std::size_t k = 0; k < n; ++k) {
        column[k] = {data_.row(sample[k])[f], data_.label(sample[k])};
      }
      std::sort(column.begin(), column.end());

      ClassCounts left{};
      for (std::size_t k = 0; k + 1 < n; ++k) {
        ++left[column[k].second];
        if (!(column[k].first < column[k + 1].first)) continue;
        const std::size_t n_left = k + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;

        const Wide l0 = left[0], l1 = left[1];
        const Wide r0 = total[0] - left[0], r1 = total[1] - left[1];
        const Wide num = (l0 * l0 + l1 * l1) * n_right + (r0 * r0 + r1 * r1) * n_left;
        const Wide den = static_cast<Wide>(n_left) * n_right;
        if (!best || better_than(num, den, *best)) {
          best = SplitCandidate{f, split_point(column[k].first, column[k + 1].first), num, den};
        }
      }
    }
    return best;
  }

  const LabeledMatrix& data_;
  const TreeConfig& cfg_;
  const detail::FeaturePicker& pick_;
  TreeModel model_;
};

}  // namespace

namespace detail {

TreeModel grow_tree(const LabeledMatrix& data, std::vector<std::size_t> sample,
                    const TreeConfig& cfg, const FeaturePicker& pick_features) {
  if (sample.empty()) throw TrainingError("training set is empty");
  return TreeBuilder(data, cfg, pick_features).build(std::move(sample));
}

}  // namespace detail

double gini(const ClassCounts& counts) {
  const std::uint64_t total = counts[0] + counts[1];
  if (total == 0) throw DegenerateNodeError("gini of an empty node");
  const double p0 = static_cast<double>(counts[0]) / static_cast<double>(total);
  const double p1 = static_cast<double>(counts[1]) / static_cast<double>(total);
  return 1.0 - p0 * p0 - p1 * p1;
}

TreeModel tree_train(const LabeledMatrix& train, const TrainConfig& cfg) {
  if (train.empty()) throw TrainingError("training set is empty");
  cfg.validate(train.cols());
  std::vector<std::size_t> sample(train.rows());
  std::iota(sample.begin(), sample.end(), std::size_t{0});
  return detail::grow_tree(train, std::move(sample), cfg.tree, {});
}

std::size_t tree_leaf(const TreeModel& model, std::span<const double> features) {
  if (features.size() != model.arity) {
    throw ShapeError("tree expects " + std::to_string(model.arity) + " features, got " +
                     std::to_string(features.size()));
  }
  std::size_t node = 0;
  while (!model.nodes.at(node).is_leaf()) {
    const TreeNode& n = model.nodes[node];
    node = static_cast<std::size_t>(
        features[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return node;
}

std::uint8_t tree_predict(const TreeModel& model, std::span<const double> features) {
  return model.nodes[tree_leaf(model, features)].label;
}

}  // namespace fedscreen
