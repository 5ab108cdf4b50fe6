#include "fedscreen/model_params.hpp"

#include <type_traits>

#include "fedscreen/errors.hpp"

namespace fedscreen {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

Json tree_to_json(const TreeModel& tree) {
  Json nodes = Json::array();
  for (const TreeNode& n : tree.nodes) {
    if (n.is_leaf()) {
      nodes.push_back({{"label", n.label}, {"counts", {n.counts[0], n.counts[1]}}});
    } else {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right}});
    }
  }
  return {{"arity", tree.arity}, {"max_depth", tree.max_depth}, {"nodes", nodes}};
}

// Preorder layout: every child index is greater than its parent's and every
// non-root node has exactly one parent, so the nodes form one rooted tree.
void check_tree_shape(const TreeModel& tree) {
  if (tree.nodes.empty()) throw ProtocolError(0, "tree has no nodes");
  std::vector<int> parents(tree.nodes.size(), 0);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const TreeNode& n = tree.nodes[i];
    if (n.is_leaf()) {
      if (n.label > 1) throw ProtocolError(0, "leaf label must be 0 or 1");
      continue;
    }
    if (static_cast<std::size_t>(n.feature) >= tree.arity) {
      throw ProtocolError(0, "split feature out of range");
    }
    for (int child : {n.left, n.right}) {
      if (child <= static_cast<int>(i) || static_cast<std::size_t>(child) >= tree.nodes.size()) {
        throw ProtocolError(0, "child index out of order");
      }
      ++parents[static_cast<std::size_t>(child)];
    }
  }
  for (std::size_t i = 1; i < parents.size(); ++i) {
    if (parents[i] != 1) throw ProtocolError(0, "node " + std::to_string(i) + " is not in the tree");
  }
}

TreeModel tree_from_json(const Json& j) {
  TreeModel tree;
  tree.arity = j.at("arity").get<std::size_t>();
  tree.max_depth = j.at("max_depth").get<int>();
  for (const Json& node : j.at("nodes")) {
    TreeNode n;
    if (node.contains("label")) {
      n.label = node.at("label").get<std::uint8_t>();
      const auto counts = node.at("counts").get<std::vector<std::uint64_t>>();
      if (counts.size() != 2) throw ProtocolError(0, "leaf counts must have two entries");
      n.counts = {counts[0], counts[1]};
    } else {
      n.feature = node.at("feature").get<int>();
      n.threshold = node.at("threshold").get<double>();
      n.left = node.at("left").get<int>();
      n.right = node.at("right").get<int>();
      if (n.feature < 0) throw ProtocolError(0, "split feature must be non-negative");
    }
    tree.nodes.push_back(n);
  }
  check_tree_shape(tree);
  return tree;
}

}  // namespace

ClassifierKind kind_of(const ModelParams& params) {
  return std::visit(Overloaded{
                        [](const LinearSvcModel&) { return ClassifierKind::kSvc; },
                        [](const TreeModel&) { return ClassifierKind::kDecisionTree; },
                        [](const ForestModel&) { return ClassifierKind::kRandomForest; },
                    },
                    params);
}

std::size_t arity_of(const ModelParams& params) {
  return std::visit(Overloaded{
                        [](const LinearSvcModel& m) { return m.arity(); },
                        [](const TreeModel& m) { return m.arity; },
                        [](const ForestModel& m) {
                          return m.trees.empty() ? std::size_t{0} : m.trees.front().arity;
                        },
                    },
                    params);
}

std::uint8_t predict(const ModelParams& params, std::span<const double> features) {
  return std::visit(Overloaded{
                        [&](const LinearSvcModel& m) { return svc_predict(m, features); },
                        [&](const TreeModel& m) { return tree_predict(m, features); },
                        [&](const ForestModel& m) { return forest_predict(m, features); },
                    },
                    params);
}

ModelParams train_model(const LabeledMatrix& train, const TrainConfig& cfg,
                        const std::optional<Standardization>& standardization) {
  switch (cfg.kind) {
    case ClassifierKind::kSvc:
      return standardization ? svc_train(train, cfg, *standardization) : svc_train(train, cfg);
    case ClassifierKind::kDecisionTree:
      return tree_train(train, cfg);
    case ClassifierKind::kRandomForest:
      return forest_train(train, cfg);
  }
  throw ConfigError("unknown classifier kind");
}

Json to_json(const ModelParams& params) {
  return std::visit(
      Overloaded{
          [](const LinearSvcModel& m) -> Json {
            return {{"kind", "svc"},
                    {"weights", m.weights},
                    {"bias", m.bias},
                    {"c", m.regularization_c},
                    {"feature_means", m.feature_means},
                    {"feature_scales", m.feature_scales}};
          },
          [](const TreeModel& m) -> Json {
            Json j = tree_to_json(m);
            j["kind"] = "dt";
            return j;
          },
          [](const ForestModel& m) -> Json {
            Json trees = Json::array();
            for (const TreeModel& t : m.trees) trees.push_back(tree_to_json(t));
            return {{"kind", "rf"},
                    {"features_per_split", m.features_per_split},
                    {"seed", m.seed},
                    {"trees", trees}};
          },
      },
      params);
}

ModelParams model_params_from_json(const Json& j) {
  try {
    const auto kind = parse_classifier_kind(j.at("kind").get<std::string>());
    if (!kind) throw ProtocolError(0, "unknown model kind");
    switch (*kind) {
      case ClassifierKind::kSvc: {
        LinearSvcModel m;
        m.weights = j.at("weights").get<std::vector<double>>();
        m.bias = j.at("bias").get<double>();
        m.regularization_c = j.at("c").get<double>();
        m.feature_means = j.at("feature_means").get<std::vector<double>>();
        m.feature_scales = j.at("feature_scales").get<std::vector<double>>();
        if (m.feature_means.size() != m.weights.size() ||
            m.feature_scales.size() != m.weights.size()) {
          throw ProtocolError(0, "svc vectors differ in length");
        }
        for (double s : m.feature_scales) {
          if (!(s > 0.0)) throw ProtocolError(0, "feature scales must be positive");
        }
        if (!(m.regularization_c > 0.0)) throw ProtocolError(0, "svc C must be positive");
        return m;
      }
      case ClassifierKind::kDecisionTree:
        return tree_from_json(j);
      case ClassifierKind::kRandomForest: {
        ForestModel m;
        m.features_per_split = j.at("features_per_split").get<int>();
        m.seed = j.at("seed").get<std::uint64_t>();
        for (const Json& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
        if (m.trees.empty()) throw ProtocolError(0, "forest has no trees");
        if (m.features_per_split < 1 ||
            static_cast<std::size_t>(m.features_per_split) > m.trees.front().arity) {
          throw ProtocolError(0, "features_per_split out of range");
        }
        return m;
      }
    }
  } catch (const Json::exception& e) {
    throw ProtocolError(0, std::string("malformed model parameters: ") + e.what());
  }
  throw ProtocolError(0, "unknown model kind");
}

std::string serialize(const ModelParams& params) { return canonical_dump(to_json(params)); }

}  // namespace fedscreen
