#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "fedscreen/forest.hpp"
#include "fedscreen/model_params.hpp"
#include "fedscreen/tree.hpp"
#include "oracles/oracles.hpp"
#include "support/generators.hpp"

using namespace fedscreen;

namespace {

TrainConfig tree_config(int max_depth, int min_leaf) {
  TrainConfig cfg;
  cfg.kind = ClassifierKind::kDecisionTree;
  cfg.tree.max_depth = max_depth;
  cfg.tree.min_samples_leaf = min_leaf;
  return cfg;
}

// Walks both trees together over the training rows: every node must agree
// on being a leaf, its label, the split feature and how it partitions the
// rows that reach it.
::testing::AssertionResult same_tree(const TreeModel& tree, int node,
                                     const oracle::OracleTree& ref,
                                     const std::vector<std::vector<double>>& x,
                                     const std::vector<std::size_t>& rows) {
  const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
  if (n.is_leaf() != ref.leaf) return ::testing::AssertionFailure() << "leaf mismatch at node " << node;
  if (n.is_leaf()) {
    if (n.label != ref.label) return ::testing::AssertionFailure() << "label mismatch at node " << node;
    return ::testing::AssertionSuccess();
  }
  if (static_cast<std::size_t>(n.feature) != ref.feature) {
    return ::testing::AssertionFailure() << "feature mismatch at node " << node;
  }
  std::vector<std::size_t> left, right;
  for (std::size_t r : rows) {
    const bool lib_left = x[r][ref.feature] <= n.threshold;
    const bool ref_left = x[r][ref.feature] <= ref.cut;
    if (lib_left != ref_left) return ::testing::AssertionFailure() << "partition mismatch at node " << node;
    (lib_left ? left : right).push_back(r);
  }
  auto l = same_tree(tree, n.left, ref.kids[0], x, left);
  if (!l) return l;
  return same_tree(tree, n.right, ref.kids[1], x, right);
}

// Leaf counts reached by the training rows.
std::vector<ClassCounts> routed_counts(const TreeModel& tree, const LabeledMatrix& m) {
  std::vector<ClassCounts> out(tree.nodes.size(), ClassCounts{});
  for (std::size_t i = 0; i < m.rows(); ++i) ++out[tree_leaf(tree, m.row(i))][m.label(i)];
  return out;
}

// The open interval of feature values a node can see, from its ancestors.
struct Box {
  std::vector<double> lo, hi;  // lo < x <= hi
};

void check_intervals(const TreeModel& tree, int node, Box box) {
  const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
  if (n.is_leaf()) return;
  const auto f = static_cast<std::size_t>(n.feature);
  ASSERT_GT(n.threshold, box.lo[f]) << "split at node " << node << " cannot send rows right";
  ASSERT_LT(n.threshold, box.hi[f]) << "split at node " << node << " cannot send rows left";
  Box left = box, right = box;
  left.hi[f] = n.threshold;
  right.lo[f] = n.threshold;
  check_intervals(tree, n.left, left);
  check_intervals(tree, n.right, right);
}

}  // namespace

TEST(Gini, Examples) {
  EXPECT_DOUBLE_EQ(gini({5, 5}), 0.5);
  EXPECT_DOUBLE_EQ(gini({7, 0}), 0.0);
  EXPECT_DOUBLE_EQ(gini({3, 1}), 0.375);
  EXPECT_THROW(gini({0, 0}), DegenerateNodeError);
}

TEST(Tree, PureDataIsOneLeaf) {
  LabeledMatrix m(2);
  for (int i = 0; i < 6; ++i) m.add_row(std::vector<double>{double(i), double(-i)}, 1);
  const TreeModel t = tree_train(m, tree_config(8, 1));
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_EQ(t.nodes[0].label, 1);
  EXPECT_EQ(t.nodes[0].counts, (ClassCounts{0, 6}));
}

TEST(Tree, StumpSplitsAtTheMidpoint) {
  LabeledMatrix m(1);
  m.add_row(std::vector<double>{0.0}, 0);
  m.add_row(std::vector<double>{1.0}, 1);
  const TreeModel t = tree_train(m, tree_config(1, 1));
  ASSERT_EQ(t.nodes.size(), 3u);
  EXPECT_EQ(t.nodes[0].feature, 0);
  EXPECT_EQ(t.nodes[0].threshold, 0.5);
  EXPECT_EQ(tree_predict(t, std::vector<double>{0.5}), 0);
  EXPECT_EQ(tree_predict(t, std::vector<double>{0.6}), 1);
}

TEST(Tree, LeafTiesGoToPositive) {
  LabeledMatrix m(1);
  m.add_row(std::vector<double>{0.0}, 0);
  m.add_row(std::vector<double>{1.0}, 1);
  const TreeModel t = tree_train(m, tree_config(0, 1));
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_EQ(t.nodes[0].label, 1);
}

TEST(Tree, SplitTiesGoToLowestFeature) {
  LabeledMatrix m(2);
  m.add_row(std::vector<double>{0.0, 0.0}, 0);
  m.add_row(std::vector<double>{1.0, 1.0}, 1);
  const TreeModel t = tree_train(m, tree_config(1, 1));
  EXPECT_EQ(t.nodes[0].feature, 0);
}

TEST(Tree, MatchesExhaustiveOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 250; ++trial) {
    const std::size_t n = 2 + rng.uniform_below(40), d = 1 + rng.uniform_below(4);
    const LabeledMatrix m = trial % 2 ? testgen::random_grid_matrix(rng, n, d, 2 + rng.uniform_below(5))
                                      : testgen::random_matrix(rng, n, d);
    const int max_depth = static_cast<int>(rng.uniform_below(6));
    const int min_leaf = 1 + static_cast<int>(rng.uniform_below(3));
    const TreeModel t = tree_train(m, tree_config(max_depth, min_leaf));
    const auto x = testgen::rows_of(m);
    const auto y = testgen::labels_of(m);
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    const auto ref = oracle::grow_oracle_tree(x, y, rows, 0, max_depth, static_cast<std::size_t>(min_leaf));
    ASSERT_TRUE(same_tree(t, 0, ref, x, rows)) << "trial " << trial;
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(tree_predict(t, m.row(i)), oracle::oracle_predict(ref, x[i]));
  }
}

TEST(Tree, StructuralInvariants) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const LabeledMatrix m = testgen::random_grid_matrix(rng, 10 + rng.uniform_below(80), 3, 6);
    if (m.count_label(1) == 0) continue;
    const int max_depth = static_cast<int>(rng.uniform_below(7));
    const int min_leaf = 1 + static_cast<int>(rng.uniform_below(4));
    const TreeModel t = tree_train(m, tree_config(max_depth, min_leaf));
    const double inf = std::numeric_limits<double>::infinity();
    check_intervals(t, 0, Box{std::vector<double>(3, -inf), std::vector<double>(3, inf)});

    // Stored leaf counts are exactly the rows routed there, and sum to n.
    const auto routed = routed_counts(t, m);
    std::uint64_t total = 0;
    int depth_ok = 0;
    for (std::size_t k = 0; k < t.nodes.size(); ++k) {
      if (!t.nodes[k].is_leaf()) continue;
      ASSERT_EQ(t.nodes[k].counts, routed[k]);
      ASSERT_GE(routed[k][0] + routed[k][1], static_cast<std::uint64_t>(min_leaf));
      total += routed[k][0] + routed[k][1];
      ++depth_ok;
    }
    ASSERT_EQ(total, m.rows());
    ASSERT_LE(depth_ok, 1 << max_depth);
  }
}

TEST(Tree, FlippedLabelsComplementUntiedLeaves) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const LabeledMatrix m = testgen::random_matrix(rng, 5 + rng.uniform_below(40), 3);
    LabeledMatrix flipped(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) flipped.add_row(m.row(i), 1 - m.label(i));
    const TrainConfig cfg = tree_config(4, 1);
    const TreeModel a = tree_train(m, cfg);
    const TreeModel b = tree_train(flipped, cfg);
    ASSERT_EQ(a.nodes.size(), b.nodes.size());
    for (std::size_t k = 0; k < a.nodes.size(); ++k) {
      ASSERT_EQ(a.nodes[k].feature, b.nodes[k].feature);
      ASSERT_EQ(a.nodes[k].threshold, b.nodes[k].threshold);
      if (!a.nodes[k].is_leaf() || a.nodes[k].counts[0] == a.nodes[k].counts[1]) continue;
      ASSERT_EQ(b.nodes[k].label, 1 - a.nodes[k].label);
    }
  }
}

TEST(Tree, ErrorsAndShapes) {
  EXPECT_THROW(tree_train(LabeledMatrix(2), tree_config(3, 1)), TrainingError);
  LabeledMatrix m(1);
  m.add_row(std::vector<double>{0.0}, 0);
  EXPECT_THROW(tree_train(m, tree_config(3, 0)), ConfigError);
  const TreeModel t = tree_train(m, tree_config(3, 1));
  EXPECT_THROW(tree_predict(t, std::vector<double>{1.0, 2.0}), ShapeError);
}

// ---- forest ----------------------------------------------------------------

TEST(Forest, DegenerateForestIsTheTree) {
  Rng rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const LabeledMatrix m = testgen::random_matrix(rng, 20 + rng.uniform_below(40), 4);
    TrainConfig cfg = tree_config(5, 2);
    cfg.kind = ClassifierKind::kRandomForest;
    cfg.forest.n_trees = 1;
    cfg.forest.bootstrap = false;
    cfg.forest.features_per_split = 4;
    const ForestModel f = forest_train(m, cfg);
    ASSERT_EQ(f.trees.size(), 1u);
    EXPECT_EQ(f.trees[0], tree_train(m, cfg));
  }
}

TEST(Forest, PredictionIsPlainMajorityOfTrees) {
  Rng rng(25);
  for (int trial = 0; trial < 40; ++trial) {
    const LabeledMatrix m = testgen::random_matrix(rng, 40, 3);
    TrainConfig cfg = tree_config(3, 1);
    cfg.kind = ClassifierKind::kRandomForest;
    cfg.forest.n_trees = 1 + static_cast<int>(rng.uniform_below(7));
    cfg.seed = rng.next();
    const ForestModel f = forest_train(m, cfg);
    ASSERT_EQ(f.trees.size(), static_cast<std::size_t>(cfg.forest.n_trees));
    EXPECT_EQ(f.features_per_split, 2);  // ceil(sqrt(3))
    for (int probe = 0; probe < 20; ++probe) {
      const std::vector<double> x{testgen::gaussian(rng), testgen::gaussian(rng), testgen::gaussian(rng)};
      std::vector<std::uint8_t> votes;
      for (const TreeModel& t : f.trees) votes.push_back(tree_predict(t, x));
      ASSERT_EQ(forest_predict(f, x), oracle::plain_majority(votes));
    }
  }
}

TEST(Forest, DeterministicPerSeed) {
  Rng rng(26);
  const LabeledMatrix m = testgen::random_matrix(rng, 60, 5);
  TrainConfig cfg = tree_config(4, 1);
  cfg.kind = ClassifierKind::kRandomForest;
  cfg.forest.n_trees = 9;
  cfg.seed = 3;
  EXPECT_EQ(forest_train(m, cfg), forest_train(m, cfg));
  TrainConfig other = cfg;
  other.seed = 4;
  EXPECT_NE(forest_train(m, cfg), forest_train(m, other));
}

TEST(Forest, MajorityVote) {
  EXPECT_EQ(majority_vote(std::vector<std::uint8_t>{1, 0}), 1);
  EXPECT_EQ(majority_vote(std::vector<std::uint8_t>{0, 0, 1}), 0);
  EXPECT_EQ(majority_vote(std::vector<std::uint8_t>{1, 1, 0}), 1);
  EXPECT_EQ(majority_vote(std::vector<std::uint8_t>{}), 1);
}

// ---- parameters ------------------------------------------------------------

TEST(ModelParams, JsonRoundTripsEveryKind) {
  Rng rng(27);
  int seen[3] = {0, 0, 0};
  for (int trial = 0; trial < 300; ++trial) {
    const ModelParams p = testgen::random_params(rng, 1 + rng.uniform_below(6));
    ++seen[p.index()];
    const ModelParams back = model_params_from_json(Json::parse(serialize(p)));
    ASSERT_EQ(back, p);
    ASSERT_EQ(serialize(back), serialize(p));
  }
  for (int s : seen) EXPECT_GT(s, 0);
}

TEST(ModelParams, TrainedModelsRoundTrip) {
  Rng rng(28);
  const LabeledMatrix m = testgen::random_matrix(rng, 50, 3);
  for (auto kind : {ClassifierKind::kSvc, ClassifierKind::kDecisionTree, ClassifierKind::kRandomForest}) {
    TrainConfig cfg;
    cfg.kind = kind;
    cfg.svc.epochs = 5;
    cfg.forest.n_trees = 3;
    const ModelParams p = train_model(m, cfg);
    EXPECT_EQ(kind_of(p), kind);
    EXPECT_EQ(arity_of(p), 3u);
    EXPECT_EQ(model_params_from_json(to_json(p)), p);
  }
}

TEST(ModelParams, MalformedDocumentsAreRejected) {
  const auto reject = [](const char* text) {
    EXPECT_THROW(model_params_from_json(Json::parse(text)), ProtocolError) << text;
  };
  reject(R"({"kind":"knn"})");
  reject(R"({"kind":"svc","weights":[1.0],"bias":0.0,"c":1.0,"feature_means":[0.0],"feature_scales":[]})");
  reject(R"({"kind":"svc","weights":[1.0],"bias":0.0,"c":1.0,"feature_means":[0.0],"feature_scales":[0.0]})");
  reject(R"({"kind":"svc","weights":[1.0],"bias":0.0,"c":-1.0,"feature_means":[0.0],"feature_scales":[1.0]})");
  reject(R"({"kind":"svc","weights":["a"],"bias":0.0,"c":1.0,"feature_means":[0.0],"feature_scales":[1.0]})");
  reject(R"({"kind":"dt","arity":1,"max_depth":1,"nodes":[]})");
  reject(R"({"kind":"dt","arity":1,"max_depth":1,"nodes":[{"feature":0,"threshold":0.5,"left":0,"right":2},{"label":0,"counts":[1,0]},{"label":1,"counts":[0,1]}]})");
  reject(R"({"kind":"dt","arity":1,"max_depth":1,"nodes":[{"feature":3,"threshold":0.5,"left":1,"right":2},{"label":0,"counts":[1,0]},{"label":1,"counts":[0,1]}]})");
  reject(R"({"kind":"dt","arity":1,"max_depth":1,"nodes":[{"label":2,"counts":[1,0]}]})");
  reject(R"({"kind":"dt","arity":1,"max_depth":1,"nodes":[{"label":0,"counts":[1,0]},{"label":1,"counts":[0,1]}]})");
  reject(R"({"kind":"rf","features_per_split":1,"seed":0,"trees":[]})");
  reject(R"({"kind":"rf","features_per_split":2,"seed":0,"trees":[{"arity":1,"max_depth":0,"nodes":[{"label":0,"counts":[1,0]}]}]})");
}
