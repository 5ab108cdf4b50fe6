#pragma once

// Random inputs shared by the unit tests and the acceptance binary.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "fedscreen/federation.hpp"
#include "fedscreen/matrix.hpp"
#include "fedscreen/rng.hpp"

namespace testgen {

using fedscreen::LabeledMatrix;
using fedscreen::Rng;

inline double gaussian(Rng& rng) {
  // Box-Muller; only used to shape test data.
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Gaussian features; labels random but with both classes present.
inline LabeledMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  for (;;) {
    LabeledMatrix m(cols);
    std::vector<double> x(cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (double& v : x) v = gaussian(rng);
      m.add_row(x, static_cast<std::uint8_t>(rng.uniform_below(2)));
    }
    const std::size_t ones = m.count_label(1);
    if (ones > 0 && ones < rows) return m;
  }
}

// Small integer grid values so that ties and repeated values are common.
inline LabeledMatrix random_grid_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                        std::uint64_t levels) {
  LabeledMatrix m(cols);
  std::vector<double> x(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (double& v : x) v = static_cast<double>(rng.uniform_below(levels));
    m.add_row(x, static_cast<std::uint8_t>(rng.uniform_below(2)));
  }
  return m;
}

// A label that depends linearly on the features, plus a little noise.
inline LabeledMatrix linear_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                   double noise) {
  std::vector<double> w(cols);
  for (double& v : w) v = gaussian(rng);
  LabeledMatrix m(cols);
  std::vector<double> x(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      x[j] = 3.0 * gaussian(rng) + static_cast<double>(j);
      s += w[j] * (x[j] - static_cast<double>(j));
    }
    s += noise * gaussian(rng);
    m.add_row(x, s > 0 ? 1 : 0);
  }
  return m;
}

inline std::vector<std::vector<double>> rows_of(const LabeledMatrix& m) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
  return out;
}

inline std::vector<std::uint8_t> labels_of(const LabeledMatrix& m) {
  return {m.labels().begin(), m.labels().end()};
}

// Doubles over many magnitudes, signs and a few exact specials.
inline double awkward_double(Rng& rng) {
  switch (rng.uniform_below(6)) {
    case 0:
      return 0.0;
    case 1:
      return static_cast<double>(static_cast<std::int64_t>(rng.uniform_below(2001)) - 1000);
    case 2:
      return std::ldexp(rng.uniform01(), static_cast<int>(rng.uniform_below(600)) - 300);
    case 3:
      return -std::ldexp(rng.uniform01(), static_cast<int>(rng.uniform_below(600)) - 300);
    case 4:
      return 0.1 * static_cast<double>(rng.uniform_below(100));
    default:
      return gaussian(rng);
  }
}

inline double positive_double(Rng& rng) {
  return std::ldexp(0.5 + rng.uniform01(), static_cast<int>(rng.uniform_below(40)) - 20);
}

inline fedscreen::TreeModel random_tree(Rng& rng, std::size_t arity, int max_depth) {
  fedscreen::TreeModel tree;
  tree.arity = arity;
  tree.max_depth = max_depth;
  auto grow = [&](auto&& self, int depth) -> int {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (depth >= max_depth || rng.bernoulli(0.35)) {
      auto& leaf = tree.nodes[static_cast<std::size_t>(index)];
      leaf.label = static_cast<std::uint8_t>(rng.uniform_below(2));
      leaf.counts = {rng.uniform_below(50), rng.uniform_below(50) + 1};
      return index;
    }
    const int left = self(self, depth + 1);
    const int right = self(self, depth + 1);
    auto& inner = tree.nodes[static_cast<std::size_t>(index)];
    inner.feature = static_cast<int>(rng.uniform_below(arity));
    inner.threshold = awkward_double(rng);
    inner.left = left;
    inner.right = right;
    return index;
  };
  grow(grow, 0);
  return tree;
}

inline fedscreen::ModelParams random_params(Rng& rng, std::size_t arity) {
  switch (rng.uniform_below(3)) {
    case 0: {
      fedscreen::LinearSvcModel m;
      for (std::size_t j = 0; j < arity; ++j) {
        m.weights.push_back(awkward_double(rng));
        m.feature_means.push_back(awkward_double(rng));
        m.feature_scales.push_back(positive_double(rng));
      }
      m.bias = awkward_double(rng);
      m.regularization_c = positive_double(rng);
      return m;
    }
    case 1:
      return random_tree(rng, arity, static_cast<int>(rng.uniform_below(4)));
    default: {
      fedscreen::ForestModel f;
      const auto n = 1 + rng.uniform_below(4);
      for (std::uint64_t k = 0; k < n; ++k) f.trees.push_back(random_tree(rng, arity, 3));
      f.features_per_split = 1 + static_cast<int>(rng.uniform_below(arity));
      f.seed = rng.next();
      return f;
    }
  }
}

inline fedscreen::ClientUpdate random_update(Rng& rng) {
  fedscreen::ClientUpdate u;
  u.client_id = fedscreen::kAllSources[rng.uniform_below(4)];
  u.params = random_params(rng, 1 + rng.uniform_below(20));
  u.n_samples = rng.bernoulli(0.1) ? rng.next() : 1 + rng.uniform_below(5000);
  u.local_validation_accuracy = rng.bernoulli(0.2) ? static_cast<double>(rng.uniform_below(2))
                                                   : rng.uniform01();
  if (rng.bernoulli(0.5)) u.received_hinge_sum = std::abs(awkward_double(rng));
  return u;
}

// Fresh empty directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fedscreen-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testgen
