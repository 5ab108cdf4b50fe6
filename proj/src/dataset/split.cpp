#include "fedscreen/split.hpp"

#include <cmath>

#include "fedscreen/rng.hpp"

namespace fedscreen {

std::size_t stratum_test_count(std::size_t count, double test_fraction) {
  return static_cast<std::size_t>(
      std::floor(static_cast<double>(count) * test_fraction + 0.5));
}

std::vector<bool> stratified_partition(std::span<const std::uint8_t> labels,
                                       double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw StratificationError("test fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1) throw StratificationError("labels must be 0 or 1");
    by_class[labels[i]].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    throw StratificationError("stratified split needs both classes; found only class " +
                              std::to_string(by_class[0].empty() ? 1 : 0));
  }

  std::vector<bool> in_test(labels.size(), false);
  for (int cls = 0; cls < 2; ++cls) {
    auto& members = by_class[cls];
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
    rng.shuffle(std::span<std::size_t>(members));
    const std::size_t k = stratum_test_count(members.size(), test_fraction);
    for (std::size_t i = 0; i < k; ++i) in_test[members[i]] = true;
  }
  return in_test;
}

DatasetSplit stratified_split(const Dataset& d, double test_fraction,
                              std::uint64_t seed) {
  std::vector<std::uint8_t> labels(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) labels[i] = label_of(d, i);
  const auto in_test = stratified_partition(labels, test_fraction, seed);

  DatasetSplit split{{d.schema, d.source, {}}, {d.schema, d.source, {}}};
  for (std::size_t i = 0; i < d.size(); ++i) {
    (in_test[i] ? split.test : split.train).rows.push_back(d.rows[i]);
  }
  return split;
}

MatrixSplit stratified_split(const LabeledMatrix& m, double test_fraction,
                             std::uint64_t seed) {
  const auto in_test = stratified_partition(m.labels(), test_fraction, seed);
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    (in_test[i] ? test_idx : train_idx).push_back(i);
  }
  return {m.select(train_idx), m.select(test_idx)};
}

SiloSplit split_silos(std::span<const Dataset> silos, double test_fraction,
                      std::uint64_t seed) {
  if (silos.empty()) throw StratificationError("no silos to split");
  const Schema& schema = silos.front().schema;
  std::vector<std::uint8_t> labels;
  for (const Dataset& silo : silos) {
    if (!(silo.schema == schema)) throw SchemaError("silos have different schemas");
    for (std::size_t i = 0; i < silo.size(); ++i) labels.push_back(label_of(silo, i));
  }
  const auto in_test = stratified_partition(labels, test_fraction, seed);

  SiloSplit split{{schema, silos.front().source, {}}, {}};
  std::size_t offset = 0;
  for (const Dataset& silo : silos) {
    Dataset train{schema, silo.source, {}};
    for (std::size_t i = 0; i < silo.size(); ++i) {
      (in_test[offset + i] ? split.test : train).rows.push_back(silo.rows[i]);
    }
    offset += silo.size();
    split.train.push_back(std::move(train));
  }
  return split;
}

}  // namespace fedscreen
