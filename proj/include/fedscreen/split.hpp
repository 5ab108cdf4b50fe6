#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedscreen/dataset.hpp"
#include "fedscreen/matrix.hpp"

namespace fedscreen {

// Number of rows of one class that go to the test side:
// round-half-up(count * test_fraction).
std::size_t stratum_test_count(std::size_t count, double test_fraction);

// in_test[i] for each label. Each class contributes
// stratum_test_count(class size) rows chosen by a seeded shuffle.
// Throws StratificationError unless both classes are present and the
// fraction lies in (0, 1).
std::vector<bool> stratified_partition(std::span<const std::uint8_t> labels,
                                       double test_fraction, std::uint64_t seed);

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

// Both sides keep the input's row order.
DatasetSplit stratified_split(const Dataset& d, double test_fraction,
                              std::uint64_t seed);

struct MatrixSplit {
  LabeledMatrix train;
  LabeledMatrix test;
};

MatrixSplit stratified_split(const LabeledMatrix& m, double test_fraction,
                             std::uint64_t seed);

struct SiloSplit {
  Dataset test;                // union test rows, silo order then row order
  std::vector<Dataset> train;  // per silo, the rows not drawn for test
};

// Stratified test draw over the union of silos; the remaining rows stay with
// their silo. Silos must share a schema; the test Dataset takes the first
// silo's source id.
SiloSplit split_silos(std::span<const Dataset> silos, double test_fraction,
                      std::uint64_t seed);

}  // namespace fedscreen
