#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedscreen/errors.hpp"

namespace fedscreen {

// Row-major numeric feature matrix with one binary label per row. This is
// the only input type the classifiers see.
class LabeledMatrix {
 public:
  LabeledMatrix() = default;
  explicit LabeledMatrix(std::size_t cols) : cols_(cols) {}

  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) {
    return {values_.data() + i * cols_, cols_};
  }
  std::uint8_t label(std::size_t i) const { return labels_[i]; }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  std::span<const double> values() const noexcept { return values_; }

  void add_row(std::span<const double> features, std::uint8_t label) {
    if (features.size() != cols_) {
      throw ShapeError("row has " + std::to_string(features.size()) +
                       " features, matrix has " + std::to_string(cols_));
    }
    if (label > 1) throw ShapeError("label must be 0 or 1");
    values_.insert(values_.end(), features.begin(), features.end());
    labels_.push_back(label);
  }

  // Rows at the given indices, in that order (indices may repeat).
  LabeledMatrix select(std::span<const std::size_t> indices) const {
    LabeledMatrix out(cols_);
    out.values_.reserve(indices.size() * cols_);
    out.labels_.reserve(indices.size());
    for (std::size_t i : indices) out.add_row(row(i), labels_[i]);
    return out;
  }

  // Appends all rows of other (same column count).
  void append(const LabeledMatrix& other) {
    if (other.cols_ != cols_) throw ShapeError("column count mismatch");
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
    labels_.insert(labels_.end(), other.labels_.begin(), other.labels_.end());
  }

  std::size_t count_label(std::uint8_t label) const {
    std::size_t n = 0;
    for (auto l : labels_) n += (l == label);
    return n;
  }

  bool operator==(const LabeledMatrix&) const = default;

 private:
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> labels_;
};

}  // namespace fedscreen
