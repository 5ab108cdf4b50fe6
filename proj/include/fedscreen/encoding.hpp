#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fedscreen/canonical_json.hpp"
#include "fedscreen/dataset.hpp"

namespace fedscreen {

// Per categorical column, the sorted list of distinct category texts; a
// category's code is its index (code 0 = lexicographically smallest).
// Also records how each observed label text was mapped to {0,1}.
class EncodingMap {
 public:
  std::optional<std::int64_t> code(const std::string& column,
                                   const std::string& category) const;
  const std::string& decode(const std::string& column, std::int64_t code) const;

  const std::map<std::string, std::vector<std::string>>& categories() const {
    return categories_;
  }
  const std::map<std::string, int>& label_values() const { return label_values_; }

  Json to_json() const;
  static EncodingMap from_json(const Json& j);

  bool operator==(const EncodingMap&) const = default;

 private:
  friend EncodingMap build_encoding_map(std::span<const Dataset> parts);

  std::map<std::string, std::vector<std::string>> categories_;
  std::string label_column_;
  std::string positive_label_text_;
  std::map<std::string, int> label_values_;
};

// Vocabulary over every categorical cell of every part. Parts must share a
// schema.
EncodingMap build_encoding_map(std::span<const Dataset> parts);

// Replaces categorical text with its code and the label with 0/1. A category
// absent from the map is a CellError.
Dataset apply_encoding(const Dataset& d, const EncodingMap& map);

// build_encoding_map({d}) followed by apply_encoding.
std::pair<Dataset, EncodingMap> label_encode(const Dataset& d);

// Inverse of apply_encoding for categorical columns (labels stay numeric).
Dataset decode_categorical(const Dataset& encoded, const EncodingMap& map);

}  // namespace fedscreen
