#include "fedscreen/encoding.hpp"

#include <algorithm>
#include <set>

#include "dataset/text_util.hpp"

namespace fedscreen {

std::optional<std::int64_t> EncodingMap::code(const std::string& column,
                                              const std::string& category) const {
  const auto it = categories_.find(column);
  if (it == categories_.end()) return std::nullopt;
  const auto& values = it->second;
  const auto pos = std::lower_bound(values.begin(), values.end(), category);
  if (pos == values.end() || *pos != category) return std::nullopt;
  return static_cast<std::int64_t>(pos - values.begin());
}

const std::string& EncodingMap::decode(const std::string& column,
                                       std::int64_t code) const {
  const auto it = categories_.find(column);
  if (it == categories_.end()) {
    throw SchemaError("encoding map has no column '" + column + "'");
  }
  if (code < 0 || static_cast<std::size_t>(code) >= it->second.size()) {
    throw SchemaError("code " + std::to_string(code) + " out of range for '" +
                      column + "'");
  }
  return it->second[static_cast<std::size_t>(code)];
}

Json EncodingMap::to_json() const {
  Json j;
  j["categories"] = Json::object();
  for (const auto& [column, values] : categories_) j["categories"][column] = values;
  j["label"] = {{"column", label_column_},
                {"positive", positive_label_text_},
                {"values", label_values_}};
  return j;
}

EncodingMap EncodingMap::from_json(const Json& j) {
  EncodingMap map;
  try {
    for (const auto& [column, values] : j.at("categories").items()) {
      auto sorted = values.get<std::vector<std::string>>();
      if (!std::is_sorted(sorted.begin(), sorted.end()) ||
          std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw SchemaError("categories of '" + column + "' are not sorted and unique");
      }
      map.categories_[column] = std::move(sorted);
    }
    const Json& label = j.at("label");
    map.label_column_ = label.at("column").get<std::string>();
    map.positive_label_text_ = label.at("positive").get<std::string>();
    map.label_values_ = label.at("values").get<std::map<std::string, int>>();
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed encoding map: ") + e.what());
  }
  return map;
}

EncodingMap build_encoding_map(std::span<const Dataset> parts) {
  EncodingMap map;
  if (parts.empty()) return map;
  const Schema& schema = parts.front().schema;
  const std::size_t label_col = schema.label_index();
  map.label_column_ = schema.column(label_col).name;
  map.positive_label_text_ = schema.positive_label_text();

  for (std::size_t col = 0; col < schema.size(); ++col) {
    const Column& column = schema.column(col);
    if (column.kind != ColumnKind::kCategorical) continue;
    std::set<std::string> values;
    for (const Dataset& d : parts) {
      if (!(d.schema == schema)) throw SchemaError("datasets have different schemas");
      for (const Row& r : d.rows) {
        if (const auto* s = std::get_if<std::string>(&r.cells[col])) values.insert(*s);
      }
    }
    map.categories_[column.name] = {values.begin(), values.end()};
  }
  for (const Dataset& d : parts) {
    for (const Row& r : d.rows) {
      if (const auto* s = std::get_if<std::string>(&r.cells[label_col])) {
        map.label_values_[*s] = text::iequals(*s, schema.positive_label_text()) ? 1 : 0;
      }
    }
  }
  return map;
}

Dataset apply_encoding(const Dataset& d, const EncodingMap& map) {
  Dataset out = d;
  const Schema& schema = d.schema;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    Row& row = out.rows[i];
    for (std::size_t col = 0; col < schema.size(); ++col) {
      const Column& column = schema.column(col);
      const auto* s = std::get_if<std::string>(&row.cells[col]);
      if (s == nullptr) continue;  // missing or already numeric
      if (column.kind == ColumnKind::kCategorical) {
        const auto code = map.code(column.name, *s);
        if (!code) {
          throw CellError(i + 1, column.name, "category '" + *s + "' is not in the encoding map");
        }
        row.cells[col] = static_cast<double>(*code);
      } else if (column.kind == ColumnKind::kLabel) {
        row.cells[col] = text::iequals(*s, schema.positive_label_text()) ? 1.0 : 0.0;
      }
    }
  }
  return out;
}

std::pair<Dataset, EncodingMap> label_encode(const Dataset& d) {
  EncodingMap map = build_encoding_map(std::span<const Dataset>(&d, 1));
  Dataset encoded = apply_encoding(d, map);
  return {std::move(encoded), std::move(map)};
}

Dataset decode_categorical(const Dataset& encoded, const EncodingMap& map) {
  Dataset out = encoded;
  const Schema& schema = encoded.schema;
  for (Row& row : out.rows) {
    for (std::size_t col = 0; col < schema.size(); ++col) {
      const Column& column = schema.column(col);
      if (column.kind != ColumnKind::kCategorical) continue;
      if (const auto* v = std::get_if<double>(&row.cells[col])) {
        row.cells[col] = map.decode(column.name, static_cast<std::int64_t>(*v));
      }
    }
  }
  return out;
}

}  // namespace fedscreen
