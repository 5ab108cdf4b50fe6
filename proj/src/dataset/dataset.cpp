#include "fedscreen/dataset.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_set>

#include "dataset/text_util.hpp"

namespace fedscreen {

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kBinaryResponse:
      return "binary-response";
    case ColumnKind::kInteger:
      return "integer";
    case ColumnKind::kReal:
      return "real";
    case ColumnKind::kCategorical:
      return "categorical";
    case ColumnKind::kLabel:
      return "label";
  }
  return "unknown";
}

Schema::Schema(std::vector<Column> columns, std::string positive_label_text)
    : columns_(std::move(columns)),
      positive_label_text_(std::move(positive_label_text)) {
  std::set<std::string> names;
  std::size_t labels = 0;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const Column& c = columns_[i];
    if (c.name.empty()) throw SchemaError("column " + std::to_string(i) + " has no name");
    if (!names.insert(c.name).second) {
      throw SchemaError("duplicate column name '" + c.name + "'");
    }
    switch (c.kind) {
      case ColumnKind::kLabel:
        ++labels;
        label_index_ = i;
        break;
      case ColumnKind::kBinaryResponse:
        response_indices_.push_back(i);
        break;
      default:
        extra_indices_.push_back(i);
        break;
    }
  }
  if (labels != 1) {
    throw SchemaError("schema needs exactly one label column, found " +
                      std::to_string(labels));
  }
  if (response_indices_.size() != kResponseCount) {
    throw SchemaError("schema needs exactly 10 binary-response columns, found " +
                      std::to_string(response_indices_.size()));
  }
  if (positive_label_text_.empty()) throw SchemaError("positive label text is empty");
}

Schema Schema::screening() {
  std::vector<Column> columns;
  for (int i = 1; i <= 10; ++i) {
    columns.push_back({"A" + std::to_string(i) + "_Score", ColumnKind::kBinaryResponse});
  }
  columns.push_back({"age", ColumnKind::kInteger});
  columns.push_back({"gender", ColumnKind::kCategorical});
  columns.push_back({"ethnicity", ColumnKind::kCategorical});
  columns.push_back({"contry_of_res", ColumnKind::kCategorical});
  columns.push_back({"screening_method", ColumnKind::kCategorical});
  columns.push_back({"Class/ASD", ColumnKind::kLabel});
  return Schema(std::move(columns), "YES");
}

Schema Schema::encoded() const {
  std::vector<Column> columns = columns_;
  for (Column& c : columns) {
    if (c.kind == ColumnKind::kCategorical) c.kind = ColumnKind::kInteger;
  }
  return Schema(std::move(columns), "1");
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::string_view to_string(SourceId id) {
  switch (id) {
    case SourceId::kChildrenUci:
      return "children-uci";
    case SourceId::kChildrenKaggle:
      return "children-kaggle";
    case SourceId::kAdultsUci:
      return "adults-uci";
    case SourceId::kAdultsKaggle:
      return "adults-kaggle";
  }
  return "unknown";
}

std::optional<SourceId> parse_source_id(std::string_view text) {
  for (SourceId id : kAllSources) {
    if (to_string(id) == text) return id;
  }
  return std::nullopt;
}

std::uint8_t label_of(const Dataset& d, std::size_t row) {
  const Cell& cell = d.rows.at(row).cells.at(d.schema.label_index());
  const std::string& column = d.schema.column(d.schema.label_index()).name;
  if (const auto* number = std::get_if<double>(&cell)) {
    if (*number == 0.0) return 0;
    if (*number == 1.0) return 1;
    throw CellError(row + 1, column, "encoded label must be 0 or 1");
  }
  if (const auto* str = std::get_if<std::string>(&cell)) {
    return text::iequals(*str, d.schema.positive_label_text()) ? 1 : 0;
  }
  throw CellError(row + 1, column, "label is missing");
}

ScreeningRecord record_at(const Dataset& d, std::size_t row) {
  const Row& r = d.rows.at(row);
  const Schema& schema = d.schema;
  ScreeningRecord record;
  const auto& responses = schema.response_indices();
  for (std::size_t k = 0; k < responses.size(); ++k) {
    const Cell& cell = r.cells[responses[k]];
    const auto* v = std::get_if<double>(&cell);
    if (v == nullptr || (*v != 0.0 && *v != 1.0)) {
      throw CellError(row + 1, schema.column(responses[k]).name,
                      "response must be an encoded 0 or 1");
    }
    record.responses.set(k, *v == 1.0);
  }
  record.extra_features.reserve(schema.extra_indices().size());
  for (std::size_t col : schema.extra_indices()) {
    const auto* v = std::get_if<double>(&r.cells[col]);
    if (v == nullptr) {
      throw CellError(row + 1, schema.column(col).name,
                      is_missing(r.cells[col]) ? "cell is missing"
                                               : "cell is not encoded");
    }
    record.extra_features.push_back(*v);
  }
  record.label = label_of(d, row);
  return record;
}

// ---- repair ----------------------------------------------------------------

namespace {

std::string row_key(const Row& row) {
  std::string key;
  for (const Cell& cell : row.cells) {
    if (is_missing(cell)) {
      key += '\x01';
    } else if (const auto* v = std::get_if<double>(&cell)) {
      key += 'n';
      key += text::format_double(*v);
    } else {
      key += 's';
      key += text::ascii_lower(text::trim(std::get<std::string>(cell)));
    }
    key += '\x1f';
  }
  return key;
}

// Mode over non-missing cells; ties go to the smallest value.
std::optional<Cell> column_mode(const std::vector<Row>& rows, std::size_t col) {
  std::map<std::string, std::size_t> text_counts;
  std::map<double, std::size_t> number_counts;
  for (const Row& r : rows) {
    const Cell& c = r.cells[col];
    if (const auto* v = std::get_if<double>(&c)) ++number_counts[*v];
    if (const auto* s = std::get_if<std::string>(&c)) ++text_counts[*s];
  }
  std::optional<Cell> best;
  std::size_t best_count = 0;
  for (const auto& [value, count] : number_counts) {
    if (count > best_count) {
      best = Cell(value);
      best_count = count;
    }
  }
  for (const auto& [value, count] : text_counts) {
    if (count > best_count) {
      best = Cell(value);
      best_count = count;
    }
  }
  return best;
}

std::optional<Cell> column_lower_median(const std::vector<Row>& rows,
                                        std::size_t col) {
  std::vector<double> values;
  for (const Row& r : rows) {
    if (const auto* v = std::get_if<double>(&r.cells[col])) values.push_back(*v);
  }
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  return Cell(values[(values.size() - 1) / 2]);
}

}  // namespace

Dataset deduplicate(const Dataset& d) {
  auto parts = deduplicate(std::span<const Dataset>(&d, 1));
  return std::move(parts.front());
}

std::vector<Dataset> deduplicate(std::span<const Dataset> parts) {
  std::unordered_set<std::string> seen;
  std::vector<Dataset> out;
  out.reserve(parts.size());
  for (const Dataset& part : parts) {
    if (!(part.schema == parts.front().schema)) {
      throw SchemaError("cannot deduplicate datasets with different schemas");
    }
    Dataset kept{part.schema, part.source, {}};
    for (const Row& row : part.rows) {
      if (seen.insert(row_key(row)).second) kept.rows.push_back(row);
    }
    out.push_back(std::move(kept));
  }
  return out;
}

std::string_view to_string(MissingPolicy policy) {
  return policy == MissingPolicy::kDropRow ? "drop-row" : "mode-impute";
}

std::optional<MissingPolicy> parse_missing_policy(std::string_view text) {
  if (text == "drop-row") return MissingPolicy::kDropRow;
  if (text == "mode-impute") return MissingPolicy::kModeImpute;
  return std::nullopt;
}

std::vector<std::size_t> missing_counts(const Dataset& d) {
  std::vector<std::size_t> counts(d.schema.size(), 0);
  for (const Row& r : d.rows) {
    for (std::size_t c = 0; c < r.cells.size(); ++c) counts[c] += is_missing(r.cells[c]);
  }
  return counts;
}

Dataset handle_missing(const Dataset& d, MissingPolicy policy) {
  Dataset out{d.schema, d.source, {}};
  const std::size_t label_col = d.schema.label_index();
  for (const Row& r : d.rows) {
    const bool drop =
        policy == MissingPolicy::kDropRow
            ? std::any_of(r.cells.begin(), r.cells.end(), is_missing)
            : is_missing(r.cells[label_col]);
    if (!drop) out.rows.push_back(r);
  }
  if (policy == MissingPolicy::kDropRow) return out;

  const auto counts = missing_counts(out);
  for (std::size_t col = 0; col < counts.size(); ++col) {
    if (counts[col] == 0) continue;
    const Column& column = d.schema.column(col);
    const bool numeric =
        column.kind == ColumnKind::kInteger || column.kind == ColumnKind::kReal;
    const auto fill = numeric ? column_lower_median(out.rows, col)
                              : column_mode(out.rows, col);
    if (!fill) {
      throw ImputationError("column '" + column.name +
                            "' is entirely missing; nothing to impute from");
    }
    for (Row& r : out.rows) {
      if (is_missing(r.cells[col])) r.cells[col] = *fill;
    }
  }
  return out;
}

// ---- Q-CHAT-10 -------------------------------------------------------------

QchatScore qchat_score(const std::bitset<kResponseCount>& responses) {
  const int score = static_cast<int>(responses.count());
  return {score, score > kQchatFlagThreshold ? 1 : 0};
}

// ---- features --------------------------------------------------------------

std::string_view to_string(FeatureMode mode) {
  return mode == FeatureMode::kFull ? "full" : "responses-only";
}

std::optional<FeatureMode> parse_feature_mode(std::string_view text) {
  if (text == "full") return FeatureMode::kFull;
  if (text == "responses-only") return FeatureMode::kResponsesOnly;
  return std::nullopt;
}

std::size_t feature_arity(const Schema& schema, FeatureMode mode) {
  return kResponseCount +
         (mode == FeatureMode::kFull ? schema.extra_indices().size() : 0);
}

LabeledMatrix to_matrix(const Dataset& d, FeatureMode mode) {
  LabeledMatrix m(feature_arity(d.schema, mode));
  std::vector<double> features;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const ScreeningRecord record = record_at(d, i);
    features.clear();
    for (std::size_t k = 0; k < kResponseCount; ++k) {
      features.push_back(record.responses.test(k) ? 1.0 : 0.0);
    }
    if (mode == FeatureMode::kFull) {
      features.insert(features.end(), record.extra_features.begin(),
                      record.extra_features.end());
    }
    m.add_row(features, record.label);
  }
  return m;
}

}  // namespace fedscreen
