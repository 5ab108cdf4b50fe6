#pragma once

// Screening-questionnaire datasets: schema, ingestion from CSV, repair
// (duplicates, missing cells), Q-CHAT-10 scoring and conversion into the
// numeric matrices consumed by the classifiers.

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fedscreen/errors.hpp"
#include "fedscreen/matrix.hpp"

namespace fedscreen {

inline constexpr std::size_t kResponseCount = 10;

enum class ColumnKind { kBinaryResponse, kInteger, kReal, kCategorical, kLabel };

std::string_view to_string(ColumnKind kind);

struct Column {
  std::string name;
  ColumnKind kind;

  bool operator==(const Column&) const = default;
};

// Ordered column list. Construction enforces: unique names, exactly one
// label column, exactly ten binary-response columns (R1..R10 in column
// order).
class Schema {
 public:
  Schema(std::vector<Column> columns, std::string positive_label_text);

  // A1_Score..A10_Score, age, gender, ethnicity, contry_of_res,
  // screening_method, Class/ASD (positive "YES").
  static Schema screening();

  // Schema for files written after label encoding: categorical columns
  // become integer columns and the positive label text becomes "1".
  Schema encoded() const;

  const std::vector<Column>& columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return columns_.size(); }
  const Column& column(std::size_t i) const { return columns_.at(i); }
  const std::string& positive_label_text() const noexcept {
    return positive_label_text_;
  }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t label_index() const noexcept { return label_index_; }
  // Column indices of R1..R10.
  const std::vector<std::size_t>& response_indices() const noexcept {
    return response_indices_;
  }
  // Non-response, non-label columns in schema order.
  const std::vector<std::size_t>& extra_indices() const noexcept {
    return extra_indices_;
  }

  bool operator==(const Schema& other) const {
    return columns_ == other.columns_ &&
           positive_label_text_ == other.positive_label_text_;
  }

 private:
  std::vector<Column> columns_;
  std::string positive_label_text_;
  std::size_t label_index_ = 0;
  std::vector<std::size_t> response_indices_;
  std::vector<std::size_t> extra_indices_;
};

// A parsed cell: missing, numeric, or (categorical/label) text.
using Cell = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const Cell& cell) {
  return std::holds_alternative<std::monostate>(cell);
}

struct Row {
  std::vector<Cell> cells;

  bool operator==(const Row&) const = default;
};

enum class SourceId { kChildrenUci, kChildrenKaggle, kAdultsUci, kAdultsKaggle };

inline constexpr SourceId kAllSources[] = {
    SourceId::kChildrenUci, SourceId::kChildrenKaggle, SourceId::kAdultsUci,
    SourceId::kAdultsKaggle};

std::string_view to_string(SourceId id);
std::optional<SourceId> parse_source_id(std::string_view text);

struct Dataset {
  Schema schema;
  SourceId source;
  std::vector<Row> rows;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
  bool operator==(const Dataset&) const = default;
};

// Typed view of one fully encoded row.
struct ScreeningRecord {
  std::bitset<kResponseCount> responses;  // bit i holds R(i+1)
  std::vector<double> extra_features;
  std::uint8_t label = 0;
};

// Requires an encoded, fully populated row; throws CellError otherwise.
ScreeningRecord record_at(const Dataset& d, std::size_t row);

// Label of a row: numeric cells are taken as-is (must be 0/1), text cells
// are 1 iff they equal the positive label text (ASCII case-insensitive).
std::uint8_t label_of(const Dataset& d, std::size_t row);

// ---- CSV -------------------------------------------------------------------

// Header must name exactly the schema's columns, in any order. Empty cells
// and "?" are missing. Rows are returned in file order, cells in schema
// order.
Dataset parse_csv(std::string_view raw, const Schema& schema, SourceId source);

// Canonical CSV: header in schema order, LF line endings, numbers as the
// shortest round-trip decimal, missing cells empty, quoting only when a cell
// cannot be written bare.
std::string write_csv(const Dataset& d);

// ---- repair ----------------------------------------------------------------

// Keeps the first occurrence of each row; rows compare equal when every
// cell matches after whitespace trim and ASCII case-fold of text.
Dataset deduplicate(const Dataset& d);

// Deduplicates across a sequence of datasets sharing one schema: a row is
// dropped if it equals any earlier row in the same or an earlier dataset.
std::vector<Dataset> deduplicate(std::span<const Dataset> parts);

enum class MissingPolicy { kDropRow, kModeImpute };

std::string_view to_string(MissingPolicy policy);
std::optional<MissingPolicy> parse_missing_policy(std::string_view text);

// kDropRow removes rows with any missing cell. kModeImpute fills
// categorical and binary-response cells with the column mode and
// integer/real cells with the (lower) median; rows with a missing label are
// dropped rather than imputed.
Dataset handle_missing(const Dataset& d, MissingPolicy policy);

std::vector<std::size_t> missing_counts(const Dataset& d);

// ---- Q-CHAT-10 -------------------------------------------------------------

struct QchatScore {
  int score = 0;
  int flag = 0;

  bool operator==(const QchatScore&) const = default;
};

inline constexpr int kQchatFlagThreshold = 3;

// score = number of "yes" responses; flag = 1 iff score > 3.
QchatScore qchat_score(const std::bitset<kResponseCount>& responses);

// ---- features --------------------------------------------------------------

enum class FeatureMode { kResponsesOnly, kFull };

std::string_view to_string(FeatureMode mode);
std::optional<FeatureMode> parse_feature_mode(std::string_view text);

// R1..R10 followed (kFull) by the extra columns in schema order.
LabeledMatrix to_matrix(const Dataset& d, FeatureMode mode);

std::size_t feature_arity(const Schema& schema, FeatureMode mode);

}  // namespace fedscreen
