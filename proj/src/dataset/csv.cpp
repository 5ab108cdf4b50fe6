#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "dataset/text_util.hpp"
#include "fedscreen/dataset.hpp"

namespace fedscreen {
namespace {

// RFC 4180 style record splitter: quoted fields may contain commas, doubled
// quotes and line breaks. Accepts LF and CRLF. Lines that are completely
// empty are skipped.
class CsvReader {
 public:
  explicit CsvReader(std::string_view raw) : raw_(raw) {
    if (raw_.substr(0, 3) == "\xEF\xBB\xBF") raw_.remove_prefix(3);
  }

  bool next(std::vector<std::string>& fields) {
    fields.clear();
    while (pos_ < raw_.size() && (raw_[pos_] == '\n' || raw_[pos_] == '\r')) {
      ++pos_;
    }
    if (pos_ >= raw_.size()) return false;

    std::string field;
    bool quoted = false;
    bool after_quote = false;
    while (pos_ < raw_.size()) {
      const char c = raw_[pos_++];
      if (quoted) {
        if (c == '"') {
          if (pos_ < raw_.size() && raw_[pos_] == '"') {
            field += '"';
            ++pos_;
          } else {
            quoted = false;
            after_quote = true;
          }
        } else {
          field += c;
        }
        continue;
      }
      if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
        after_quote = false;
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && pos_ < raw_.size() && raw_[pos_] == '\n') ++pos_;
        break;
      } else if (c == '"' && !after_quote && text::trim(field).empty()) {
        field.clear();
        quoted = true;
      } else {
        field += c;
      }
    }
    fields.push_back(std::move(field));
    return true;
  }

 private:
  std::string_view raw_;
  std::size_t pos_ = 0;
};

Cell parse_cell(std::string_view raw, const Column& column, std::size_t row) {
  const std::string_view value = text::trim(raw);
  if (text::is_missing_token(value)) return std::monostate{};

  switch (column.kind) {
    case ColumnKind::kBinaryResponse: {
      if (text::iequals(value, "yes")) return 1.0;
      if (text::iequals(value, "no")) return 0.0;
      const auto number = text::parse_double(value);
      if (!number || (*number != 0.0 && *number != 1.0)) {
        throw CellError(row, column.name,
                        "expected 0/1 or yes/no, got '" + std::string(value) + "'");
      }
      return *number;
    }
    case ColumnKind::kInteger: {
      const auto number = text::parse_double(value);
      if (!number || std::floor(*number) != *number) {
        throw CellError(row, column.name,
                        "expected an integer, got '" + std::string(value) + "'");
      }
      return *number;
    }
    case ColumnKind::kReal: {
      const auto number = text::parse_double(value);
      if (!number) {
        throw CellError(row, column.name,
                        "expected a number, got '" + std::string(value) + "'");
      }
      return *number;
    }
    case ColumnKind::kCategorical:
    case ColumnKind::kLabel:
      return std::string(value);
  }
  return std::monostate{};
}

std::string quote_if_needed(const std::string& cell) {
  const bool needs_quotes =
      cell.find_first_of(",\n\r") != std::string::npos ||
      (!cell.empty() && cell.front() == '"');
  if (!needs_quotes) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Dataset parse_csv(std::string_view raw, const Schema& schema, SourceId source) {
  CsvReader reader(raw);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw SchemaError("CSV has no header row");

  // file column -> schema column
  std::vector<std::size_t> target(fields.size());
  std::map<std::string, std::size_t> seen;
  for (std::size_t j = 0; j < fields.size(); ++j) {
    const std::string name(text::trim(fields[j]));
    if (!seen.emplace(name, j).second) {
      throw SchemaError("header repeats column '" + name + "'");
    }
    const auto idx = schema.find(name);
    if (!idx) throw SchemaError("header has unexpected column '" + name + "'");
    target[j] = *idx;
  }
  if (fields.size() != schema.size()) {
    std::string missing;
    for (const Column& c : schema.columns()) {
      if (!seen.count(c.name)) missing += (missing.empty() ? "" : ", ") + c.name;
    }
    throw SchemaError("header is missing columns: " + missing);
  }

  Dataset d{schema, source, {}};
  std::size_t row_number = 0;
  while (reader.next(fields)) {
    ++row_number;
    if (fields.size() != schema.size()) {
      throw CellError(row_number, "*",
                      "expected " + std::to_string(schema.size()) +
                          " fields, found " + std::to_string(fields.size()));
    }
    Row row;
    row.cells.resize(schema.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      row.cells[target[j]] = parse_cell(fields[j], schema.column(target[j]), row_number);
    }
    d.rows.push_back(std::move(row));
  }
  return d;
}

std::string write_csv(const Dataset& d) {
  std::string out;
  const auto& columns = d.schema.columns();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (j > 0) out += ',';
    out += quote_if_needed(columns[j].name);
  }
  out += '\n';
  for (const Row& row : d.rows) {
    for (std::size_t j = 0; j < row.cells.size(); ++j) {
      if (j > 0) out += ',';
      const Cell& cell = row.cells[j];
      if (const auto* v = std::get_if<double>(&cell)) {
        out += text::format_double(*v);
      } else if (const auto* s = std::get_if<std::string>(&cell)) {
        out += quote_if_needed(*s);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace fedscreen
