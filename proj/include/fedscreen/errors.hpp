#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fedscreen {

// Base class for every error raised by the library. Callers that only need
// a diagnostic can catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- dataset ---------------------------------------------------------------

class SchemaError : public Error {
 public:
  using Error::Error;
};

// A single cell could not be interpreted. Row is 1-based over data rows
// (the header is row 0).
class CellError : public Error {
 public:
  CellError(std::size_t row, std::string column, const std::string& detail)
      : Error("row " + std::to_string(row) + ", column '" + column +
              "': " + detail),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

class ImputationError : public Error {
 public:
  using Error::Error;
};

class StratificationError : public Error {
 public:
  using Error::Error;
};

// ---- classifiers -----------------------------------------------------------

class TrainingError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DegenerateNodeError : public Error {
 public:
  using Error::Error;
};

// ---- federation ------------------------------------------------------------

class FederationSchemaError : public Error {
 public:
  using Error::Error;
};

class EmptyRoundError : public Error {
 public:
  using Error::Error;
};

// A client failed during a round. Wraps the original diagnostic and names the
// client so that the coordinator can report which silo aborted the round.
class ClientError : public Error {
 public:
  ClientError(std::string client_id, const std::string& detail)
      : Error("client " + client_id + ": " + detail),
        client_id_(std::move(client_id)) {}

  const std::string& client_id() const noexcept { return client_id_; }

 private:
  std::string client_id_;
};

class ProtocolError : public Error {
 public:
  ProtocolError(std::size_t offset, const std::string& detail)
      : Error("protocol error at byte " + std::to_string(offset) + ": " +
              detail),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// ---- evaluation / configuration --------------------------------------------

class EmptyEvalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedscreen
