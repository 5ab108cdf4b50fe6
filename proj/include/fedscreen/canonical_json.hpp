#pragma once

#include <string>

#include <json.hpp>

namespace fedscreen {

using Json = nlohmann::json;

// Serializes a JSON value deterministically: object keys in sorted order, no
// insignificant whitespace, doubles as the shortest decimal that round-trips
// (always carrying a '.' or exponent so they re-parse as floating point).
// Non-finite numbers raise NumericError.
std::string canonical_dump(const Json& value);

}  // namespace fedscreen
