#include "fedscreen/canonical_json.hpp"

#include <charconv>
#include <cmath>
#include <string_view>

#include "fedscreen/errors.hpp"

namespace fedscreen {
namespace {

void append_double(std::string& out, double value) {
  if (!std::isfinite(value)) {
    throw NumericError("cannot serialize non-finite number");
  }
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  const std::string_view text(buffer, static_cast<std::size_t>(result.ptr - buffer));
  out += text;
  if (text.find_first_of(".e") == std::string_view::npos) out += ".0";
}

void append(std::string& out, const Json& value) {
  switch (value.type()) {
    case Json::value_t::object: {
      // nlohmann::json stores objects in a std::map, so iteration is sorted.
      out += '{';
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        append(out, item);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ',';
        first = false;
        append(out, item);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      append_double(out, value.get<double>());
      break;
    default:
      out += value.dump();
      break;
  }
}

}  // namespace

std::string canonical_dump(const Json& value) {
  std::string out;
  append(out, value);
  return out;
}

}  // namespace fedscreen
