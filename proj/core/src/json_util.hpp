#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "gaborface/errors.hpp"

namespace gaborface::detail {

using Json = nlohmann::json;

inline Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

inline const Json& require(const Json& obj, const char* field, std::string_view what) {
  if (!obj.is_object() || !obj.contains(field)) {
    throw FormatError(std::string(what) + ": missing field '" + field + "'");
  }
  return obj.at(field);
}

inline double require_number(const Json& obj, const char* field, std::string_view what) {
  const Json& v = require(obj, field, what);
  if (!v.is_number()) throw FormatError(std::string(what) + ": field '" + field + "' must be a number");
  return v.get<double>();
}

inline std::string require_string(const Json& obj, const char* field, std::string_view what) {
  const Json& v = require(obj, field, what);
  if (!v.is_string()) throw FormatError(std::string(what) + ": field '" + field + "' must be a string");
  return v.get<std::string>();
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace gaborface::detail
