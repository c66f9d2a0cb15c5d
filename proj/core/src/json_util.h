#ifndef DSHAP_SRC_JSON_UTIL_H_
#define DSHAP_SRC_JSON_UTIL_H_

#include <algorithm>
#include <string>
#include <string_view>

#include "dshap/error.h"
#include "dshap/feature_space.h"
#include "json.hpp"

namespace dshap::detail {

using Json = nlohmann::ordered_json;

inline Json parse_json(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError(ErrorCode::kEmptyDocument, 0, "empty JSON document");
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Byte offset to line number.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n')) + 1;
    throw ParseError(ErrorCode::kParseError, line, e.what());
  }
}

// Type errors inside a well-formed document (a number where a name belongs,
// and so on) surface as ParseError.
template <class F>
auto with_json_errors(F&& body) {
  try {
    return body();
  } catch (const Json::exception& e) {
    throw ParseError(ErrorCode::kParseError, 0, std::string("malformed document: ") + e.what());
  }
}

inline Rational fraction_of(const Json& v, const std::string& where) {
  if (v.is_string()) return parse_fraction(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw Error(ErrorCode::kBadFraction, where + ": probabilities are written as \"p/q\" strings");
}

inline std::string value_text(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  throw ParseError(ErrorCode::kParseError, 0, where + ": expected a value name or integer");
}

inline void add_declared_features(FeatureSpace& space, const Json& features) {
  if (!features.is_array()) throw ParseError(ErrorCode::kParseError, 0, "\"features\" must be an array");
  for (const auto& f : features) {
    if (f.is_string()) {
      space.add_binary_feature(f.get<std::string>());
    } else if (f.is_object() && f.contains("name")) {
      std::vector<std::string> domain;
      if (f.contains("domain")) {
        for (const auto& v : f["domain"]) domain.push_back(value_text(v, "domain"));
      } else {
        domain = {"0", "1"};
      }
      space.add_feature(f["name"].get<std::string>(), std::move(domain));
    } else {
      throw ParseError(ErrorCode::kParseError, 0, "feature entries are names or {\"name\", \"domain\"} objects");
    }
  }
}

}  // namespace dshap::detail

#endif  // DSHAP_SRC_JSON_UTIL_H_
