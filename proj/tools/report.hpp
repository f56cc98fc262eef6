#ifndef CHAINGEO_TOOLS_REPORT_HPP
#define CHAINGEO_TOOLS_REPORT_HPP

#include <ostream>
#include <string>

#include "json.hpp"

namespace chaingeo::cli {

using report = nlohmann::ordered_json;

namespace detail {

inline std::string scalar_text(const report& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "none";
  return v.dump();
}

inline bool all_scalars(const report& arr) {
  for (const auto& e : arr)
    if (e.is_structured()) return false;
  return true;
}

inline void render(std::ostream& out, const std::string& key, const report& v) {
  if (v.is_object()) {
    for (const auto& [k, sub] : v.items()) render(out, key.empty() ? k : key + "." + k, sub);
  } else if (v.is_array() && all_scalars(v)) {
    out << key << '=';
    bool first = true;
    for (const auto& e : v) {
      out << (first ? "" : ",") << scalar_text(e);
      first = false;
    }
    out << '\n';
  } else if (v.is_array()) {
    // Nested arrays become one line each; objects get an index.
    std::size_t i = 0;
    for (const auto& e : v) {
      if (e.is_array()) render(out, key, e);
      else render(out, key + "[" + std::to_string(i) + "]", e);
      ++i;
    }
  } else {
    out << key << '=' << scalar_text(v) << '\n';
  }
}

}  // namespace detail

/// key=value lines, or the same content as one JSON document.
inline void emit(std::ostream& out, const report& r, bool json) {
  if (json) out << r.dump(2) << '\n';
  else detail::render(out, "", r);
}

}  // namespace chaingeo::cli

#endif  // CHAINGEO_TOOLS_REPORT_HPP
