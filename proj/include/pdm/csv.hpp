#ifndef PDM_CSV_HPP
#define PDM_CSV_HPP

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <string>
#include <string_view>

namespace pdm::csv {

/// Round-trippable decimal text: 17 significant digits, "nan"/"inf" spelled out.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string num(int v) { return std::to_string(v); }

/// Joins already formatted fields and terminates with LF.
inline std::string row(std::initializer_list<std::string_view> fields) {
  std::string out;
  bool first = true;
  for (auto f : fields) {
    if (!first) out += ',';
    out += f;
    first = false;
  }
  out += '\n';
  return out;
}

}  // namespace pdm::csv

#endif  // PDM_CSV_HPP
