#pragma once

#include <cstdio>
#include <string>

namespace aoi {

// Rates go out with 6 significant digits; other quantities with 9. Both the
// sweep and eval CSV paths use these so identical inputs print identically.
inline std::string format_sig(double x, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

inline std::string format_rate(double x) { return format_sig(x, 6); }
inline std::string format_value(double x) { return format_sig(x, 9); }

}  // namespace aoi
