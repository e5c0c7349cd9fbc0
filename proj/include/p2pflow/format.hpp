#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace p2pflow {

// Fixed 6-significant-digit formatting so emitted tables are byte-stable.
inline std::string format_sig(double v, int digits = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace p2pflow
