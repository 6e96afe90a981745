#pragma once

#include <cstdio>
#include <string>

namespace cekm {

// Canonical number format for every CSV/report emitted by the library and CLI:
// 17 significant digits, '.' decimal separator, no locale dependence.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

}  // namespace cekm
