#pragma once

#include <string>

#include <fmt/format.h>

namespace sketchks {

/// 17-significant-digit rendering used by every CSV/JSON writer.
inline std::string format_real(double v) { return fmt::format("{:.17g}", v); }

/// Probabilities below 1e-300 are written as 0.0 in experiment tables.
inline std::string format_probability(double p) {
  return p < 1e-300 ? std::string("0.0") : format_real(p);
}

}  // namespace sketchks
