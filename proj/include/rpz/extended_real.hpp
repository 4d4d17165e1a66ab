#pragma once

// Extended reals are plain doubles where +inf/-inf are legal sentinels and
// NaN is never a legal value. These helpers keep that contract explicit.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rpz::ext {

inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Throws std::logic_error on NaN. NaN anywhere in the pipeline is a bug.
inline double checked(double v, const char* where = "extended real") {
  if (std::isnan(v)) throw std::logic_error(std::string("NaN produced in ") + where);
  return v;
}

/// a + b with +inf + -inf rejected.
inline double add(double a, double b) {
  if (std::isinf(a) && std::isinf(b) && (a > 0) != (b > 0))
    throw std::logic_error("indeterminate +inf + -inf");
  return checked(a + b, "ext::add");
}

/// log|x| with log 0 = -inf.
inline double log_abs(double x) { return x == 0.0 ? kNegInf : std::log(std::fabs(x)); }

}  // namespace rpz::ext
