#pragma once

#include <string_view>

namespace rpz {

/// Outcome of a numerical class-P membership test. "Inside" is a grid
/// certificate, not a proof.
enum class Verdict { verified_inside, verified_outside, inconclusive };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::verified_inside:
      return "verified-inside";
    case Verdict::verified_outside:
      return "verified-outside";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace rpz
