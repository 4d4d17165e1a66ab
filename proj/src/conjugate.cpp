#include "rpz/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rpz/errors.hpp"

namespace rpz {

double default_pairing_tolerance(std::complex<double> z) { return 1e-8 * (1.0 + std::abs(z)); }

ConjugateSplit split_conjugates(std::span<const std::complex<double>> roots,
                                const PairingTolerance& tol) {
  ConjugateSplit out;
  std::vector<std::complex<double>> upper;
  std::vector<std::complex<double>> lower;
  for (const auto z : roots) {
    if (std::abs(z.imag()) <= tol(z)) {
      out.reals.push_back(z.real());
    } else if (z.imag() > 0) {
      upper.push_back(z);
    } else {
      lower.push_back(z);
    }
  }
  if (upper.size() != lower.size()) {
    std::ostringstream msg;
    msg << "conjugate asymmetry: " << upper.size() << " roots above the real axis, "
        << lower.size() << " below";
    throw SymmetryError(msg.str());
  }

  auto by_position = [](std::complex<double> a, std::complex<double> b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  };
  std::sort(upper.begin(), upper.end(), by_position);

  std::vector<bool> used(lower.size(), false);
  out.pairs.reserve(upper.size());
  for (const auto u : upper) {
    std::size_t best = lower.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(u - std::conj(lower[j]));
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == lower.size() || best_dist > 2.0 * tol(u)) {
      std::ostringstream msg;
      msg << "conjugate asymmetry: root " << u << " has nearest conjugate at distance "
          << best_dist;
      throw SymmetryError(msg.str());
    }
    used[best] = true;
    out.pairs.push_back(0.5 * (u + std::conj(lower[best])));
  }
  std::sort(out.reals.begin(), out.reals.end());
  return out;
}

}  // namespace rpz
