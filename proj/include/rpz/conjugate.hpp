#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace rpz {

/// Roots split into conjugate pairs (upper-half-plane representatives) and reals.
struct ConjugateSplit {
  std::vector<std::complex<double>> pairs;  // Im > 0
  std::vector<double> reals;
};

/// Tolerance for pairing decisions, as a function of the root.
using PairingTolerance = std::function<double(std::complex<double>)>;

/// Splits a multiset into reals (|Im z| <= tol(z)) and conjugate pairs matched by
/// nearest conjugate. The pair representative is the midpoint of z and conj(w).
/// Throws SymmetryError when a non-real root is left unmatched or its nearest
/// conjugate is farther than 2 tol(z).
ConjugateSplit split_conjugates(std::span<const std::complex<double>> roots,
                                const PairingTolerance& tol);

/// Default pairing tolerance 1e-8 (1 + |z|).
double default_pairing_tolerance(std::complex<double> z);

}  // namespace rpz
