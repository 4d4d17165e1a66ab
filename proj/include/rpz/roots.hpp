#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rpz/polynomial.hpp"

namespace rpz {

/// Conjugate-symmetric root multiset of a real polynomial of degree n:
/// k upper-half-plane representatives (pairs) and n - 2k real roots.
///
/// The labeled ordering used by all_roots() is
///   z_1..z_k (pairs), z_{k+1}..z_{2k} (their conjugates), z_{2k+1}..z_n (reals),
/// and backward_errors follows the same order.
struct RootConfiguration {
  std::vector<std::complex<double>> pairs;
  std::vector<double> reals;
  std::vector<double> backward_errors;
  int degree = 0;

  int k() const noexcept { return static_cast<int>(pairs.size()); }
  std::vector<std::complex<double>> all_roots() const;
};

struct RootFinderOptions {
  double tol = 1e-12;          // relative backward-error bound every root must meet
  int max_sweeps = 200;        // Aberth sweep budget
  double pairing_rel = 1e-8;   // pairing tolerance is pairing_rel * (1 + |z|)
};

/// Normwise relative backward error |p(z)| / sum_j |c_j| |z|^j, with p(z)
/// evaluated in double-double arithmetic so the value is meaningful far
/// below double rounding level.
double backward_error(const Polynomial& p, std::complex<double> z);

/// Unclassified roots from Aberth-Ehrlich simultaneous iteration.
/// Throws ConvergenceError (with best iterate and residuals) on failure.
std::vector<std::complex<double>> aberth_roots(const Polynomial& p,
                                               const RootFinderOptions& opts = {});

/// Roots of p, certified to backward error <= tol and snapped into conjugate pairs
/// and reals.
RootConfiguration find_roots(const Polynomial& p, double tol = 1e-12);
RootConfiguration find_roots(const Polynomial& p, const RootFinderOptions& opts);

/// Reals are roots with |Im z| <= pairing_tol; the rest are matched by nearest
/// conjugate. backward_errors is left empty. Throws SymmetryError on asymmetry.
RootConfiguration classify_conjugates(std::span<const std::complex<double>> roots,
                                      double pairing_tol);

}  // namespace rpz
