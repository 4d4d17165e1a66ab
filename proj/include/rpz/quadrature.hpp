#pragma once

#include <functional>
#include <span>

namespace rpz {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;  // QUADPACK-style estimate
  int evaluations = 0;
  bool converged = false;
};

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. Interior breakpoints (integrable
/// singularities, kinks) start as interval boundaries so they are never sampled.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {}, std::span<const double> breakpoints = {});

/// Integral over [a, inf) through the map x = a + (1 - t) / t.
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 const QuadOptions& opts = {});

}  // namespace rpz
