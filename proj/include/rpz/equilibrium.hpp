#pragma once

// The real-rooted equilibrium measure mu_R on (-inf, 0) with density
//   phi(x) = 1 / (pi (|x| + 1) sqrt|x|).
// Under |x| = t^2 the variable t is half-Cauchy, which gives the closed-form
// CDF and quantile. Quadrature routines work in the flipped coordinate
// y = -x >= 0 and flip back on output.

#include <cstdint>
#include <span>
#include <vector>

#include "rpz/quadrature.hpp"

namespace rpz::equilibrium {

/// phi(x) for x < 0, 0 for x > 0 and +0.0; -0.0 is read as the 0^- limit (+inf).
double phi_density(double x);

/// mu_R([x, 0)) = (2/pi) atan(sqrt(-x)) for x <= 0; 0 for x > 0. This is the
/// distribution function of |X|, the convention under which phi_quantile inverts it.
double phi_cdf(double x);

/// P(X <= x) = 1 - phi_cdf(x): the usual CDF on the real line.
double standard_cdf(double x);

/// x = -tan^2(pi q / 2); phi_cdf(phi_quantile(q)) = q. Throws DomainError unless 0 < q < 1.
double phi_quantile(double q);

/// mu_R((-inf, -R)) = (2/pi) atan(1/sqrt(R)).
double tail_mass(double R);

/// Quadrature of phi over (-R, 0) with t = sqrt|x| removing the singularity.
QuadResult density_integral(double R, double tol = 1e-12);

struct PotentialValue {
  double value;      // potential of the flipped measure at x >= 0
  double abs_error;  // quadrature error estimate (tail series error included)
};

/// (2/pi) integral_0^inf log|x - w^2| / (1 + w^2) dw with the w = sqrt(x)
/// singularity subtracted analytically and the tail beyond max(10, 10 sqrt x)
/// integrated by series. Throws AccuracyError when the error exceeds quad_tol.
PotentialValue flipped_potential(double x, double quad_tol = 1e-10);

struct ResidualValue {
  double potential;
  double residual;  // potential - log(1 + x)
  double abs_error;
};

ResidualValue equilibrium_potential_residual(double x, double quad_tol = 1e-10);

/// Density whose first-order condition is checked.
enum class Candidate {
  equilibrium,   // phi, flipped to [0, inf)
  uniform_unit,  // uniform on [0, 1]: negative control
};

struct VariationalReport {
  double gamma = 0.5;
  double C = 0.0;              // median of 2 gamma L(x) - log(x + 1) over x_grid
  double max_residual = 0.0;   // max |2 gamma L(x) - log(x + 1) - C| over x_grid
  double min_slack = 0.0;      // min of 2 gamma L(y) - log(y + 1) - C over y_grid
  double max_quad_error = 0.0;
  std::vector<double> x_grid, residuals;
  std::vector<double> y_grid, slacks;
};

VariationalReport variational_residual(double gamma, std::span<const double> x_grid,
                                       std::span<const double> y_grid, double quad_tol = 1e-10,
                                       Candidate candidate = Candidate::equilibrium);

/// n points log-spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

struct RateAtEquilibrium {
  double first_term;  // integral log(1 + |x|) dmu_R, expected 2 log 2
  double energy;      // Sigma(mu_R), expected 2 log 2
  double value;       // first_term - energy / 2, expected log 2
  double abs_error;
};

/// I_R by nested quadrature; Sigma uses the computed potential, not the identity.
RateAtEquilibrium rate_at_equilibrium(double quad_tol = 1e-9);

struct MonteCarloRate {
  double first_term, energy, value;
  double first_term_se, energy_se, value_se;  // standard errors
  std::uint64_t samples;
};

/// Pairwise Monte Carlo oracle: pairs (X, Y) of independent quantile samples.
MonteCarloRate monte_carlo_rate(std::uint64_t samples, std::uint64_t seed, int workers);

}  // namespace rpz::equilibrium
