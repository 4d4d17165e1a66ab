#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "rpz/conjugate.hpp"
#include "rpz/kernels.hpp"
#include "rpz/roots.hpp"
#include "rpz/verdict.hpp"

namespace rpz {

/// Uniform probability measure on a finite multiset of atoms.
///
/// A measure built with symmetric() is snapped to an exactly conjugate-closed
/// multiset and stored as [upper pairs, their conjugates, reals], so potentials
/// can be summed over conjugate pairs and are bitwise invariant under z -> conj z.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(std::vector<std::complex<double>> atoms);

  /// Throws SymmetryError when the atoms are not conjugate-closed within tol.
  static EmpiricalMeasure symmetric(std::span<const std::complex<double>> atoms,
                                    const PairingTolerance& tol = default_pairing_tolerance);
  static EmpiricalMeasure from_roots(const RootConfiguration& cfg);

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<std::complex<double>>& atoms() const noexcept { return atoms_; }
  kernels::PointsView view() const noexcept { return {re_, im_}; }

  bool is_symmetric() const noexcept { return symmetric_; }
  std::size_t pair_count() const noexcept { return pairs_; }
  kernels::PointsView upper_view() const noexcept;
  kernels::PointsView real_view() const noexcept;

  /// Marks the measure as a stand-in for a continuous one so log_energy accepts it.
  EmpiricalMeasure& set_continuous_proxy(bool on) noexcept {
    continuous_proxy_ = on;
    return *this;
  }
  bool continuous_proxy() const noexcept { return continuous_proxy_; }

 private:
  EmpiricalMeasure() = default;
  void fill_soa();

  std::vector<std::complex<double>> atoms_;
  std::vector<double> re_, im_;
  std::size_t pairs_ = 0;
  bool symmetric_ = false;
  bool continuous_proxy_ = false;
};

/// Probability measure with a piecewise-constant density on a cell grid.
///
///   interval: cells of equal length on [a, b] in R, density per unit length
///   circle:   circle |z| = R, cells of equal angle starting at theta = 0,
///             density per unit angle
///   polar:    annulus r0 <= |z| <= r1 (r0 = 0 is a disc), radial cells of equal
///             width, density per unit area (rotation invariant)
///
/// Potentials and energies are integrated exactly against the cell densities
/// (closed forms for log against constants, Fourier series on the circle).
class GridDensityMeasure {
 public:
  enum class Kind { interval, circle, polar };

  /// With normalize set the density is rescaled to unit mass (it must have positive
  /// mass); otherwise its mass must already be within 1e-8 of 1.
  static GridDensityMeasure interval(double a, double b, std::vector<double> density, bool normalize = true);
  static GridDensityMeasure circle(double radius, std::vector<double> density, bool normalize = true);
  static GridDensityMeasure polar(double r0, double r1, std::vector<double> density, bool normalize = true);

  static GridDensityMeasure uniform_interval(double a, double b, int cells = 64);
  static GridDensityMeasure uniform_circle(double radius = 1.0, int cells = 256);
  static GridDensityMeasure uniform_disc(double radius = 1.0, int cells = 64);

  Kind kind() const noexcept { return kind_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  int cells() const noexcept { return static_cast<int>(density_.size()); }
  std::span<const double> density() const noexcept { return density_; }
  double cell_mass(int i) const;
  double mass() const;
  std::string_view quadrature_rule() const noexcept;

  /// Cell boundaries (interval: x, circle: theta, polar: r).
  double edge(int i) const noexcept { return lo_edge_ + i * width_; }
  double width() const noexcept { return width_; }

  bool conjugate_symmetric() const noexcept;
  /// Smallest and largest |w| over the support.
  double min_modulus() const noexcept;
  double max_modulus() const noexcept;

  /// Circle only: c_m = integral of rho(theta) e^{-i m theta} d theta, m >= 0.
  std::complex<double> fourier(int m) const;
  int fourier_terms() const noexcept { return static_cast<int>(fourier_.size()); }

 private:
  GridDensityMeasure(Kind kind, double lo, double hi, std::vector<double> density, bool normalize);

  Kind kind_;
  double lo_, hi_;
  double lo_edge_, width_;
  std::vector<double> density_;
  std::vector<std::complex<double>> fourier_;
  std::vector<std::complex<double>> dft_;  // sum_c rho_c e^{-i r theta_c}, r < N
};

/// L(z) = integral log|z - w| dmu(w); -inf at an atom.
double log_potential(const EmpiricalMeasure& mu, std::complex<double> z);
double log_potential(const GridDensityMeasure& mu, std::complex<double> z);

/// C_mu = integral log+|w| dmu(w).
double log_plus_moment(const EmpiricalMeasure& mu);
double log_plus_moment(const GridDensityMeasure& mu);

/// L(z) - C_mu.
double normalized_potential(const EmpiricalMeasure& mu, std::complex<double> z);
double normalized_potential(const GridDensityMeasure& mu, std::complex<double> z);

/// Sigma(mu) = double integral log|z - w|. Throws DivergentEnergyError when the
/// value is below -1e6. Empirical measures are accepted only when flagged as a
/// continuous proxy, and then evaluate to the discrete energy.
double log_energy(const GridDensityMeasure& mu);
double log_energy(const EmpiricalMeasure& mu);

struct DiscreteEnergy {
  double value;    // -inf when duplicate
  bool duplicate;  // some atom appears twice
};

/// Sigma_a(mu) = (1/k^2) sum_{i != j} log|z_i - z_j|.
DiscreteEnergy discrete_log_energy(const EmpiricalMeasure& mu);

/// (1/(s t)) sum_i sum_j log|mu_i - nu_j|; -inf on a shared atom. Exactly symmetric.
double mutual_energy(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// f(z, w) = log|1 - z| + log|1 - w| - log|z - w|. z == w gives +inf.
double pair_kernel(std::complex<double> z, std::complex<double> w);

struct PairKernelParams {
  double M = 10.0;
  double eps = 0.1;
  PairKernelParams() = default;
  PairKernelParams(double M_, double eps_);  // throws DomainError unless both > 0
};

struct TruncatedKernel {
  double f;        // pair_kernel
  double f_M;      // min(f, M)
  double g_M;      // f - f_M
  double f_eps_M;  // [(log|1-z| v -1/eps) + (log|1-w| v -1/eps) - (log|z-w| v -M)] ^ M
};

TruncatedKernel truncated_pair_kernel(std::complex<double> z, std::complex<double> w,
                                      const PairKernelParams& params);

struct RateResult {
  double value;        // +inf when the verdict is outside
  double linear_term;  // integral log|1 - z| dmu
  double energy_term;  // Sigma or Sigma_a
  double error_bound;  // estimated absolute error of value
  Verdict verdict;
};

/// I(mu) = integral log|1-z| dmu - Sigma(mu) / 2 on class P, +inf outside.
/// Membership is decided by the caller (see class_p.hpp). Atomic measures use Sigma_a.
RateResult rate_function(const EmpiricalMeasure& mu, Verdict membership);
/// Throws AccuracyError when the achieved error bound exceeds tol.
RateResult rate_function(const GridDensityMeasure& mu, Verdict membership, double tol = 1e-8);

/// Bounded-Lipschitz surrogate: max over a fixed dictionary of 64 test functions
/// (each Lipschitz-1 and bounded) of |integral h dmu - integral h dnu|.
double measure_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);
inline constexpr int kDistanceDictionarySize = 64;
/// Dictionary function h_index(z), 0 <= index < 64.
double distance_test_function(int index, std::complex<double> z);

/// Symmetrized sampling: k/2 i.i.d. draws from the upper-half (and real)
/// restriction, shifted by +2i/k, plus their conjugates. Redraws up to 10 times
/// until the minimal separation reaches k^-2, else throws SeparationError.
EmpiricalMeasure discretize_symmetric(const GridDensityMeasure& mu, int k, std::uint64_t seed);

/// One draw from mu using uniforms u[0..2].
std::complex<double> sample_point(const GridDensityMeasure& mu, double u0, double u1, double u2);

/// Minimal pairwise distance between atoms (+inf for fewer than two atoms).
double min_separation(const EmpiricalMeasure& mu);

/// k points e^{i pi (2j+1)/k}: the k-th roots of unity rotated by pi/k.
EmpiricalMeasure rotated_roots_of_unity(int k);

/// Image of mu under z -> 1/z (atoms must be nonzero).
EmpiricalMeasure invert(const EmpiricalMeasure& mu);

/// {"type": "empirical", "atoms": [[re, im], ...]} or {"type": "grid", "grid": {...}}.
nlohmann::json to_json(const EmpiricalMeasure& mu);
nlohmann::json to_json(const GridDensityMeasure& mu);
EmpiricalMeasure empirical_from_json(const nlohmann::json& j);
GridDensityMeasure grid_from_json(const nlohmann::json& j);

}  // namespace rpz
