#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace rpz {

/// Dense real polynomial in the monomial basis; coefficients()[j] multiplies z^j.
/// The leading coefficient is never zero.
class Polynomial {
 public:
  explicit Polynomial(std::vector<double> coefficients);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coefficients() const noexcept { return coeffs_; }
  double operator[](std::size_t j) const noexcept { return coeffs_[j]; }
  double leading() const noexcept { return coeffs_.back(); }

  std::complex<double> operator()(std::complex<double> z) const noexcept;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

/// Polynomial with arbitrary-precision rational coefficients. All arithmetic is exact.
class ExactPolynomial {
 public:
  ExactPolynomial() = default;
  explicit ExactPolynomial(std::vector<mpq_class> coefficients);

  /// Exact binary-to-rational lift of a floating polynomial.
  static ExactPolynomial lift(const Polynomial& p);
  static ExactPolynomial from_integers(std::span<const long> coefficients);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<mpq_class>& coefficients() const noexcept { return coeffs_; }
  const mpq_class& operator[](std::size_t j) const noexcept { return coeffs_[j]; }

  /// Nearest-double rounding of every coefficient.
  Polynomial to_double() const;

  friend ExactPolynomial operator*(const ExactPolynomial& a, const ExactPolynomial& b);
  friend bool operator==(const ExactPolynomial& a, const ExactPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  std::vector<mpq_class> coeffs_;
};

/// P_n(z) = sum_j xi_j z^j with xi_j i.i.d. Exponential(1).
/// Coefficient j of trial `trial` is draw j of CounterRng(seed, trial).
Polynomial sample_exponential_poly(int n, std::uint64_t seed, std::uint64_t trial = 0);

/// Horner evaluation.
std::complex<double> evaluate(const Polynomial& p, std::complex<double> z) noexcept;

/// Real monic polynomial prod (z - z_i). The input must be closed under conjugation
/// (checked by nearest-conjugate matching with the default pairing tolerance).
Polynomial monic_from_roots(std::span<const std::complex<double>> roots);

/// p^m by repeated squaring with exact convolution. m >= 1.
ExactPolynomial poly_power(const ExactPolynomial& p, int m);

/// True iff every coefficient is strictly positive.
bool all_coefficients_positive(const ExactPolynomial& p);

}  // namespace rpz
