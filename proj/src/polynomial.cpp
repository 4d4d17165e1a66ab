#include "rpz/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "rpz/conjugate.hpp"
#include "rpz/errors.hpp"
#include "rpz/rng.hpp"

namespace rpz {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw DomainError("polynomial needs at least one coefficient");
  if (coeffs_.back() == 0.0) throw DomainError("leading coefficient is zero");
  for (const double c : coeffs_)
    if (!std::isfinite(c)) throw DomainError("non-finite polynomial coefficient");
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const noexcept {
  return evaluate(*this, z);
}

std::complex<double> evaluate(const Polynomial& p, std::complex<double> z) noexcept {
  const auto c = p.coefficients();
  std::complex<double> acc = c.back();
  for (std::size_t j = c.size() - 1; j-- > 0;) acc = acc * z + c[j];
  return acc;
}

Polynomial sample_exponential_poly(int n, std::uint64_t seed, std::uint64_t trial) {
  if (n < 0) throw DomainError("degree must be nonnegative");
  const CounterRng rng(seed, trial);
  std::vector<double> c(static_cast<std::size_t>(n) + 1);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = rng.exponential(j);
  return Polynomial(std::move(c));
}

Polynomial monic_from_roots(std::span<const std::complex<double>> roots) {
  const ConjugateSplit split = split_conjugates(roots, default_pairing_tolerance);

  // Multiply real factors: quadratics for pairs, linears for reals.
  std::vector<double> c{1.0};
  auto multiply = [&c](std::span<const double> factor) {
    std::vector<double> next(c.size() + factor.size() - 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < factor.size(); ++j) next[i + j] += c[i] * factor[j];
    c = std::move(next);
  };
  for (const auto z : split.pairs) {
    const double quad[3] = {std::norm(z), -2.0 * z.real(), 1.0};
    multiply(quad);
  }
  for (const double x : split.reals) {
    const double lin[2] = {-x, 1.0};
    multiply(lin);
  }
  return Polynomial(std::move(c));
}

ExactPolynomial::ExactPolynomial(std::vector<mpq_class> coefficients)
    : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw DomainError("polynomial needs at least one coefficient");
  for (auto& q : coeffs_) q.canonicalize();
}

ExactPolynomial ExactPolynomial::lift(const Polynomial& p) {
  std::vector<mpq_class> c;
  c.reserve(p.coefficients().size());
  // mpq_class(double) is exact: every finite double is a dyadic rational.
  for (const double v : p.coefficients()) c.emplace_back(v);
  return ExactPolynomial(std::move(c));
}

ExactPolynomial ExactPolynomial::from_integers(std::span<const long> coefficients) {
  std::vector<mpq_class> c;
  c.reserve(coefficients.size());
  for (const long v : coefficients) c.emplace_back(v);
  return ExactPolynomial(std::move(c));
}

Polynomial ExactPolynomial::to_double() const {
  std::vector<double> c;
  c.reserve(coeffs_.size());
  for (const auto& q : coeffs_) c.push_back(q.get_d());
  return Polynomial(std::move(c));
}

ExactPolynomial operator*(const ExactPolynomial& a, const ExactPolynomial& b) {
  std::vector<mpq_class> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  mpq_class term;
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (sgn(a.coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      term = a.coeffs_[i] * b.coeffs_[j];
      out[i + j] += term;
    }
  }
  ExactPolynomial r;
  r.coeffs_ = std::move(out);
  return r;
}

ExactPolynomial poly_power(const ExactPolynomial& p, int m) {
  if (m < 1) throw DomainError("poly_power needs m >= 1");
  ExactPolynomial result;
  bool have_result = false;
  ExactPolynomial base = p;
  for (unsigned e = static_cast<unsigned>(m);;) {
    if (e & 1u) {
      result = have_result ? result * base : base;
      have_result = true;
    }
    e >>= 1;
    if (e == 0) break;
    base = base * base;
  }
  return result;
}

bool all_coefficients_positive(const ExactPolynomial& p) {
  return std::all_of(p.coefficients().begin(), p.coefficients().end(),
                     [](const mpq_class& q) { return sgn(q) > 0; });
}

}  // namespace rpz
