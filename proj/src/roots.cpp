#include "rpz/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rpz/conjugate.hpp"
#include "rpz/errors.hpp"

namespace rpz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// --- double-double arithmetic ------------------------------------------------

struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

inline DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD operator+(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD a, DD b) {
  const double q1 = a.hi / b.hi;
  const DD r1 = a - b * DD{q1, 0.0};
  const double q2 = r1.hi / b.hi;
  const DD r2 = r1 - b * DD{q2, 0.0};
  const double q3 = r2.hi / b.hi;
  return DD{q1, 0.0} + DD{q2, 0.0} + DD{q3, 0.0};
}

struct DDComplex {
  DD re;
  DD im;
};

inline DDComplex mul(DDComplex a, DDComplex b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// |p(z)| and sum |c_j||z|^j, both scaled by |z|^-n when |z| > 1 so that large
// roots never overflow. The ratio is the normwise backward error.
struct ScaledResidual {
  double value;
  double scale;
};

ScaledResidual residual_dd(std::span<const double> c, std::complex<double> z) {
  const std::size_t n = c.size() - 1;
  const bool reversed = std::abs(z) > 1.0;
  DDComplex x{{z.real(), 0.0}, {z.imag(), 0.0}};
  if (reversed) {
    // w = conj(z) / |z|^2 in double-double.
    const DD norm2 = two_prod(z.real(), z.real()) + two_prod(z.imag(), z.imag());
    x = {DD{z.real(), 0.0} / norm2, DD{-z.imag(), 0.0} / norm2};
  }
  const double xmag = std::hypot(x.re.hi, x.im.hi);
  auto coef = [&](std::size_t j) { return reversed ? c[n - j] : c[j]; };

  DDComplex acc{{coef(n), 0.0}, {0.0, 0.0}};
  double scale = std::fabs(coef(n));
  for (std::size_t j = n; j-- > 0;) {
    acc = mul(acc, x);
    acc.re = acc.re + DD{coef(j), 0.0};
    scale = scale * xmag + std::fabs(coef(j));
  }
  const double re = acc.re.hi + acc.re.lo;
  const double im = acc.im.hi + acc.im.lo;
  return {std::hypot(re, im), scale};
}

// Newton ratio p(z)/p'(z) in double, plus the Horner rounding-noise level of
// the computed p(z). Uses the reversed polynomial for |z| > 1.
struct NewtonStep {
  std::complex<double> ratio;
  bool at_noise_level;
};

NewtonStep newton_ratio(std::span<const double> c, std::complex<double> z) {
  const std::size_t n = c.size() - 1;
  const double noise_factor = 4.0 * static_cast<double>(n + 1) * kEps;
  if (std::abs(z) <= 1.0) {
    std::complex<double> p = c[n];
    std::complex<double> dp = 0.0;
    double scale = std::fabs(c[n]);
    const double r = std::abs(z);
    for (std::size_t j = n; j-- > 0;) {
      dp = dp * z + p;
      p = p * z + c[j];
      scale = scale * r + std::fabs(c[j]);
    }
    return {p / dp, std::abs(p) <= noise_factor * scale};
  }
  const std::complex<double> w = 1.0 / z;
  std::complex<double> q = c[0];
  std::complex<double> dq = 0.0;
  double scale = std::fabs(c[0]);
  const double r = std::abs(w);
  for (std::size_t j = 1; j <= n; ++j) {
    dq = dq * w + q;
    q = q * w + c[j];
    scale = scale * r + std::fabs(c[j]);
  }
  // p(z)/p'(z) = z / (n - w q'(w)/q(w)), with q(w) = w^n p(1/w).
  const std::complex<double> ratio = z / (static_cast<double>(n) - w * dq / q);
  return {ratio, std::abs(q) <= noise_factor * scale};
}

double fujiwara_bound(std::span<const double> c) {
  const std::size_t n = c.size() - 1;
  const double lead = std::fabs(c[n]);
  double best = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    double ratio = std::fabs(c[n - k]) / lead;
    if (k == n) ratio *= 0.5;
    best = std::max(best, std::pow(ratio, 1.0 / static_cast<double>(k)));
  }
  return 2.0 * best;
}

// Initial guesses on concentric circles whose radii come from the upper convex
// hull of (j, log|c_j|), capped at 0.8 times the Fujiwara bound.
std::vector<std::complex<double>> initial_guesses(std::span<const double> c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<int> hull;
  for (int j = 0; j <= n; ++j) {
    if (c[j] == 0.0) continue;
    const double y = std::log(std::fabs(c[j]));
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull.back();
      const double ya = std::log(std::fabs(c[a]));
      const double yb = std::log(std::fabs(c[b]));
      // Pop b if it lies on or below the chord a -> j.
      if ((yb - ya) * (j - a) <= (y - ya) * (b - a)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(j);
  }

  const double cap = 0.8 * fujiwara_bound(c);
  constexpr double kOffset = 0.7;  // keeps guesses off the real axis and off any symmetry line
  std::vector<std::complex<double>> z;
  z.reserve(static_cast<std::size_t>(n));
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const int i0 = hull[h];
    const int i1 = hull[h + 1];
    const int m = i1 - i0;
    double radius = std::pow(std::fabs(c[i0]) / std::fabs(c[i1]), 1.0 / m);
    if (cap > 0.0) radius = std::min(radius, cap);
    for (int j = 0; j < m; ++j) {
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(j) / m +
                                                     static_cast<double>(i0) / n) +
                           kOffset;
      z.push_back(std::polar(radius, theta));
    }
  }
  return z;
}

}  // namespace

std::vector<std::complex<double>> RootConfiguration::all_roots() const {
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<std::size_t>(degree));
  out.insert(out.end(), pairs.begin(), pairs.end());
  for (const auto z : pairs) out.push_back(std::conj(z));
  for (const double x : reals) out.emplace_back(x, 0.0);
  return out;
}

double backward_error(const Polynomial& p, std::complex<double> z) {
  const auto r = residual_dd(p.coefficients(), z);
  return r.scale == 0.0 ? 0.0 : r.value / r.scale;
}

std::vector<std::complex<double>> aberth_roots(const Polynomial& p,
                                               const RootFinderOptions& opts) {
  if (p.degree() < 1) throw DomainError("root finding needs degree >= 1");
  if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");

  // Exact zeros at the origin are split off first.
  const auto all = p.coefficients();
  std::size_t zeros = 0;
  while (all[zeros] == 0.0) ++zeros;
  const std::span<const double> c = all.subspan(zeros);
  const std::size_t n = c.size() - 1;

  std::vector<std::complex<double>> z = initial_guesses(c);
  std::vector<bool> done(n, false);
  if (n == 1) {
    z[0] = -c[0] / c[1];
    done[0] = true;
  }

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    bool active = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const NewtonStep step = newton_ratio(c, z[i]);
      if (step.at_noise_level || step.ratio == 0.0) {
        done[i] = true;
        continue;
      }
      active = true;
      std::complex<double> s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) s += 1.0 / (z[i] - z[j]);
      const std::complex<double> denom = 1.0 - step.ratio * s;
      std::complex<double> delta = step.ratio / denom;
      if (!std::isfinite(delta.real()) || !std::isfinite(delta.imag())) delta = step.ratio;
      z[i] -= delta;
      if (std::abs(delta) <= 2.0 * kEps * std::abs(z[i])) done[i] = true;
    }
    if (!active) break;
  }

  z.insert(z.end(), zeros, std::complex<double>(0.0, 0.0));
  std::vector<double> residuals(z.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    residuals[i] = backward_error(p, z[i]);
    worst = std::max(worst, residuals[i]);
  }
  if (!(worst <= opts.tol)) {
    std::ostringstream msg;
    msg << "Aberth iteration did not certify all roots after " << opts.max_sweeps
        << " sweeps (worst backward error " << worst << ", tolerance " << opts.tol << ")";
    throw ConvergenceError(msg.str(), std::move(z), std::move(residuals));
  }
  return z;
}

RootConfiguration find_roots(const Polynomial& p, double tol) {
  RootFinderOptions opts;
  opts.tol = tol;
  return find_roots(p, opts);
}

namespace {

RootConfiguration snap_and_certify(const Polynomial& p, std::span<const std::complex<double>> raw,
                                   double rel, double tol) {
  const ConjugateSplit split = split_conjugates(
      raw, [rel](std::complex<double> z) { return rel * (1.0 + std::abs(z)); });

  RootConfiguration cfg;
  cfg.degree = p.degree();
  cfg.pairs = split.pairs;
  cfg.reals = split.reals;

  // Dropping the imaginary part of a real root can cost a few ulps; one or two
  // real Newton steps restore it.
  for (double& x : cfg.reals) {
    for (int it = 0; it < 3; ++it) {
      if (x == 0.0) break;
      const NewtonStep step = newton_ratio(p.coefficients(), {x, 0.0});
      if (step.at_noise_level) break;
      const double next = x - step.ratio.real();
      if (!std::isfinite(next)) break;
      if (backward_error(p, next) >= backward_error(p, x)) break;
      x = next;
    }
  }
  std::sort(cfg.reals.begin(), cfg.reals.end());

  const auto labeled = cfg.all_roots();
  cfg.backward_errors.resize(labeled.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    cfg.backward_errors[i] = backward_error(p, labeled[i]);
    worst = std::max(worst, cfg.backward_errors[i]);
  }
  if (!(worst <= tol)) {
    std::ostringstream msg;
    msg << "snapped root configuration fails certification (worst backward error " << worst
        << ")";
    throw ConvergenceError(msg.str(), labeled, cfg.backward_errors);
  }
  return cfg;
}

}  // namespace

RootConfiguration find_roots(const Polynomial& p, const RootFinderOptions& opts) {
  const auto raw = aberth_roots(p, opts);
  // A root of multiplicity m is only resolved to about eps^(1/m), so a cluster
  // may miss the default pairing tolerance. Wider tolerances are tried in turn;
  // certification of the snapped roots decides which one is accepted.
  double rel = opts.pairing_rel;
  for (;;) {
    try {
      return snap_and_certify(p, raw, rel, opts.tol);
    } catch (const Error&) {
      if (rel >= 1e-2) throw;
      rel = std::min(1e-2, rel * 100.0);
    }
  }
}

RootConfiguration classify_conjugates(std::span<const std::complex<double>> roots,
                                      double pairing_tol) {
  const ConjugateSplit split =
      split_conjugates(roots, [pairing_tol](std::complex<double>) { return pairing_tol; });
  RootConfiguration cfg;
  cfg.degree = static_cast<int>(roots.size());
  cfg.pairs = split.pairs;
  cfg.reals = split.reals;
  return cfg;
}

}  // namespace rpz
