#include "rpz/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "rpz/errors.hpp"
#include "rpz/kernels.hpp"
#include "rpz/measures.hpp"
#include "rpz/parallel.hpp"
#include "rpz/rng.hpp"

namespace rpz::equilibrium {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCatalan = 0.915965594177219015054603514932384110774;

// Density of w = sqrt(y) under the flipped measure: (2/pi) / (1 + w^2).
double g(double w) { return 2.0 / (kPi * (1.0 + w * w)); }

// integral_W^inf log(w^2 - c) g(w) dw for |c| / W^2 <= 1/100, by expanding
// g(w) = (2/pi) sum_k (-1)^k w^{-2k-2} and log(1 - c/w^2) in powers of c/w^2.
double tail_series(double c, double W) {
  const double a = 1.0 / W;
  const double a2 = a * a;
  const double la = std::log(a);
  double t1 = 0.0;
  double ap = a;
  for (int k = 0; k < 60; ++k) {
    const double p = 2.0 * k + 1.0;
    const double term = ap * (-la / p + 1.0 / (p * p));
    t1 += (k % 2 == 0) ? term : -term;
    if (std::fabs(term) < 1e-20) break;
    ap *= a2;
  }
  double t2 = 0.0;
  double cm = 1.0;
  for (int m = 1; m < 200; ++m) {
    cm *= c * a2;  // (c a^2)^m
    double inner = 0.0;
    double ak = 1.0;
    for (int k = 0; k < 60; ++k) {
      const double term = ak / (2.0 * m + 2.0 * k + 1.0);
      inner += (k % 2 == 0) ? term : -term;
      if (term < 1e-20) break;
      ak *= a2;
    }
    const double term = cm * a / m * inner;
    t2 += term;
    if (std::fabs(term) < 1e-20) break;
  }
  return (4.0 / kPi) * t1 - (2.0 / kPi) * t2;
}

QuadOptions options_for(double tol) {
  QuadOptions o;
  o.abs_tol = std::min(0.1 * tol, 1e-12);
  o.rel_tol = 1e-14;
  o.max_intervals = 8000;
  return o;
}

}  // namespace

double phi_density(double x) {
  if (x == 0.0) return std::signbit(x) ? std::numeric_limits<double>::infinity() : 0.0;
  if (x > 0.0) return 0.0;
  const double a = -x;
  return 1.0 / (kPi * (a + 1.0) * std::sqrt(a));
}

double phi_cdf(double x) {
  if (x > 0.0) return 0.0;
  return (2.0 / kPi) * std::atan(std::sqrt(-x));
}

double standard_cdf(double x) {
  if (x >= 0.0) return 1.0;
  return (2.0 / kPi) * std::atan(1.0 / std::sqrt(-x));
}

double phi_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("phi_quantile: q must lie in (0, 1)");
  const double t = std::tan(0.5 * kPi * q);
  return -t * t;
}

double tail_mass(double R) {
  if (!(R > 0.0)) throw DomainError("tail_mass: R must be > 0");
  return (2.0 / kPi) * std::atan(1.0 / std::sqrt(R));
}

QuadResult density_integral(double R, double tol) {
  if (!(R > 0.0)) throw DomainError("density_integral: R must be > 0");
  // x = -t^2: phi(x) dx = 2 / (pi (1 + t^2)) dt
  QuadOptions o;
  o.abs_tol = tol;
  o.rel_tol = tol;
  const double T = std::sqrt(R);
  std::vector<double> breaks;
  for (double b = 1.0; b < T; b *= 4.0) breaks.push_back(b);
  return integrate(g, 0.0, T, o, breaks);
}

PotentialValue flipped_potential(double x, double quad_tol) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("flipped_potential: x must be >= 0");
  const double s = std::sqrt(x);
  const double W = std::max(10.0, 10.0 * s);
  const QuadOptions opts = options_for(quad_tol);
  QuadResult q;
  double analytic;
  if (x == 0.0) {
    const double g0 = g(0.0);
    auto f = [&](double w) { return 2.0 * std::log(w) * (g(w) - g0); };
    std::vector<double> breaks{1.0};
    q = integrate(f, 0.0, W, opts, breaks);
    analytic = g0 * 2.0 * (W * std::log(W) - W);
  } else {
    const double gs = g(s);
    // log|x - w^2| = log(s + w) + log|s - w|; the second factor has g(s) subtracted.
    auto f = [&](double w) {
      const double d = std::fabs(s - w);
      const double sing = d == 0.0 ? 0.0 : std::log(d) * (g(w) - gs);
      return std::log(s + w) * g(w) + sing;
    };
    std::vector<double> breaks{s};
    if (s > 2.0) breaks.push_back(0.5 * s);
    if (2.0 * s < W) breaks.push_back(2.0 * s);
    q = integrate(f, 0.0, W, opts, breaks);
    const double Ws = W - s;
    analytic = gs * (s * std::log(s) - s + Ws * std::log(Ws) - Ws);
  }
  const double value = q.value + analytic + tail_series(x, W);
  const double err = q.abs_error + 1e-15 * (std::fabs(analytic) + 1.0);
  if (!(err <= quad_tol))
    throw AccuracyError("flipped_potential: quadrature error above tolerance", err);
  return {value, err};
}

ResidualValue equilibrium_potential_residual(double x, double quad_tol) {
  const PotentialValue p = flipped_potential(x, quad_tol);
  return {p.value, p.value - std::log1p(x), p.abs_error};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw DomainError("log_grid: bad arguments");
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * i / (n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

VariationalReport variational_residual(double gamma, std::span<const double> x_grid,
                                       std::span<const double> y_grid, double quad_tol,
                                       Candidate candidate) {
  if (x_grid.empty()) throw DomainError("variational_residual: empty x grid");
  const GridDensityMeasure unit = GridDensityMeasure::uniform_interval(0.0, 1.0, 1);
  double max_err = 0.0;
  auto potential = [&](double x) {
    if (candidate == Candidate::uniform_unit) return log_potential(unit, {x, 0.0});
    const PotentialValue p = flipped_potential(x, quad_tol);
    max_err = std::max(max_err, p.abs_error);
    return p.value;
  };
  VariationalReport r;
  r.gamma = gamma;
  r.x_grid.assign(x_grid.begin(), x_grid.end());
  r.y_grid.assign(y_grid.begin(), y_grid.end());
  std::vector<double> raw;
  for (double x : x_grid) raw.push_back(2.0 * gamma * potential(x) - std::log1p(x));
  std::vector<double> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  r.C = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  for (double v : raw) {
    r.residuals.push_back(v - r.C);
    r.max_residual = std::max(r.max_residual, std::fabs(v - r.C));
  }
  r.min_slack = std::numeric_limits<double>::infinity();
  for (double y : y_grid) {
    const double sl = 2.0 * gamma * potential(y) - std::log1p(y) - r.C;
    r.slacks.push_back(sl);
    r.min_slack = std::min(r.min_slack, sl);
  }
  if (y_grid.empty()) r.min_slack = 0.0;
  r.max_quad_error = max_err;
  return r;
}

RateAtEquilibrium rate_at_equilibrium(double quad_tol) {
  const QuadOptions outer = options_for(quad_tol);
  const double inner_tol = 1e-11;

  // integral log(1 + w^2) g(w) dw
  constexpr double W = 10.0;
  auto f1 = [](double w) { return std::log1p(w * w) * g(w); };
  const QuadResult q1 = integrate(f1, 0.0, W, outer);
  const double first = q1.value + tail_series(-1.0, W);

  // Sigma = int_0^1 L(t^2) g(t) dt + int_0^1 L(1/u^2) g(u) du, with
  // L(1/u^2) = -2 log u + eps(1/u^2); the log part integrates to (4/pi) Catalan.
  double inner_err = 0.0;
  auto near = [&](double t) {
    const PotentialValue p = flipped_potential(t * t, inner_tol);
    inner_err = std::max(inner_err, p.abs_error);
    return p.value * g(t);
  };
  auto far = [&](double u) {
    const double x = 1.0 / (u * u);
    const PotentialValue p = flipped_potential(x, inner_tol);
    inner_err = std::max(inner_err, p.abs_error);
    return (p.value - std::log(x)) * g(u);
  };
  const QuadResult qa = integrate(near, 0.0, 1.0, outer);
  const QuadResult qb = integrate(far, 0.0, 1.0, outer);
  const double energy = qa.value + qb.value + (4.0 / kPi) * kCatalan;

  RateAtEquilibrium r;
  r.first_term = first;
  r.energy = energy;
  r.value = first - 0.5 * energy;
  r.abs_error = q1.abs_error + 0.5 * (qa.abs_error + qb.abs_error + 2.0 * inner_err);
  if (!(r.abs_error <= quad_tol))
    throw AccuracyError("rate_at_equilibrium: quadrature error above tolerance", r.abs_error);
  return r;
}

MonteCarloRate monte_carlo_rate(std::uint64_t samples, std::uint64_t seed, int workers) {
  if (samples < 2) throw DomainError("monte_carlo_rate: need at least 2 samples");
  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  struct Part {
    double first = 0.0, energy = 0.0;
    std::uint64_t n = 0;
  };
  std::vector<Part> parts(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t n = std::min(kChunk, samples - begin);
    const CounterRng rng(seed, c);
    std::vector<double> x(n), y(n);
    double first = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      x[i] = phi_quantile(rng.uniform(2 * i));
      y[i] = phi_quantile(rng.uniform(2 * i + 1));
      first += std::log1p(-x[i]) + std::log1p(-y[i]);
    }
    parts[c].first = first / (2.0 * n);
    parts[c].energy = kernels::sum_log_abs_diff(x, y) / n;
    parts[c].n = n;
  });
  // Weighted means and batch-means standard errors, reduced in chunk order.
  MonteCarloRate r{};
  r.samples = samples;
  double sf = 0.0, se = 0.0;
  for (const Part& p : parts) {
    sf += p.first * p.n;
    se += p.energy * p.n;
  }
  r.first_term = sf / samples;
  r.energy = se / samples;
  r.value = r.first_term - 0.5 * r.energy;
  if (chunks > 1) {
    double vf = 0.0, ve = 0.0, vv = 0.0;
    for (const Part& p : parts) {
      const double w = static_cast<double>(p.n) / kChunk;
      vf += w * (p.first - r.first_term) * (p.first - r.first_term);
      ve += w * (p.energy - r.energy) * (p.energy - r.energy);
      const double v = p.first - 0.5 * p.energy;
      vv += w * (v - r.value) * (v - r.value);
    }
    const double b = static_cast<double>(chunks);
    r.first_term_se = std::sqrt(vf / (b - 1.0) / b);
    r.energy_se = std::sqrt(ve / (b - 1.0) / b);
    r.value_se = std::sqrt(vv / (b - 1.0) / b);
  }
  return r;
}

}  // namespace rpz::equilibrium
