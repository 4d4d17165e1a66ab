#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rpz/errors.hpp"
#include "rpz/extended_real.hpp"
#include "rpz/measures.hpp"
#include "rpz/quadrature.hpp"

namespace rpz {

using cplx = std::complex<double>;
using Kind = GridDensityMeasure::Kind;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Fourier route on the circle is used when min(|z|,R)/max(|z|,R) <= this.
constexpr double kFourierRatio = 0.95;

// t^2/2 log|t| - 3t^2/4, the second antiderivative of log|t|.
double G(double t) {
  if (t == 0.0) return 0.0;
  return 0.5 * t * t * std::log(std::fabs(t)) - 0.75 * t * t;
}

// Antiderivative in t of log sqrt(t^2 + v^2).
double F(double t, double v) {
  if (v == 0.0) return t == 0.0 ? 0.0 : t * std::log(std::fabs(t)) - t;
  return 0.5 * t * std::log(t * t + v * v) - t + v * std::atan(t / v);
}

// Antiderivative of log+|x|.
double log_plus_antiderivative(double x) {
  const double s = std::fabs(x);
  if (s <= 1.0) return 0.0;
  const double h = s * std::log(s) - s + 1.0;
  return x < 0.0 ? -h : h;
}

// r^2/2 log r - r^2/4, antiderivative of r log r.
double H(double r) { return r == 0.0 ? 0.0 : 0.5 * r * r * std::log(r) - 0.25 * r * r; }

// r^4/4 log r - r^4/16, antiderivative of r^3 log r.
double J3(double r) {
  if (r == 0.0) return 0.0;
  const double r4 = r * r * r * r;
  return 0.25 * r4 * std::log(r) - r4 / 16.0;
}

// Hurwitz zeta(3, a), a in (0, 1], by direct sum plus Euler-Maclaurin tail.
double hurwitz_zeta3(double a) {
  constexpr int Q = 32;
  double s = 0.0;
  for (int q = Q - 1; q >= 0; --q) {
    const double x = q + a;
    s += 1.0 / (x * x * x);
  }
  const double x = Q + a;
  const double x2 = x * x;
  const double inv2 = 1.0 / x2;
  s += 0.5 * inv2 + 0.5 * inv2 / x + 0.25 * inv2 * inv2 - inv2 * inv2 * inv2 / 12.0 +
       inv2 * inv2 * inv2 * inv2 / 12.0;
  return s;
}

// |z - R e^{i theta}| computed without cancellation near the circle.
double log_dist_circle(double rz, double phi, double R, double theta) {
  const double s = std::sin(0.5 * (theta - phi));
  const double d2 = (rz - R) * (rz - R) + 4.0 * rz * R * s * s;
  return 0.5 * std::log(d2);
}

struct Valued {
  double value;
  double error;
};

Valued circle_potential(const GridDensityMeasure& mu, cplx z) {
  const double R = mu.lo();
  const double rz = std::abs(z);
  const double mass = mu.mass();
  if (rz == 0.0) return {std::log(R) * mass, 0.0};
  const double big = std::max(rz, R);
  const double rho = std::min(rz, R) / big;
  const double phi = std::arg(z);
  if (rho <= kFourierRatio) {
    double s = 0.0;
    double pw = 1.0;
    for (int m = 1;; ++m) {
      pw *= rho;
      if (pw / m < 1e-18) break;
      s += pw / m * (std::polar(1.0, m * phi) * mu.fourier(m)).real();
    }
    return {std::log(big) * mass - s, 64.0 * kEps * (std::fabs(std::log(big)) + 1.0)};
  }
  std::vector<double> breaks;
  const int n = mu.cells();
  for (int i = 1; i < n; ++i) breaks.push_back(mu.edge(i));
  const double p = phi < 0.0 ? phi + kTwoPi : phi;
  breaks.push_back(p);
  const auto dens = mu.density();
  const double w = mu.width();
  auto f = [&](double th) {
    const int c = std::clamp(static_cast<int>(th / w), 0, n - 1);
    if (dens[c] == 0.0) return 0.0;
    return dens[c] * log_dist_circle(rz, phi, R, th);
  };
  QuadOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  opts.max_intervals = 20 * n + 4000;
  const QuadResult q = integrate(f, 0.0, kTwoPi, opts, breaks);
  return {q.value, q.abs_error};
}

Valued interval_potential(const GridDensityMeasure& mu, cplx z) {
  const double u = z.real();
  const double v = z.imag();
  const auto dens = mu.density();
  double s = 0.0;
  double scale = 0.0;
  for (int i = 0; i < mu.cells(); ++i) {
    if (dens[i] == 0.0) continue;
    const double a = mu.edge(i) - u;
    const double b = mu.edge(i + 1) - u;
    const double fa = F(a, v);
    const double fb = F(b, v);
    s += dens[i] * (fb - fa);
    scale += dens[i] * (std::fabs(fa) + std::fabs(fb));
  }
  return {s, 16.0 * kEps * (scale + 1.0)};
}

double ring_log_max(double a, double b, double s) {
  // integral_a^b log max(s, r) r dr
  if (s >= b) return std::log(s) * 0.5 * (b * b - a * a);
  if (s <= a) return H(b) - H(a);
  return std::log(s) * 0.5 * (s * s - a * a) + H(b) - H(s);
}

Valued polar_potential(const GridDensityMeasure& mu, cplx z) {
  const double s = std::abs(z);
  const auto dens = mu.density();
  double acc = 0.0;
  double scale = 0.0;
  for (int i = 0; i < mu.cells(); ++i) {
    if (dens[i] == 0.0) continue;
    const double t = kTwoPi * dens[i] * ring_log_max(mu.edge(i), mu.edge(i + 1), s);
    acc += t;
    scale += std::fabs(t);
  }
  return {acc, 16.0 * kEps * (scale + 1.0)};
}

Valued grid_potential(const GridDensityMeasure& mu, cplx z) {
  switch (mu.kind()) {
    case Kind::interval:
      return interval_potential(mu, z);
    case Kind::circle:
      return circle_potential(mu, z);
    case Kind::polar:
      return polar_potential(mu, z);
  }
  return {0.0, 0.0};
}

double interval_energy(const GridDensityMeasure& mu, double& err) {
  // 8-point Gauss-Legendre on [-1, 1] for well-separated cells, where the
  // closed form would lose digits to cancellation
  static const double gx[8] = {-0.9602898564975362, -0.7966664774136267, -0.525532409916329, -0.18343464249564978,
                               0.18343464249564978, 0.525532409916329,   0.7966664774136267, 0.9602898564975362};
  static const double gw[8] = {0.10122853629037669, 0.22238103445337434, 0.31370664587788705, 0.36268378337836177,
                               0.36268378337836177, 0.31370664587788705, 0.22238103445337434, 0.10122853629037669};
  const auto dens = mu.density();
  const int n = mu.cells();
  const double h = mu.width();
  double total = 0.0;
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    if (dens[i] == 0.0) continue;
    const double a = mu.edge(i), b = mu.edge(i + 1);
    double row = 0.0;
    for (int j = i; j < n; ++j) {
      if (dens[j] == 0.0) continue;
      const double c = mu.edge(j), d = mu.edge(j + 1);
      double e;
      if (j - i <= 8) {
        e = G(d - a) - G(d - b) - G(c - a) + G(c - b);
      } else {
        e = 0.0;
        const double gap = (j - i) * h;
        for (int p = 0; p < 8; ++p)
          for (int q = 0; q < 8; ++q) e += gw[p] * gw[q] * std::log(gap + 0.5 * h * (gx[q] - gx[p]));
        e *= 0.25 * h * h;
      }
      const double t = dens[i] * dens[j] * e;
      row += j == i ? t : 2.0 * t;
      scale += std::fabs(t);
    }
    total += row;
  }
  err = 64.0 * kEps * scale * std::sqrt(static_cast<double>(n)) + 1e-14;
  return total;
}

double circle_energy(const GridDensityMeasure& mu, double& err) {
  const int n = mu.cells();
  const double w = mu.width();
  const double mass = mu.mass();
  // sum_m |c_m|^2 / m with c_m = w sinc(m w / 2) (-1)^q D_{m mod n}; the sum
  // over each residue class r collapses to a Hurwitz zeta value.
  double s = 0.0;
  for (int r = 1; r < n; ++r) {
    const double x = 0.5 * r * w;
    const double sn = std::sin(x);
    const double d = std::norm(mu.fourier(r)) / (w * w * (sn / x) * (sn / x));
    s += d * sn * sn * hurwitz_zeta3(static_cast<double>(r) / n);
  }
  s *= 4.0 / (static_cast<double>(n) * n * n);
  err = 64.0 * kEps * (std::fabs(std::log(mu.lo())) + s + 1.0);
  return std::log(mu.lo()) * mass * mass - s;
}

double polar_energy(const GridDensityMeasure& mu, double& err) {
  const auto dens = mu.density();
  const int n = mu.cells();
  double total = 0.0;
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    if (dens[i] == 0.0) continue;
    const double a = mu.edge(i), b = mu.edge(i + 1);
    const double self = J3(b) - J3(a) - a * a * (H(b) - H(a));
    double t = dens[i] * dens[i] * self;
    total += t;
    scale += std::fabs(t);
    for (int j = i + 1; j < n; ++j) {
      if (dens[j] == 0.0) continue;
      const double c = mu.edge(j), d = mu.edge(j + 1);
      t = 2.0 * dens[i] * dens[j] * 0.5 * (b * b - a * a) * (H(d) - H(c));
      total += t;
      scale += std::fabs(t);
    }
  }
  const double f = kTwoPi * kTwoPi;
  err = 64.0 * kEps * f * scale + 1e-15;
  return f * total;
}

}  // namespace

GridDensityMeasure::GridDensityMeasure(Kind kind, double lo, double hi, std::vector<double> density,
                                       bool normalize)
    : kind_(kind), lo_(lo), hi_(hi), density_(std::move(density)) {
  if (density_.empty()) throw DomainError("GridDensityMeasure: no cells");
  for (double d : density_)
    if (!std::isfinite(d) || d < 0.0) throw DomainError("GridDensityMeasure: density must be finite and >= 0");
  const double n = static_cast<double>(density_.size());
  switch (kind_) {
    case Kind::interval:
      if (!(lo < hi)) throw DomainError("GridDensityMeasure: empty interval");
      lo_edge_ = lo;
      width_ = (hi - lo) / n;
      break;
    case Kind::circle:
      if (!(lo > 0.0) || lo != hi) throw DomainError("GridDensityMeasure: circle radius must be > 0");
      lo_edge_ = 0.0;
      width_ = kTwoPi / n;
      break;
    case Kind::polar:
      if (!(lo >= 0.0 && lo < hi)) throw DomainError("GridDensityMeasure: need 0 <= r0 < r1");
      lo_edge_ = lo;
      width_ = (hi - lo) / n;
      break;
  }
  if (normalize) {
    const double m0 = mass();
    if (!(m0 > 0.0)) throw DomainError("GridDensityMeasure: density has zero mass");
    for (double& d : density_) d /= m0;
  }
  const double m = mass();
  if (!(std::fabs(m - 1.0) <= 1e-8))
    throw DomainError("GridDensityMeasure: mass " + std::to_string(m) + " not within 1e-8 of 1");

  if (kind_ == Kind::circle) {
    const int N = cells();
    dft_.resize(N);
    for (int r = 0; r < N; ++r) {
      cplx acc = 0.0;
      for (int c = 0; c < N; ++c)
        if (density_[c] != 0.0) acc += density_[c] * std::polar(1.0, -r * (c + 0.5) * width_);
      dft_[r] = acc;
    }
  }
}

GridDensityMeasure GridDensityMeasure::interval(double a, double b, std::vector<double> density,
                                                bool normalize) {
  return GridDensityMeasure(Kind::interval, a, b, std::move(density), normalize);
}

GridDensityMeasure GridDensityMeasure::circle(double radius, std::vector<double> density,
                                                bool normalize) {
  return GridDensityMeasure(Kind::circle, radius, radius, std::move(density), normalize);
}

GridDensityMeasure GridDensityMeasure::polar(double r0, double r1, std::vector<double> density,
                                                bool normalize) {
  return GridDensityMeasure(Kind::polar, r0, r1, std::move(density), normalize);
}

GridDensityMeasure GridDensityMeasure::uniform_interval(double a, double b, int cells) {
  if (cells < 1) throw DomainError("uniform_interval: cells must be >= 1");
  return interval(a, b, std::vector<double>(cells, 1.0 / (b - a)));
}

GridDensityMeasure GridDensityMeasure::uniform_circle(double radius, int cells) {
  if (cells < 1) throw DomainError("uniform_circle: cells must be >= 1");
  return circle(radius, std::vector<double>(cells, 1.0 / kTwoPi));
}

GridDensityMeasure GridDensityMeasure::uniform_disc(double radius, int cells) {
  if (cells < 1) throw DomainError("uniform_disc: cells must be >= 1");
  return polar(0.0, radius, std::vector<double>(cells, 1.0 / (std::numbers::pi * radius * radius)));
}

double GridDensityMeasure::cell_mass(int i) const {
  const double a = edge(i), b = edge(i + 1);
  if (kind_ == Kind::polar) return density_[i] * std::numbers::pi * (b * b - a * a);
  return density_[i] * (b - a);
}

double GridDensityMeasure::mass() const {
  double m = 0.0;
  for (int i = 0; i < cells(); ++i) m += cell_mass(i);
  return m;
}

std::string_view GridDensityMeasure::quadrature_rule() const noexcept {
  switch (kind_) {
    case Kind::interval:
      return "piecewise-constant/exact-log-near+gauss-legendre-3";
    case Kind::circle:
      return "piecewise-constant/fourier+adaptive-gk15";
    case Kind::polar:
      return "piecewise-constant/exact-radial";
  }
  return "";
}

bool GridDensityMeasure::conjugate_symmetric() const noexcept {
  if (kind_ != Kind::circle) return true;
  const int n = cells();
  for (int j = 0; j < n; ++j) {
    const double a = density_[j], b = density_[n - 1 - j];
    if (std::fabs(a - b) > 1e-12 * std::max(std::fabs(a), std::fabs(b))) return false;
  }
  return true;
}

double GridDensityMeasure::min_modulus() const noexcept {
  if (kind_ == Kind::interval) return (lo_ <= 0.0 && hi_ >= 0.0) ? 0.0 : std::min(std::fabs(lo_), std::fabs(hi_));
  return lo_;
}

double GridDensityMeasure::max_modulus() const noexcept {
  if (kind_ == Kind::interval) return std::max(std::fabs(lo_), std::fabs(hi_));
  return hi_;
}

cplx GridDensityMeasure::fourier(int m) const {
  if (kind_ != Kind::circle) throw DomainError("fourier: only defined for circle grids");
  if (m < 0) throw DomainError("fourier: m must be >= 0");
  const int N = cells();
  if (m == 0) return width_ * dft_[0];
  const int q = m / N;
  const int r = m % N;
  const double x = 0.5 * m * width_;
  const double sinc = std::sin(x) / x;
  const double sign = (q % 2 == 0) ? 1.0 : -1.0;
  return width_ * sinc * sign * dft_[r];
}

double log_potential(const GridDensityMeasure& mu, cplx z) {
  return ext::checked(grid_potential(mu, z).value, "grid log_potential");
}

double log_plus_moment(const GridDensityMeasure& mu) {
  const auto dens = mu.density();
  double s = 0.0;
  for (int i = 0; i < mu.cells(); ++i) {
    if (dens[i] == 0.0) continue;
    const double a = mu.edge(i), b = mu.edge(i + 1);
    switch (mu.kind()) {
      case Kind::interval:
        s += dens[i] * (log_plus_antiderivative(b) - log_plus_antiderivative(a));
        break;
      case Kind::circle:
        s += mu.cell_mass(i) * std::max(0.0, std::log(mu.lo()));
        break;
      case Kind::polar: {
        const double lo = std::max(a, 1.0);
        if (b > lo) s += kTwoPi * dens[i] * (H(b) - H(lo));
        break;
      }
    }
  }
  return s;
}

double normalized_potential(const GridDensityMeasure& mu, cplx z) {
  return log_potential(mu, z) - log_plus_moment(mu);
}

double log_energy(const GridDensityMeasure& mu) {
  double err = 0.0;
  double e = 0.0;
  switch (mu.kind()) {
    case Kind::interval:
      e = interval_energy(mu, err);
      break;
    case Kind::circle:
      e = circle_energy(mu, err);
      break;
    case Kind::polar:
      e = polar_energy(mu, err);
      break;
  }
  ext::checked(e, "log_energy");
  if (e < -1e6) throw DivergentEnergyError("log_energy: estimate below -1e6");
  return e;
}

RateResult rate_function(const GridDensityMeasure& mu, Verdict membership, double tol) {
  RateResult r{};
  r.verdict = membership;
  if (membership == Verdict::verified_outside) {
    r.value = ext::kPosInf;
    return r;
  }
  const Valued lin = grid_potential(mu, cplx(1.0, 0.0));
  double err = 0.0;
  switch (mu.kind()) {
    case Kind::interval:
      r.energy_term = interval_energy(mu, err);
      break;
    case Kind::circle:
      r.energy_term = circle_energy(mu, err);
      break;
    case Kind::polar:
      r.energy_term = polar_energy(mu, err);
      break;
  }
  r.linear_term = lin.value;
  r.value = ext::add(r.linear_term, -0.5 * r.energy_term);
  r.error_bound = lin.error + 0.5 * err;
  if (r.error_bound > tol)
    throw AccuracyError("rate_function: achieved error above tolerance", r.error_bound);
  return r;
}

nlohmann::json to_json(const GridDensityMeasure& mu) {
  const char* kind = mu.kind() == Kind::interval ? "interval"
                     : mu.kind() == Kind::circle ? "circle"
                                                 : "polar";
  nlohmann::json g = {{"kind", kind},
                      {"lo", mu.lo()},
                      {"hi", mu.hi()},
                      {"density", std::vector<double>(mu.density().begin(), mu.density().end())},
                      {"rule", std::string(mu.quadrature_rule())}};
  return {{"type", "grid"}, {"grid", std::move(g)}};
}

GridDensityMeasure grid_from_json(const nlohmann::json& j) {
  if (j.at("type") != "grid") throw DomainError("measure JSON: type is not grid");
  const auto& g = j.at("grid");
  const std::string kind = g.at("kind");
  auto dens = g.at("density").get<std::vector<double>>();
  const double lo = g.at("lo"), hi = g.at("hi");
  if (kind == "interval") return GridDensityMeasure::interval(lo, hi, std::move(dens), false);
  if (kind == "circle") return GridDensityMeasure::circle(lo, std::move(dens), false);
  if (kind == "polar") return GridDensityMeasure::polar(lo, hi, std::move(dens), false);
  throw DomainError("measure JSON: unknown grid kind " + kind);
}

}  // namespace rpz
