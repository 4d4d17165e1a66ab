#include "rpz/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rpz/errors.hpp"
#include "rpz/extended_real.hpp"
#include "rpz/rng.hpp"

namespace rpz {

using cplx = std::complex<double>;

EmpiricalMeasure::EmpiricalMeasure(std::vector<cplx> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw DomainError("EmpiricalMeasure: no atoms");
  for (const cplx& z : atoms_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw DomainError("EmpiricalMeasure: non-finite atom");
  fill_soa();
}

EmpiricalMeasure EmpiricalMeasure::symmetric(std::span<const cplx> atoms,
                                             const PairingTolerance& tol) {
  if (atoms.empty()) throw DomainError("EmpiricalMeasure: no atoms");
  const ConjugateSplit split = split_conjugates(atoms, tol);
  EmpiricalMeasure mu;
  mu.atoms_.reserve(atoms.size());
  for (const cplx& z : split.pairs) mu.atoms_.push_back(z);
  for (const cplx& z : split.pairs) mu.atoms_.push_back(std::conj(z));
  for (double x : split.reals) mu.atoms_.emplace_back(x, 0.0);
  mu.pairs_ = split.pairs.size();
  mu.symmetric_ = true;
  mu.fill_soa();
  return mu;
}

EmpiricalMeasure EmpiricalMeasure::from_roots(const RootConfiguration& cfg) {
  const auto roots = cfg.all_roots();
  return symmetric(roots);
}

void EmpiricalMeasure::fill_soa() {
  re_.resize(atoms_.size());
  im_.resize(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    re_[i] = atoms_[i].real();
    im_[i] = atoms_[i].imag();
  }
}

kernels::PointsView EmpiricalMeasure::upper_view() const noexcept {
  return {std::span<const double>(re_).first(pairs_), std::span<const double>(im_).first(pairs_)};
}

kernels::PointsView EmpiricalMeasure::real_view() const noexcept {
  const std::size_t off = 2 * pairs_;
  return {std::span<const double>(re_).subspan(off), std::span<const double>(im_).subspan(off)};
}

double log_potential(const EmpiricalMeasure& mu, cplx z) {
  double s;
  if (mu.is_symmetric())
    s = kernels::sum_log_distance_conj(mu.upper_view(), z) +
        kernels::sum_log_distance(mu.real_view(), z);
  else
    s = kernels::sum_log_distance(mu.view(), z);
  return ext::checked(s / static_cast<double>(mu.size()), "log_potential");
}

double log_plus_moment(const EmpiricalMeasure& mu) {
  double s = 0.0;
  for (const cplx& w : mu.atoms()) {
    const double r = std::abs(w);
    if (r > 1.0) s += std::log(r);
  }
  return s / static_cast<double>(mu.size());
}

double normalized_potential(const EmpiricalMeasure& mu, cplx z) {
  return log_potential(mu, z) - log_plus_moment(mu);
}

DiscreteEnergy discrete_log_energy(const EmpiricalMeasure& mu) {
  const double k = static_cast<double>(mu.size());
  const double s = kernels::pairwise_log_distance(mu.view());
  ext::checked(s, "discrete_log_energy");
  if (s == ext::kNegInf) return {ext::kNegInf, true};
  return {2.0 * s / (k * k), false};
}

double log_energy(const EmpiricalMeasure& mu) {
  if (!mu.continuous_proxy())
    throw DomainError("log_energy: atomic measure has energy -inf; use discrete_log_energy "
                      "or flag the measure as a continuous proxy");
  const DiscreteEnergy e = discrete_log_energy(mu);
  if (e.duplicate || e.value < -1e6)
    throw DivergentEnergyError("log_energy: estimate below -1e6");
  return e.value;
}

namespace {

// Total order on measures used to fix the argument order of symmetric operations.
bool canonical_less(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const auto& x = a.atoms();
  const auto& y = b.atoms();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].real() != y[i].real()) return x[i].real() < y[i].real();
    if (x[i].imag() != y[i].imag()) return x[i].imag() < y[i].imag();
  }
  return false;
}

}  // namespace

double mutual_energy(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  const bool swap = canonical_less(nu, mu);
  const EmpiricalMeasure& a = swap ? nu : mu;
  const EmpiricalMeasure& b = swap ? mu : nu;
  const double s = kernels::cross_log_distance(a.view(), b.view());
  return ext::checked(s / (static_cast<double>(a.size()) * static_cast<double>(b.size())),
                      "mutual_energy");
}

double pair_kernel(cplx z, cplx w) {
  if (z == w) return ext::kPosInf;
  const double a = ext::log_abs(std::abs(1.0 - z));
  const double b = ext::log_abs(std::abs(1.0 - w));
  const double c = std::log(std::abs(z - w));
  return ext::add(ext::add(a, b), -c);
}

PairKernelParams::PairKernelParams(double M_, double eps_) : M(M_), eps(eps_) {
  if (!(M > 0.0) || !(eps > 0.0)) throw DomainError("PairKernelParams: M and eps must be > 0");
}

TruncatedKernel truncated_pair_kernel(cplx z, cplx w, const PairKernelParams& params) {
  if (!(params.M > 0.0) || !(params.eps > 0.0))
    throw DomainError("truncated_pair_kernel: M and eps must be > 0");
  TruncatedKernel t{};
  t.f = pair_kernel(z, w);
  t.f_M = std::min(t.f, params.M);
  t.g_M = t.f == ext::kNegInf ? 0.0 : t.f - t.f_M;
  const double floor_eps = -1.0 / params.eps;
  const double a = std::max(ext::log_abs(std::abs(1.0 - z)), floor_eps);
  const double b = std::max(ext::log_abs(std::abs(1.0 - w)), floor_eps);
  const double c = std::max(ext::log_abs(std::abs(z - w)), -params.M);
  t.f_eps_M = std::min(a + b - c, params.M);
  return t;
}

RateResult rate_function(const EmpiricalMeasure& mu, Verdict membership) {
  RateResult r{};
  r.verdict = membership;
  r.linear_term = log_potential(mu, cplx(1.0, 0.0));
  r.energy_term = discrete_log_energy(mu).value;
  if (membership == Verdict::verified_outside) {
    r.value = ext::kPosInf;
    return r;
  }
  r.value = ext::add(r.linear_term, -0.5 * r.energy_term);
  const double scale = std::isfinite(r.value)
                           ? std::fabs(r.linear_term) + std::fabs(r.energy_term) + 1.0
                           : 0.0;
  r.error_bound = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  return r;
}

namespace {

double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

double distance_test_function(int index, cplx z) {
  if (index < 0 || index >= kDistanceDictionarySize)
    throw DomainError("distance_test_function: index out of range");
  const int m = index % 16;
  switch (index / 16) {
    case 0: {
      // 8 clamps in Re z, 8 in Im z, offsets -1.75 .. 1.75
      const double c = -1.75 + 0.5 * (m % 8);
      return clamp1((m < 8 ? z.real() : z.imag()) - c);
    }
    case 1: {
      const double rc = 0.125 * (m + 1);
      return std::max(0.0, 0.25 - std::fabs(std::abs(z) - rc));
    }
    case 2: {
      const double th = 2.0 * std::numbers::pi * (m + 0.5) / 16.0;
      return std::max(0.0, 0.4 - std::abs(z - std::polar(1.0, th)));
    }
    default: {
      const cplx u = z * std::polar(1.0, -std::numbers::pi * m / 32.0);
      return clamp1(u.real()) * clamp1(u.imag()) / std::numbers::sqrt2;
    }
  }
}

double measure_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  double worst = 0.0;
  for (int h = 0; h < kDistanceDictionarySize; ++h) {
    double a = 0.0, b = 0.0;
    for (const cplx& z : mu.atoms()) a += distance_test_function(h, z);
    for (const cplx& z : nu.atoms()) b += distance_test_function(h, z);
    a /= static_cast<double>(mu.size());
    b /= static_cast<double>(nu.size());
    worst = std::max(worst, std::fabs(a - b));
  }
  return worst;
}

double min_separation(const EmpiricalMeasure& mu) {
  const auto& a = mu.atoms();
  double best = ext::kPosInf;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) best = std::min(best, std::abs(a[i] - a[j]));
  return best;
}

EmpiricalMeasure rotated_roots_of_unity(int k) {
  if (k < 1) throw DomainError("rotated_roots_of_unity: k must be >= 1");
  std::vector<cplx> z;
  z.reserve(k);
  for (int j = 0; j < k; ++j) {
    const double th = std::numbers::pi * (2.0 * j + 1.0) / k;
    z.emplace_back(std::cos(th), std::sin(th));
  }
  return EmpiricalMeasure::symmetric(z);
}

EmpiricalMeasure invert(const EmpiricalMeasure& mu) {
  std::vector<cplx> z;
  z.reserve(mu.size());
  for (const cplx& w : mu.atoms()) {
    if (w == cplx(0.0, 0.0)) throw DomainError("invert: atom at 0");
    z.push_back(1.0 / w);
  }
  return EmpiricalMeasure(std::move(z));
}

namespace {

// Cell-choice CDF for mu restricted to Im >= 0 (upper_only) or for all of mu.
struct CellSampler {
  std::vector<double> cdf;
  std::vector<double> hi;  // upper edge of the usable part of each cell

  CellSampler(const GridDensityMeasure& mu, bool upper_only) {
    const int n = mu.cells();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      double top = mu.edge(i + 1);
      double m = mu.cell_mass(i);
      if (upper_only && mu.kind() == GridDensityMeasure::Kind::circle) {
        top = std::min(top, std::numbers::pi);
        const double len = std::max(0.0, top - mu.edge(i));
        m = mu.density()[i] * len;
      }
      acc += m;
      cdf.push_back(acc);
      hi.push_back(top);
    }
  }

  int pick(double u) const {
    const double target = u * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    int i = static_cast<int>(it - cdf.begin());
    i = std::min(i, static_cast<int>(cdf.size()) - 1);
    while (i > 0 && cdf[i] == cdf[i - 1]) --i;  // skip empty cells
    return i;
  }
};

cplx draw(const GridDensityMeasure& mu, const CellSampler& s, bool upper_only, double u0,
          double u1, double u2) {
  const int i = s.pick(u0);
  const double a = mu.edge(i);
  const double b = s.hi[i];
  switch (mu.kind()) {
    case GridDensityMeasure::Kind::interval:
      return {a + u1 * (b - a), 0.0};
    case GridDensityMeasure::Kind::circle:
      return std::polar(mu.lo(), a + u1 * (b - a));
    case GridDensityMeasure::Kind::polar: {
      const double r = std::sqrt(a * a + u1 * (b * b - a * a));
      const double span = upper_only ? std::numbers::pi : 2.0 * std::numbers::pi;
      return std::polar(r, u2 * span);
    }
  }
  return {};
}

}  // namespace

cplx sample_point(const GridDensityMeasure& mu, double u0, double u1, double u2) {
  const CellSampler s(mu, false);
  return draw(mu, s, false, u0, u1, u2);
}

EmpiricalMeasure discretize_symmetric(const GridDensityMeasure& mu, int k, std::uint64_t seed) {
  if (k < 2 || k % 2 != 0) throw DomainError("discretize_symmetric: k must be even and >= 2");
  if (!mu.conjugate_symmetric())
    throw SymmetryError("discretize_symmetric: measure is not conjugate-symmetric");
  const CellSampler sampler(mu, true);
  const double lift = 2.0 / k;
  const double min_sep = 1.0 / (static_cast<double>(k) * k);
  double last = 0.0;
  for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
    const CounterRng rng(seed, attempt);
    std::vector<cplx> atoms;
    atoms.reserve(k);
    for (int i = 0; i < k / 2; ++i) {
      const std::uint64_t d = 3 * static_cast<std::uint64_t>(i);
      const cplx z = draw(mu, sampler, true, rng.uniform(d), rng.uniform(d + 1), rng.uniform(d + 2));
      atoms.emplace_back(z.real(), std::fabs(z.imag()) + lift);
    }
    for (int i = 0; i < k / 2; ++i) atoms.push_back(std::conj(atoms[i]));
    EmpiricalMeasure out = EmpiricalMeasure::symmetric(atoms);
    last = min_separation(out);
    if (last >= min_sep) return out;
  }
  throw SeparationError("discretize_symmetric: separation " + std::to_string(last) +
                        " below k^-2 after 10 draws");
}

nlohmann::json to_json(const EmpiricalMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const cplx& z : mu.atoms()) atoms.push_back({z.real(), z.imag()});
  return {{"type", "empirical"}, {"atoms", std::move(atoms)}};
}

EmpiricalMeasure empirical_from_json(const nlohmann::json& j) {
  if (j.at("type") != "empirical") throw DomainError("measure JSON: type is not empirical");
  std::vector<cplx> z;
  for (const auto& a : j.at("atoms")) z.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  return EmpiricalMeasure(std::move(z));
}

}  // namespace rpz
