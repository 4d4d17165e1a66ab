#include "rpz/class_p.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rpz/errors.hpp"
#include "rpz/parallel.hpp"

namespace rpz {

using cplx = std::complex<double>;

ConeSpec::ConeSpec(double alpha_) : alpha(alpha_) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi)) throw DomainError("ConeSpec: need 0 < alpha < pi");
}

ObrechkoffResult obrechkoff_mass(const EmpiricalMeasure& mu, const ConeSpec& cone) {
  std::size_t inside = 0;
  for (const cplx& z : mu.atoms())
    if (std::fabs(std::arg(z)) <= cone.alpha) ++inside;
  ObrechkoffResult r;
  r.mass = static_cast<double>(inside) / static_cast<double>(mu.size());
  r.bound = 2.0 * cone.alpha / std::numbers::pi;
  r.ok = r.mass <= r.bound + 1e-12;
  return r;
}

NearOneTail near_one_tail(const EmpiricalMeasure& mu, double M) {
  if (!(M > 0.0)) throw DomainError("near_one_tail: M must be > 0");
  std::size_t count = 0;
  double integral = 0.0;
  for (const cplx& z : mu.atoms()) {
    const double d = std::abs(1.0 - z);
    const double l = d == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(d);
    if (l <= -M) {
      ++count;
      integral += -l;
    }
  }
  const double k = static_cast<double>(mu.size());
  return {static_cast<double>(count) / k, integral / k};
}

double near_one_budget(double M) {
  if (!(M > 0.0)) throw DomainError("near_one_budget: M must be > 0");
  const double J = std::ceil(M);
  const double x = std::exp(-1.0);
  return 4.0 * std::exp(-J) * (J - (J - 1.0) * x) / ((1.0 - x) * (1.0 - x));
}

namespace {

template <class Potential>
MembershipVerdict scan_bes(Potential&& potential, double min_mod, double max_mod,
                           std::span<const double> radii, std::span<const double> angles,
                           const BesPolicy& policy, int workers) {
  if (radii.empty() || angles.empty()) throw DomainError("bes_condition: empty grid");
  for (double t : angles)
    if (!(t > 0.0 && t <= std::numbers::pi)) throw DomainError("bes_condition: angles must lie in (0, pi]");
  for (double r : radii)
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("bes_condition: radii must be positive");

  struct Row {
    double max_d = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
  };
  std::vector<Row> rows(radii.size());
  parallel_for(radii.size(), workers, [&](std::size_t i) {
    const double r = radii[i];
    const double base = potential(cplx(r, 0.0));
    Row row;
    for (std::size_t j = 0; j < angles.size(); ++j) {
      const double lz = potential(std::polar(r, angles[j]));
      double d;
      if (base == -std::numeric_limits<double>::infinity())
        d = lz == base ? 0.0 : std::numeric_limits<double>::infinity();
      else
        d = lz - base;
      if (d > row.max_d) {
        row.max_d = d;
        row.arg = j;
      }
    }
    rows[i] = row;
  });
  double max_d = -std::numeric_limits<double>::infinity();
  std::size_t ai = 0, aj = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].max_d > max_d) {
      max_d = rows[i].max_d;
      ai = i;
      aj = rows[i].arg;
    }

  std::vector<double> distinct(angles.begin(), angles.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto [rlo, rhi] = std::minmax_element(radii.begin(), radii.end());
  const double need_lo = min_mod > 0.0 ? 0.5 * min_mod : *rlo;
  const double need_hi = 2.0 * max_mod;
  const bool policy_met = static_cast<int>(distinct.size()) >= policy.min_angles &&
                          static_cast<int>(radii.size()) >= policy.min_radii &&
                          *rlo <= need_lo && *rhi >= need_hi;

  MembershipVerdict v;
  v.margin = -max_d;
  if (max_d > policy.outside_tol)
    v.verdict = Verdict::verified_outside;
  else if (max_d < -policy.margin_floor && policy_met)
    v.verdict = Verdict::verified_inside;
  else
    v.verdict = Verdict::inconclusive;

  auto& e = v.evidence;
  e["max_D"] = max_d;
  e["argmax_r"] = radii[ai];
  e["argmax_theta"] = angles[aj];
  e["radii"] = radii.size();
  e["angles"] = distinct.size();
  e["radius_range"] = {*rlo, *rhi};
  e["required_radius_range"] = {need_lo, need_hi};
  e["policy_met"] = policy_met;
  if (!policy_met)
    e["hint"] = "need >= " + std::to_string(policy.min_angles) + " angles in (0, pi] and >= " +
                std::to_string(policy.min_radii) + " radii covering the required radius range";
  return v;
}

}  // namespace

MembershipVerdict bes_condition(const EmpiricalMeasure& mu, std::span<const double> radii,
                                std::span<const double> angles, const BesPolicy& policy,
                                int workers) {
  const EmpiricalMeasure sym = mu.is_symmetric() ? mu : EmpiricalMeasure::symmetric(mu.atoms());
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const cplx& w : sym.atoms()) {
    const double a = std::abs(w);
    if (a > 0.0) lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (!std::isfinite(lo)) lo = 0.0;
  return scan_bes([&](cplx z) { return log_potential(sym, z); }, lo, hi, radii, angles, policy,
                  workers);
}

MembershipVerdict bes_condition(const GridDensityMeasure& mu, std::span<const double> radii,
                                std::span<const double> angles, const BesPolicy& policy,
                                int workers) {
  if (!mu.conjugate_symmetric()) throw SymmetryError("bes_condition: measure is not conjugate-symmetric");
  return scan_bes([&](cplx z) { return log_potential(mu, z); }, mu.min_modulus(), mu.max_modulus(),
                  radii, angles, policy, workers);
}

BesGrid default_bes_grid(double min_modulus, double max_modulus) {
  BesGrid g;
  const double lo = 0.5 * (min_modulus > 0.0 ? min_modulus : 1e-3);
  const double hi = 2.0 * std::max(max_modulus, lo);
  constexpr int nr = 64;
  for (int i = 0; i < nr; ++i) g.radii.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (nr - 1)));
  g.radii.front() = lo;
  g.radii.back() = hi;
  constexpr int na = 128;
  for (int j = 1; j <= na; ++j) g.angles.push_back(std::numbers::pi * j / na);
  return g;
}

namespace {

void require_endpoints(std::span<const mpq_class> c, const char* who) {
  if (c.empty() || sgn(c.front()) <= 0 || sgn(c.back()) <= 0)
    throw PreconditionError(std::string(who) + ": requires a_0 > 0 and a_d > 0");
}

}  // namespace

std::optional<int> de_angelis_smallest_m(const ExactPolynomial& p, int m_max) {
  if (m_max < 1) throw DomainError("de_angelis_smallest_m: m_max must be >= 1");
  require_endpoints(p.coefficients(), "de_angelis_smallest_m");
  // Clearing denominators keeps signs and turns the loop into integer arithmetic.
  mpz_class lcm = 1;
  for (const mpq_class& c : p.coefficients()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> base;
  for (const mpq_class& c : p.coefficients()) base.push_back(mpz_class(c * lcm));
  std::vector<mpz_class> q = base;
  for (int m = 1;; ++m) {
    if (std::all_of(q.begin(), q.end(), [](const mpz_class& c) { return sgn(c) > 0; })) return m;
    if (m == m_max) return std::nullopt;
    std::vector<mpz_class> next(q.size() + base.size() - 1, 0);
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (sgn(q[i]) == 0) continue;
      for (std::size_t j = 0; j < base.size(); ++j)
        if (sgn(base[j]) != 0) next[i + j] += q[i] * base[j];
    }
    q = std::move(next);
  }
}

namespace {

double horner_real(std::span<const double> c, double x) {
  double s = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) s = s * x + c[j];
  return s;
}

double horner_abs(std::span<const double> c, cplx z) {
  cplx s = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) s = s * z + c[j];
  return std::abs(s);
}

}  // namespace

ConditionIII de_angelis_condition_iii(const Polynomial& p, const DeAngelisGrid& grid, int workers) {
  const auto c = p.coefficients();
  const int d = p.degree();
  if (d < 1 || !(c[0] > 0.0) || !(c[d] > 0.0))
    throw PreconditionError("de_angelis_condition_iii: requires degree >= 1, a_0 > 0 and a_d > 0");
  if (grid.radii < 2 || grid.angles < 1 || !(grid.r_min > 0.0) || !(grid.r_max > grid.r_min))
    throw DomainError("de_angelis_condition_iii: bad grid");

  ConditionIII out;
  out.a1_positive = c[1] > 0.0;
  out.ad1_positive = c[d - 1] > 0.0;
  // The inequality is scanned even when a coefficient test already failed, so a
  // witness is reported whenever one exists.
  const bool coeffs_ok = out.a1_positive && out.ad1_positive;
  if (!coeffs_ok) out.reason = !out.a1_positive ? "a_1 <= 0" : "a_{d-1} <= 0";

  const double lu0 = std::log(grid.r_min);
  const double du = (std::log(grid.r_max) - lu0) / (grid.radii - 1);
  const double dth = std::numbers::pi / grid.angles;
  // gap = 1 - |f(z)|/f(|z|); +inf-like sentinel when f(|z|) <= 0
  auto gap_at = [&](double u, double th) {
    const double r = std::exp(u);
    const double fr = horner_real(c, r);
    if (!(fr > 0.0)) return -1.0;
    return 1.0 - horner_abs(c, std::polar(r, th)) / fr;
  };

  struct Row {
    std::optional<int> violation;  // angle index
    double gap = 0.0;
    double best_q = std::numeric_limits<double>::infinity();
    int best_j = 1;
  };
  std::vector<Row> rows(grid.radii);
  parallel_for(static_cast<std::size_t>(grid.radii), workers, [&](std::size_t i) {
    const double u = lu0 + du * static_cast<double>(i);
    Row row;
    for (int j = 1; j <= grid.angles; ++j) {
      const double th = dth * j;
      const double gap = gap_at(u, th);
      if (gap <= grid.rel_tol) {
        row.violation = j;
        row.gap = gap;
        break;
      }
      const double q = gap / (1.0 - std::cos(th));
      if (q < row.best_q) {
        row.best_q = q;
        row.best_j = j;
      }
    }
    rows[i] = row;
  });

  for (int i = 0; i < grid.radii; ++i)
    if (rows[i].violation) {
      out.ok = false;
      out.witness = std::polar(std::exp(lu0 + du * i), dth * *rows[i].violation);
      out.witness_gap = rows[i].gap;
      if (coeffs_ok) out.reason = "sampled |f(z)| >= f(|z|)";
      return out;
    }

  // Refine the rows whose normalized gap is smallest.
  std::vector<int> order(grid.radii);
  for (int i = 0; i < grid.radii; ++i) order[i] = i;
  const int k = std::min(grid.refine_candidates, grid.radii);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int a, int b) { return rows[a].best_q < rows[b].best_q ||
                                               (rows[a].best_q == rows[b].best_q && a < b); });
  const double th_min = dth;
  auto q_at = [&](double u, double th) {
    const double g = gap_at(u, th);
    return g / (1.0 - std::cos(th));
  };
  for (int n = 0; n < k; ++n) {
    const int i = order[n];
    double u = lu0 + du * i;
    double th = dth * rows[i].best_j;
    double best = q_at(u, th);
    double su = du, st = dth;
    for (int it = 0; it < 4000 && (su > 1e-15 || st > 1e-15); ++it) {
      bool moved = false;
      const double cand[4][2] = {{u + su, th}, {u - su, th}, {u, th + st}, {u, th - st}};
      for (const auto& cd : cand) {
        const double cu = std::clamp(cd[0], lu0 - du, lu0 + du * grid.radii);
        const double ct = std::clamp(cd[1], th_min, std::numbers::pi);
        const double v = q_at(cu, ct);
        if (v < best) {
          best = v;
          u = cu;
          th = ct;
          moved = true;
          break;
        }
      }
      if (!moved) {
        su *= 0.5;
        st *= 0.5;
      }
    }
    const double g = gap_at(u, th);
    if (g <= grid.rel_tol) {
      out.ok = false;
      out.witness = std::polar(std::exp(u), th);
      out.witness_gap = g;
      if (coeffs_ok) out.reason = "refined |f(z)| >= f(|z|)";
      return out;
    }
  }
  out.ok = coeffs_ok;
  if (coeffs_ok) out.reason = "strict inequality held on the grid";
  return out;
}

std::vector<ExactPolynomial> de_angelis_corpus() {
  const std::vector<std::vector<long>> rows = {
      // all coefficients positive
      {1, 1, 1}, {2, 1, 3}, {1, 3, 3, 1}, {1, 1, 1, 1, 1}, {3, 1, 4, 1, 5},
      {1, 2, 3, 4, 5, 6}, {6, 5, 4, 3, 2, 1, 1}, {1, 1, 2, 3, 5, 8, 13},
      {2, 7, 1, 8, 2, 8, 1, 8}, {1, 8, 28, 56, 70, 56, 28, 8, 1},
      // binomial rows with one middle coefficient replaced by -t
      {1, 4, -1, 4, 1}, {1, 4, -2, 4, 1}, {1, 4, -3, 4, 1},
      {1, 5, -1, 10, 5, 1}, {1, 5, -2, 10, 5, 1}, {1, 5, -3, 10, 5, 1}, {1, 5, 10, -3, 5, 1},
      {1, 5, -4, 10, 5, 1},
      {1, 6, 15, -10, 15, 6, 1}, {1, 6, 15, -15, 15, 6, 1}, {1, 6, -8, 20, 15, 6, 1},
      {1, 6, -3, 20, 15, 6, 1},
      {1, 7, 21, -20, 35, 21, 7, 1}, {1, 7, -3, 35, 35, 21, 7, 1}, {1, 7, 21, 35, 35, -3, 7, 1},
      {1, 8, 28, 56, -40, 56, 28, 8, 1}, {1, 8, -3, 56, 70, 56, 28, 8, 1},
      {1, 8, 28, 56, 70, 56, -3, 8, 1}, {1, 8, 28, 56, -1, 56, 28, 8, 1},
      {1, 8, 28, -2, 70, 56, 28, 8, 1},
      // polynomials in z^2 or z^3
      {1, 0, 1}, {1, 0, 1, 0, 1}, {2, 0, 1, 0, 3}, {1, 0, 0, 1}, {1, 0, 0, 2, 0, 0, 1},
      // a_1 <= 0 or a_{d-1} <= 0
      {1, -1, 1}, {2, 0, 1, 1}, {1, -1, 4, 4, 1}, {1, 3, 3, -1, 1}, {1, 2, 2, 0, 1},
      // two positive real roots
      {20, 92, -1, -181, 62, 8}, {36, 231, -437, 154, 16}, {120, 1226, 2581, -2654, 461, 30},
      {120, 2134, 9011, -4232, -9211, 2098, 80}, {6, 13, -76, 47, 10},
      // (2 - 3z + 2z^2)(1 + z)^k and (1 - z + z^2)(1 + z)^2
      {2, 1, -2, 1, 2}, {2, 3, -1, -1, 3, 2}, {2, 5, 2, -2, 2, 5, 2}, {2, 7, 7, 0, 0, 7, 7, 2},
      {1, 1, 0, 1, 1},
  };
  std::vector<ExactPolynomial> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(ExactPolynomial::from_integers(r));
  return out;
}

bool bnk_membership(const RootConfiguration& cfg) {
  std::vector<mpq_class> acc{mpq_class(1)};
  auto multiply = [&](const std::vector<mpq_class>& f) {
    std::vector<mpq_class> next(acc.size() + f.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) next[i + j] += acc[i] * f[j];
    acc = std::move(next);
  };
  for (const cplx& z : cfg.pairs) {
    if (!(z.imag() > 0.0)) throw SymmetryError("bnk_membership: pair representative not in upper half-plane");
    const mpq_class a(z.real()), b(z.imag());
    multiply({a * a + b * b, -2 * a, mpq_class(1)});
  }
  for (double x : cfg.reals) multiply({mpq_class(-x), mpq_class(1)});

  double max_abs = 0.0;
  for (const mpq_class& c : acc) max_abs = std::max(max_abs, std::fabs(c.get_d()));
  const double guard = 1e-10 * max_abs;
  bool zero = false;
  std::optional<std::size_t> near;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const int s = sgn(acc[i]);
    const double v = acc[i].get_d();
    if (s == 0) {
      zero = true;
    } else if (std::fabs(v) <= guard) {
      if (!near) near = i;
    } else if (s < 0) {
      return false;
    }
  }
  if (zero) return false;
  if (near)
    throw InconclusiveError("bnk_membership: coefficient inside the guard band", *near,
                            acc[*near].get_d(), guard);
  return true;
}

nlohmann::ordered_json to_json(const MembershipVerdict& v) {
  nlohmann::ordered_json j;
  j["verdict"] = std::string(verdict_name(v.verdict));
  j["margin"] = v.margin;
  j["evidence"] = v.evidence;
  return j;
}

}  // namespace rpz
