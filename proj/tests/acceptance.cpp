// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "oracles.hpp"
#include "rpz/class_p.hpp"
#include "rpz/equilibrium.hpp"
#include "rpz/experiments.hpp"
#include "rpz/measures.hpp"
#include "rpz/parallel.hpp"
#include "rpz/polynomial.hpp"
#include "rpz/rng.hpp"
#include "rpz/roots.hpp"

using namespace rpz;
using cplx = std::complex<double>;

namespace {

const double kLn2 = std::log(2.0);
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int workers() { return default_workers(); }

Outcome potential_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (double x : equilibrium::log_grid(1e-2, 1e2, 50))
    worst = std::max(worst, std::fabs(equilibrium::equilibrium_potential_residual(x).residual));
  const double t = seconds_since(t0);
  return {worst <= 1e-5 && t <= 10.0, fmt("max residual %.3g over 50 points, %.2f s", worst, t)};
}

Outcome rate_at_equilibrium() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto q = equilibrium::rate_at_equilibrium();
  const auto mc = equilibrium::monte_carlo_rate(10000000, 20240601, workers());
  const double t = seconds_since(t0);
  const bool ok = std::fabs(q.value - kLn2) <= 1e-3 && std::fabs(mc.value - kLn2) <= 5e-3 && t <= 120.0;
  return {ok, fmt("quadrature I_R = %.10f, Monte Carlo %.6f (se %.1e, 1e7 samples), log 2 = %.10f, %.1f s", q.value,
                  mc.value, mc.value_se, kLn2, t)};
}

Outcome variational() {
  const auto xs = equilibrium::log_grid(1e-2, 1e2, 50);
  const auto ys = equilibrium::log_grid(1e-3, 1e3, 20);
  const auto rep = equilibrium::variational_residual(0.5, xs, ys);
  const auto ctl = equilibrium::variational_residual(0.5, xs, {}, 1e-10, equilibrium::Candidate::uniform_unit);
  const bool ok = std::fabs(rep.C) <= 1e-5 && rep.max_residual <= 1e-5 && ctl.max_residual > 0.1;
  return {ok, fmt("C = %.3g, max residual %.3g, negative control residual %.3g", rep.C, rep.max_residual,
                  ctl.max_residual)};
}

Outcome obrechkoff() {
  const auto t0 = std::chrono::steady_clock::now();
  const int degrees[] = {8, 32, 64, 128};
  constexpr int per_degree = 1000;
  std::vector<int> violations(4 * per_degree, 0);
  parallel_for(violations.size(), workers(), [&](std::size_t i) {
    const int n = degrees[i / per_degree];
    const auto mu = EmpiricalMeasure::from_roots(find_roots(sample_exponential_poly(n, 4000 + n, i % per_degree)));
    for (int j = 1; j <= 15; ++j) violations[i] += !obrechkoff_mass(mu, ConeSpec(kPi * j / 16)).ok;
  });
  int total = 0;
  for (int v : violations) total += v;
  const double t = seconds_since(t0);
  return {total == 0 && t <= 60.0,
          fmt("%d violations over %d polynomials x 15 angles (degrees 8/32/64/128), %.1f s", total, 4 * per_degree, t)};
}

Outcome rate_minimality() {
  double worst = 0;
  for (int k : {8, 64, 512}) {
    // z^k + 1 has nonnegative coefficients, so its zero measure lies in the class
    const auto r = rate_function(rotated_roots_of_unity(k), Verdict::verified_inside);
    const double closed = kLn2 / k - std::log(static_cast<double>(k)) / (2.0 * k);
    worst = std::max(worst, std::fabs(r.value - closed));
  }
  const double big = rate_function(rotated_roots_of_unity(1 << 14), Verdict::verified_inside).value;
  experiments::LdpStatsConfig c;
  c.common.n = 64;
  c.common.trials = 500;
  c.common.workers = workers();
  c.common.emit_rows = false;
  const auto rep = experiments::ldp_statistics(c);
  const double min_rate = rep.summary["rate"]["min"].get<double>();
  const bool ok = worst <= 1e-10 && std::fabs(big) < 1e-3 && min_rate >= -1e-8 &&
                  rep.summary["certified"].get<std::uint64_t>() == 500;
  return {ok, fmt("closed-form error %.3g for k = 8/64/512, I at k = 16384: %.3g, min I(L_n) over 500 trials %.4g",
                  worst, big, min_rate)};
}

Outcome xn_dual_route() {
  experiments::LdpStatsConfig c;
  c.common.n = 12;
  c.common.trials = 100;
  c.common.workers = workers();
  c.common.emit_rows = false;
  const auto rep = experiments::ldp_statistics(c);
  const double max_diff = rep.summary["dual_diff"]["max"].get<double>();
  const auto certified = rep.summary["certified"].get<std::uint64_t>();
  return {max_diff <= 1e-8 && certified == 100, fmt("max |difference| %.3g on %llu certified trials", max_diff,
                                                     static_cast<unsigned long long>(certified))};
}

Outcome xn_tail() {
  experiments::XnTailConfig c;
  c.common.workers = workers();
  c.common.emit_rows = false;
  const auto rep = experiments::xn_tail_experiment(c);
  const double hi = rep.summary["frequency"]["hi"].get<double>();
  return {hi <= 0.0897 && rep.passed(), fmt("n = 6, B = 0.2, 1e5 trials: frequency %.5g, 99%% upper %.5g <= %.5g",
                                            rep.summary["frequency"]["estimate"].get<double>(), hi,
                                            experiments::xn_tail_bound(6, 0.2))};
}

Outcome real_probability() {
  boost::math::quadrature::exp_sinh<double> es;
  const double inf = std::numeric_limits<double>::infinity();
  const double oracle = es.integrate(
      [&](double a) { return es.integrate([a](double b) { return std::exp(-a - b - 2 * std::sqrt(a * b)); }, 0.0, inf); },
      0.0, inf);
  experiments::RealProbConfig c;
  c.common.trials = 1000000;
  c.common.workers = workers();
  c.common.emit_rows = false;
  const auto rep = experiments::all_real_probability(c);
  const auto& p = rep.summary["probability"];
  const double lo = p["lo"], hi = p["hi"];
  return {lo <= oracle && oracle <= hi,
          fmt("p = %.6f, 99%% interval [%.6f, %.6f], oracle %.10f", p["estimate"].get<double>(), lo, hi, oracle)};
}

Outcome de_angelis() {
  const auto corpus = de_angelis_corpus();
  std::vector<int> mismatch(corpus.size(), 0);
  parallel_for(corpus.size(), workers(), [&](std::size_t i) {
    const bool power = de_angelis_smallest_m(corpus[i], 200).has_value();
    const bool iii = de_angelis_condition_iii(corpus[i].to_double()).ok;
    mismatch[i] = power != iii;
  });
  int total = 0;
  for (int m : mismatch) total += m;
  const bool no_m = !de_angelis_smallest_m(ExactPolynomial::from_integers(std::vector<long>{1, 0, 1}), 200);
  return {total == 0 && no_m && corpus.size() == 50,
          fmt("%d discrepancies on %zu polynomials; 1 + z^2: %s", total, corpus.size(), no_m ? "no m" : "m found")};
}

Outcome inversion() {
  double worst = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    CounterRng r(s, 1010);
    std::vector<cplx> z;
    for (int i = 0; i < 50; ++i) z.push_back(std::polar(0.05 + 4.0 * r.uniform(2 * i), 2 * kPi * r.uniform(2 * i + 1)));
    const EmpiricalMeasure mu(z);
    // atomic form: the (k-1)/k factor comes from dropping the diagonal in Sigma_a
    const double k = 50;
    double log0 = 0;
    for (auto w : z) log0 += std::log(std::abs(w)) / k;
    const double rhs = discrete_log_energy(mu).value - 2 * (k - 1) / k * log0;
    worst = std::max(worst, std::fabs(discrete_log_energy(invert(mu)).value - rhs));
  }
  return {worst <= 1e-10, fmt("max deviation %.3g over 100 measures of 50 atoms", worst)};
}

Outcome discretization() {
  const auto circle = GridDensityMeasure::uniform_circle();
  constexpr int k = 2000;
  double worst_energy = 0, worst_ratio = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto nu = discretize_symmetric(circle, k, s);
    worst_energy = std::max(worst_energy, std::fabs(discrete_log_energy(nu).value));
    worst_ratio = std::min(worst_ratio, min_separation(nu) * k * k);
  }
  return {worst_energy <= 0.05 && worst_ratio >= 1.0,
          fmt("k = 2000, 20 seeds: max |Sigma_a| %.4f, min separation %.3g k^-2", worst_energy, worst_ratio)};
}

Outcome root_finder() {
  const int degrees[] = {1, 2, 3, 5, 8, 16, 32, 64, 100, 128, 200, 256};
  constexpr int seeds = 100;
  std::vector<double> worst(std::size(degrees) * seeds, 0.0);
  std::vector<int> bad(worst.size(), 0);
  parallel_for(worst.size(), workers(), [&](std::size_t i) {
    const int n = degrees[i / seeds];
    const auto p = sample_exponential_poly(n, i % seeds, 7);
    const auto cfg = find_roots(p);
    for (const cplx& z : cfg.all_roots()) {
      worst[i] = std::max(worst[i], oracle::backward_error(p.coefficients(), z));
      bad[i] += z.imag() == 0.0 && z.real() >= 0.0;
    }
    bad[i] += static_cast<int>(cfg.all_roots().size()) != n;
  });
  double w = 0;
  int b = 0;
  for (std::size_t i = 0; i < worst.size(); ++i) {
    w = std::max(w, worst[i]);
    b += bad[i];
  }
  return {w <= 1e-10 && b == 0, fmt("degrees 1..256 x 100 seeds: max backward error %.3g (50-digit check), %d roots on "
                                    "[0, inf) or missing",
                                    w, b)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"equilibrium potential identity", potential_identity},
      {"rate at equilibrium", rate_at_equilibrium},
      {"variational characterization", variational},
      {"Obrechkoff cone bound", obrechkoff},
      {"rate-function minimality", rate_minimality},
      {"X_n dual-route identity", xn_dual_route},
      {"X_n tail gate", xn_tail},
      {"all-real probability n = 2", real_probability},
      {"De Angelis consistency", de_angelis},
      {"inversion energy identity", inversion},
      {"symmetrized discretization", discretization},
      {"root finder certification", root_finder},
  };
  int failed = 0, idx = 0;
  for (const auto& [name, run] : criteria) {
    ++idx;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", idx, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
