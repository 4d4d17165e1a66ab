#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "rpz/errors.hpp"
#include "rpz/experiments.hpp"
#include "rpz/roots.hpp"

using namespace rpz;
using namespace rpz::experiments;
using cplx = std::complex<double>;
const double kLn2 = std::log(2.0);

namespace {

RootConfiguration reals(std::vector<double> x) {
  RootConfiguration c;
  c.degree = static_cast<int>(x.size());
  c.reals = std::move(x);
  return c;
}

// Density of (x1, x2) for n = 2: push the coefficient-space law e^{-(xi0+xi1+xi2)}
// through (x1, x2, xi2) -> xi2 (x1 x2, -(x1 + x2), 1) with a finite-difference
// Jacobian, then integrate xi2 out. Unordered roots, so both orderings count.
double oracle_root_density(double x1, double x2) {
  auto coeffs = [](double a, double b, double l) { return std::array<double, 3>{l * a * b, -l * (a + b), l}; };
  auto integrand = [&](double l) {
    const double h = 1e-6;
    double J[3][3];
    const double v[3] = {x1, x2, l};
    for (int c = 0; c < 3; ++c) {
      double up[3] = {v[0], v[1], v[2]}, dn[3] = {v[0], v[1], v[2]};
      up[c] += h;
      dn[c] -= h;
      const auto fu = coeffs(up[0], up[1], up[2]), fd = coeffs(dn[0], dn[1], dn[2]);
      for (int r = 0; r < 3; ++r) J[r][c] = (fu[r] - fd[r]) / (2 * h);
    }
    const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                       J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                       J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
    const auto xi = coeffs(x1, x2, l);
    return std::exp(-(xi[0] + xi[1] + xi[2])) * std::fabs(det);
  };
  boost::math::quadrature::exp_sinh<double> es;
  return 2 * es.integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
}

// P(xi1^2 > 4 xi0 xi2) = integral e^{-a-b} e^{-2 sqrt(ab)} da db.
double oracle_real_prob_n2() {
  boost::math::quadrature::exp_sinh<double> es;
  auto inner = [&](double a) {
    return es.integrate([a](double b) { return std::exp(-a - b - 2 * std::sqrt(a * b)); }, 0.0,
                        std::numeric_limits<double>::infinity());
  };
  return es.integrate(inner, 0.0, std::numeric_limits<double>::infinity());
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("config validation") {
    CommonConfig c;
    CHECK_NOTHROW(c.validate());
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = CommonConfig{};
    c.n = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = CommonConfig{};
    CHECK(!c.to_json().contains("workers"));
    CHECK(c.to_json()["seed"] == 1);
  }

  TEST_CASE("X_n examples and dual route") {
    CHECK(xn_statistic(Polynomial({1, 1})) == doctest::Approx(kLn2).epsilon(1e-15));
    for (std::uint64_t t = 0; t < 50; ++t) {
      const auto p = sample_exponential_poly(12, 31, t);
      const double x = xn_statistic(p);
      CHECK(x >= 0.0);
      CHECK(std::fabs(xn_from_roots(find_roots(p)) - x) <= 1e-8);
    }
  }

  TEST_CASE("Y_n examples") {
    CHECK(yn_statistic(reals({-1.0, -3.0})) == 0.0);
    CHECK(yn_statistic(reals({1.0 + std::exp(-2.0)})) == doctest::Approx(2.0).epsilon(1e-14));
    // |1 - z| = 1 exactly is excluded
    CHECK(yn_statistic(reals({0.0})) == 0.0);
  }

  TEST_CASE("joint log density examples") {
    CHECK(joint_log_density(reals({-1.0})) == doctest::Approx(-2 * kLn2).epsilon(1e-15));
    RootConfiguration pm;
    pm.degree = 2;
    pm.pairs = {cplx(0, 1)};
    CHECK(joint_log_density(pm) == doctest::Approx(-kLn2).epsilon(1e-14));
    CHECK(joint_log_density(reals({1.0, -2.0})) == -std::numeric_limits<double>::infinity());
    CHECK(joint_log_density(reals({-2.0, -2.0})) == -std::numeric_limits<double>::infinity());
  }

  TEST_CASE("property: joint log density is label invariant") {
    RootConfiguration a;
    a.degree = 7;
    a.pairs = {cplx(-0.3, 0.8), cplx(0.5, 1.7)};
    a.reals = {-0.2, -1.5, -4.0};
    RootConfiguration b = a;
    std::swap(b.pairs[0], b.pairs[1]);
    std::swap(b.reals[0], b.reals[2]);
    CHECK(joint_log_density(a) == doctest::Approx(joint_log_density(b)).epsilon(1e-14));
  }

  TEST_CASE("joint log density ratios match the coefficient-space Jacobian") {
    const double cfgs[][2] = {{-0.5, -2.0}, {-0.1, -0.3}, {-1.0, -7.0}, {-3.0, -4.0}};
    const double base = joint_log_density(reals({cfgs[0][0], cfgs[0][1]}));
    const double base_o = oracle_root_density(cfgs[0][0], cfgs[0][1]);
    for (const auto& c : cfgs) {
      const double ratio = std::exp(joint_log_density(reals({c[0], c[1]})) - base);
      CHECK(ratio == doctest::Approx(oracle_root_density(c[0], c[1]) / base_o).epsilon(1e-6));
    }
  }

  TEST_CASE("tail bound arithmetic") {
    CHECK(xn_tail_bound(6, 0.2) == doctest::Approx(120 * std::exp(-7.2)));
    CHECK(xn_tail_bound(4, 0.3) == doctest::Approx(80 * std::exp(-4.8)));
    CHECK(xn_tail_bound(2, 0.1) > 1.0);
  }

  TEST_CASE("X_n tail experiments") {
    XnTailConfig six;
    six.common.emit_rows = false;
    const auto r6 = xn_tail_experiment(six);
    CHECK(r6.passed());
    CHECK(r6.summary["frequency"]["hi"].get<double>() <= 120 * std::exp(-7.2));
    XnTailConfig four;
    four.common.n = 4;
    four.B = 0.3;
    four.common.emit_rows = false;
    CHECK(xn_tail_experiment(four).summary["frequency"]["hi"].get<double>() <= 80 * std::exp(-4.8));
    XnTailConfig two;
    two.common.n = 2;
    two.common.trials = 1000;
    two.B = 0.1;
    const auto r2 = xn_tail_experiment(two);
    CHECK(r2.summary["vacuous"] == true);
    bool warned = false;
    for (const auto& w : r2.warnings) warned = warned || w.find("vacuous") != std::string::npos;
    CHECK(warned);
  }

  TEST_CASE("LDP statistics on 500 degree-64 samples") {
    LdpStatsConfig c;
    c.common.workers = 2;
    const auto r = ldp_statistics(c);
    CHECK(r.passed());
    for (const auto& g : r.gates) {
      CAPTURE(g.name);
      CHECK(g.passed);
    }
    CHECK(r.summary["nonnegative_roots"] == 0);
    CHECK(r.rows.size() == 500);
  }

  TEST_CASE("circle convergence with pilot thresholds") {
    CircleConfig c;
    c.common.workers = 2;
    const auto r = circle_convergence_experiment(c);
    for (const auto& g : r.gates) {
      CAPTURE(g.name);
      CHECK(g.passed);
    }
  }

  TEST_CASE("all roots real") {
    CHECK(all_roots_real(Polynomial({1, 3, 1})));
    CHECK(!all_roots_real(Polynomial({1, 1, 1})));
    // double root: discriminant exactly 0 counts as real
    CHECK(all_roots_real(Polynomial({1, 2, 1})));
    CHECK(all_roots_real(Polynomial({6, 11, 6, 1})));
    CHECK(!all_roots_real(Polynomial({1, 1, 1, 1})));
    CHECK(all_roots_real(Polynomial({24, 50, 35, 10, 1})));
    CHECK(!all_roots_real(Polynomial({1, 0.1, 1, 0.1, 1})));
  }

  TEST_CASE("all-real probability") {
    RealProbConfig one;
    one.common.n = 1;
    one.common.trials = 1000;
    CHECK(all_real_probability(one).summary["probability"]["estimate"] == 1.0);

    const double oracle = oracle_real_prob_n2();
    CHECK(oracle == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    RealProbConfig two;
    two.common.emit_rows = false;
    const auto r = all_real_probability(two);
    CHECK(r.summary["probability"]["lo"].get<double>() <= oracle);
    CHECK(r.summary["probability"]["hi"].get<double>() >= oracle);

    for (int n : {3, 4}) {
      RealProbConfig c;
      c.common.n = n;
      c.common.trials = 20000;
      c.common.emit_rows = false;
      const auto rn = all_real_probability(c);
      CHECK((rn.summary.contains("neg_log2_p_over_n2") || rn.summary.contains("neg_log2_p_over_n2_lower")));
    }
  }

  TEST_CASE("conditioned profile") {
    ConditionedConfig c;
    c.common.trials = 20000;
    const auto r = conditioned_real_profile(c);
    CHECK(r.passed());
    CHECK(r.summary["max_root"].get<double>() < 0.0);
    CHECK(r.summary["reference_median"] == -1.0);
    for (const auto& row : r.rows) CHECK(row[2].get<double>() < 0.0);
    ConditionedConfig big;
    big.common.n = 6;
    CHECK_THROWS_AS(conditioned_real_profile(big), DomainError);
    ConditionedConfig few;
    few.common.trials = 10;
    bool flagged = false;
    for (const auto& w : conditioned_real_profile(few).warnings) flagged = flagged || w.find("insufficient") != std::string::npos;
    CHECK(flagged);
  }

  TEST_CASE("reports are byte-identical across runs and worker counts") {
    LdpStatsConfig a;
    a.common.n = 24;
    a.common.trials = 40;
    a.common.workers = 1;
    LdpStatsConfig b = a;
    b.common.workers = 3;
    CHECK(to_json_string(ldp_statistics(a)) == to_json_string(ldp_statistics(b)));
    CHECK(to_csv(ldp_statistics(a)) == to_csv(ldp_statistics(b)));
    RealProbConfig r;
    r.common.n = 4;
    r.common.trials = 3000;
    RealProbConfig r3 = r;
    r3.common.workers = 3;
    CHECK(to_json_string(all_real_probability(r)) == to_json_string(all_real_probability(r3)));
  }
}
