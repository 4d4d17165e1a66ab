#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "rpz/equilibrium.hpp"
#include "rpz/errors.hpp"
#include "rpz/rng.hpp"

using namespace rpz;
using namespace rpz::equilibrium;
constexpr double kPi = std::numbers::pi;
const double kLn2 = std::log(2.0);

namespace {

// (2/pi) integral_0^inf log|x - w^2| / (1 + w^2) dw, split at the singular point.
double oracle_potential(double x) {
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  // at x = 0 the integrand is 2 log w / (1 + w^2); w^2 would underflow near 0
  auto f = [](double w) { return 2 * std::log(w) / (1 + w * w); };
  if (x == 0.0) return 2 / kPi * (ts.integrate(f, 0.0, 1.0) + es.integrate(f, 1.0, std::numeric_limits<double>::infinity()));
  const double s = std::sqrt(x);
  // offset form keeps the singular endpoint exact
  auto left = [&](double u) { return std::log(u * (2 * s - u)) / (1 + (s - u) * (s - u)); };
  auto right = [&](double u) { return std::log(u * (2 * s + u)) / (1 + (s + u) * (s + u)); };
  return 2 / kPi * (ts.integrate(left, 0.0, s) + es.integrate(right, 0.0, std::numeric_limits<double>::infinity()));
}

// mass of (-R, 0) by quadrature in t = sqrt|x|
double oracle_mass(double R) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([](double t) { return 2 / (kPi * (1 + t * t)); }, 0.0, std::sqrt(R));
}

}  // namespace

TEST_SUITE("equilibrium") {
  TEST_CASE("density examples") {
    CHECK(phi_density(-1.0) == doctest::Approx(1 / (2 * kPi)).epsilon(1e-15));
    CHECK(phi_density(0.5) == 0.0);
    CHECK(phi_density(0.0) == 0.0);
    CHECK(phi_density(-0.0) == std::numeric_limits<double>::infinity());
    CHECK(phi_density(-4.0) == doctest::Approx(1 / (kPi * 5 * 2)).epsilon(1e-15));
  }

  TEST_CASE("density integral to R = 1e6") {
    const auto r = density_integral(1e6);
    CHECK(std::fabs(r.value - 1.0) <= 1e-3);
    CHECK(r.value == doctest::Approx(oracle_mass(1e6)).epsilon(1e-10));
    CHECK(r.value < 1.0);
  }

  TEST_CASE("tail bracket and unbounded support") {
    for (double R : {100.0, 1e3, 1e4, 1e6, 1e8}) {
      const double tail = 1.0 - density_integral(R).value;
      CHECK(tail <= 2 / (kPi * std::sqrt(R)) + 1e-12);
      CHECK(tail >= 2 / (kPi * std::sqrt(R)) - 2 / (kPi * R) - 1e-12);
      CHECK(tail_mass(R) == doctest::Approx(tail).epsilon(1e-8));
    }
    for (double R = 1.0; R <= 1e8; R *= 10) CHECK(tail_mass(R) > 0.0);
  }

  TEST_CASE("quantile examples") {
    CHECK(phi_quantile(0.5) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(phi_quantile(1e-9) > -1e-16);
    CHECK(phi_quantile(1e-9) < 0.0);
    CHECK_THROWS_AS(phi_quantile(0.0), DomainError);
    CHECK_THROWS_AS(phi_quantile(1.0), DomainError);
    CHECK_THROWS_AS(phi_quantile(-0.2), DomainError);
  }

  TEST_CASE("property: cdf inverts the quantile") {
    for (int i = 1; i <= 99; ++i) {
      const double q = i / 100.0;
      CHECK(std::fabs(phi_cdf(phi_quantile(q)) - q) <= 1e-10);
      CHECK(standard_cdf(phi_quantile(q)) == doctest::Approx(1 - q).epsilon(1e-12));
    }
  }

  TEST_CASE("closed-form cdf against quadrature") {
    for (double x : {-1e-4, -0.3, -1.0, -2.5, -17.0, -1e3}) {
      CHECK(phi_cdf(x) == doctest::Approx(oracle_mass(-x)).epsilon(1e-12));
    }
    CHECK(phi_cdf(0.5) == 0.0);
  }

  TEST_CASE("Kolmogorov-Smirnov distance of 1e6 quantile samples") {
    constexpr int N = 1000000;
    CounterRng rng(2024, 9);
    std::vector<double> x(N);
    for (int i = 0; i < N; ++i) x[i] = phi_quantile(rng.uniform(i));
    std::sort(x.begin(), x.end());
    double ks = 0;
    for (int i = 0; i < N; ++i) {
      const double F = standard_cdf(x[i]);
      ks = std::max({ks, std::fabs(F - static_cast<double>(i) / N), std::fabs(F - static_cast<double>(i + 1) / N)});
    }
    CHECK(ks <= 0.002);
    // median
    CHECK(x[N / 2] == doctest::Approx(-1.0).epsilon(0.01));
  }

  TEST_CASE("potential residual examples") {
    const auto z = equilibrium_potential_residual(0.0);
    CHECK(std::fabs(z.residual) <= 1e-6);
    CHECK(std::fabs(z.potential - oracle_potential(0.0)) <= 1e-8);
    const auto one = equilibrium_potential_residual(1.0);
    CHECK(std::fabs(one.potential - kLn2) <= 1e-6);
    for (double x : {0.1, 0.5, 2.0, 10.0, 100.0}) {
      CAPTURE(x);
      const auto r = equilibrium_potential_residual(x);
      CHECK(std::fabs(r.residual) <= 1e-5);
      CHECK(r.potential == doctest::Approx(oracle_potential(x)).epsilon(1e-8));
      CHECK(r.abs_error <= 1e-10);
    }
    CHECK_THROWS_AS(equilibrium_potential_residual(-1.0), DomainError);
  }

  TEST_CASE("property: residual on a 50-point log grid") {
    for (double x : log_grid(1e-2, 1e2, 50)) CHECK(std::fabs(equilibrium_potential_residual(x).residual) <= 1e-5);
  }

  TEST_CASE("log grid") {
    const auto g = log_grid(1e-2, 1e2, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == doctest::Approx(1e-2));
    CHECK(g[2] == doctest::Approx(1.0));
    CHECK(g.back() == doctest::Approx(1e2));
  }

  TEST_CASE("variational condition at gamma = 1/2") {
    const auto xs = log_grid(1e-2, 1e2, 50);
    const auto ys = log_grid(1e-3, 1e3, 20);
    const auto rep = variational_residual(0.5, xs, ys);
    CHECK(std::fabs(rep.C) <= 1e-5);
    CHECK(rep.max_residual <= 1e-5);
    CHECK(rep.min_slack >= -1e-5);
    CHECK(rep.residuals.size() == xs.size());
    CHECK(rep.slacks.size() == ys.size());
  }

  TEST_CASE("negative control: uniform density on [0, 1] fails") {
    const auto xs = log_grid(1e-2, 1e2, 50);
    const auto rep = variational_residual(0.5, xs, {}, 1e-10, Candidate::uniform_unit);
    CHECK(rep.max_residual > 0.1);
  }

  TEST_CASE("rate at equilibrium") {
    boost::math::quadrature::exp_sinh<double> es;
    const double first =
        2 / kPi * es.integrate([](double t) { return std::log1p(t * t) / (1 + t * t); }, 0.0, std::numeric_limits<double>::infinity());
    CHECK(first == doctest::Approx(2 * kLn2).epsilon(1e-12));
    const auto r = rate_at_equilibrium();
    CHECK(std::fabs(r.first_term - first) <= 1e-4);
    CHECK(std::fabs(r.energy - 2 * kLn2) <= 1e-3);
    CHECK(std::fabs(r.value - kLn2) <= 1e-3);
    CHECK(r.value == doctest::Approx(r.first_term - r.energy / 2));
  }

  TEST_CASE("Monte Carlo pairwise oracle") {
    const auto mc = monte_carlo_rate(2000000, 77, 2);
    CHECK(mc.samples == 2000000);
    CHECK(std::fabs(mc.value - kLn2) <= 5 * mc.value_se + 1e-4);
    CHECK(mc.value_se < 2e-3);
    const auto again = monte_carlo_rate(2000000, 77, 1);
    CHECK(again.value == mc.value);
  }
}
