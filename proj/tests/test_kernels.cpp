#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "oracles.hpp"
#include "rpz/kernels.hpp"
#include "rpz/quadrature.hpp"
#include "rpz/rng.hpp"

using namespace rpz;
using cplx = std::complex<double>;
namespace k = rpz::kernels;

namespace {

struct Cloud {
  std::vector<double> re, im;
  k::PointsView view() const { return {re, im}; }
};

Cloud cloud(std::size_t n, std::uint64_t seed, double log_spread) {
  CounterRng r(seed, 0);
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::exp(log_spread * (2.0 * r.uniform(2 * i) - 1.0));
    const double a = 2.0 * std::numbers::pi * r.uniform(2 * i + 1);
    c.re.push_back(m * std::cos(a));
    c.im.push_back(m * std::sin(a));
  }
  return c;
}

double ref_sum(const Cloud& c, cplx z) {
  long double s = 0;
  for (std::size_t i = 0; i < c.re.size(); ++i) s += std::log(static_cast<long double>(std::abs(z - cplx(c.re[i], c.im[i]))));
  return static_cast<double>(s);
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar backend is always available") {
    CHECK(k::backend_available(k::Backend::scalar));
    CHECK(k::available_backends().front() == k::Backend::scalar);
    CHECK(k::backend_name(k::Backend::avx2) == "avx2");
  }

  TEST_CASE("every backend matches the long-double reference") {
    const std::size_t sizes[] = {0, 1, 3, 4, 7, 64, 1001};
    const double spreads[] = {0.1, 3.0, 40.0};
    for (k::Backend b : k::available_backends()) {
      CAPTURE(k::backend_name(b));
      const auto& t = k::table(b);
      for (std::size_t n : sizes)
        for (double sp : spreads) {
          const Cloud c = cloud(n, n * 7 + 1, sp);
          for (int q = 0; q < 10; ++q) {
            const cplx z = std::polar(std::exp(sp * (q / 5.0 - 1.0)), 0.3 + 0.5 * q);
            const double ref = ref_sum(c, z);
            const double got = t.sum_log_distance(c.view(), z);
            CHECK(std::fabs(got - ref) <= 1e-13 * (1.0 + std::fabs(ref)) + 1e-14 * n * sp);
            long double rc = 0;
            for (std::size_t i = 0; i < n; ++i)
              rc += std::log(static_cast<long double>(std::abs(z - cplx(c.re[i], c.im[i])))) +
                    std::log(static_cast<long double>(std::abs(z - cplx(c.re[i], -c.im[i]))));
            const double gc = t.sum_log_distance_conj(c.view(), z);
            CHECK(std::fabs(gc - static_cast<double>(rc)) <= 2e-13 * (1.0 + std::fabs(static_cast<double>(rc))) + 2e-14 * n * sp);
          }
        }
    }
  }

  TEST_CASE("SIMD equals scalar to rounding on the same inputs") {
    const auto& s = k::table(k::Backend::scalar);
    for (k::Backend b : k::available_backends()) {
      if (b == k::Backend::scalar) continue;
      CAPTURE(k::backend_name(b));
      const auto& t = k::table(b);
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Cloud c = cloud(257 + seed, seed, 5.0);
        const cplx z(0.1 * seed - 1.0, 0.05 * seed);
        const double a = s.sum_log_distance(c.view(), z), bb = t.sum_log_distance(c.view(), z);
        CHECK(std::fabs(a - bb) <= 1e-13 * (1.0 + std::fabs(a)));
        const double ac = s.sum_log_distance_conj(c.view(), z), bc = t.sum_log_distance_conj(c.view(), z);
        CHECK(std::fabs(ac - bc) <= 1e-13 * (1.0 + std::fabs(ac)));
        CHECK(t.sum_log_distance_conj(c.view(), std::conj(z)) == bc);
        std::vector<double> x(c.re), y(c.im);
        const double d1 = s.sum_log_abs_diff(x, y), d2 = t.sum_log_abs_diff(x, y);
        CHECK(std::fabs(d1 - d2) <= 1e-13 * (1.0 + std::fabs(d1)));
      }
    }
  }

  TEST_CASE("extreme magnitudes fall back without overflow") {
    for (k::Backend b : k::available_backends()) {
      CAPTURE(k::backend_name(b));
      const auto& t = k::table(b);
      Cloud c;
      for (double m : {1e-300, 1e-200, 1e200, 1e300, 1.0, 2.0, 1e-150, 1e150, 3.0}) {
        c.re.push_back(m);
        c.im.push_back(0.0);
      }
      const cplx z(0.0, 1e-250);
      CHECK(t.sum_log_distance(c.view(), z) == doctest::Approx(ref_sum(c, z)).epsilon(1e-13));
    }
  }

  TEST_CASE("hitting an atom gives -inf") {
    for (k::Backend b : k::available_backends()) {
      const Cloud c = cloud(9, 2, 1.0);
      const cplx z(c.re[5], c.im[5]);
      CHECK(k::table(b).sum_log_distance(c.view(), z) == -std::numeric_limits<double>::infinity());
      std::vector<double> x{1, 2, 3, 4, 5}, y{0, 0, 3, 0, 0};
      CHECK(k::table(b).sum_log_abs_diff(x, y) == -std::numeric_limits<double>::infinity());
    }
  }

  TEST_CASE("dispatch follows set_active_backend") {
    const k::Backend saved = k::active_backend();
    const Cloud c = cloud(100, 4, 2.0);
    const cplx z(0.2, 0.3);
    for (k::Backend b : k::available_backends()) {
      k::set_active_backend(b);
      CHECK(k::active_backend() == b);
      CHECK(k::sum_log_distance(c.view(), z) == k::table(b).sum_log_distance(c.view(), z));
    }
    k::set_active_backend(saved);
    if (!k::backend_available(k::Backend::neon)) CHECK_THROWS(k::table(k::Backend::neon));
  }

  TEST_CASE("pairwise and cross sums") {
    const Cloud a = cloud(40, 8, 1.0), b = cloud(25, 9, 1.0);
    long double pw = 0, cr = 0;
    for (std::size_t i = 0; i < 40; ++i)
      for (std::size_t j = i + 1; j < 40; ++j)
        pw += std::log(static_cast<long double>(std::abs(cplx(a.re[i], a.im[i]) - cplx(a.re[j], a.im[j]))));
    for (std::size_t i = 0; i < 40; ++i)
      for (std::size_t j = 0; j < 25; ++j)
        cr += std::log(static_cast<long double>(std::abs(cplx(a.re[i], a.im[i]) - cplx(b.re[j], b.im[j]))));
    CHECK(k::pairwise_log_distance(a.view()) == doctest::Approx(static_cast<double>(pw)).epsilon(1e-12));
    CHECK(k::cross_log_distance(a.view(), b.view()) == doctest::Approx(static_cast<double>(cr)).epsilon(1e-12));
  }
}

TEST_SUITE("quadrature") {
  TEST_CASE("smooth integrals against Boost Gauss-Kronrod") {
    auto f = [](double x) { return std::exp(-x) * std::cos(3 * x); };
    const double ref = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 2.0, 15, 1e-14);
    const QuadResult r = integrate(f, 0.0, 2.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(ref).epsilon(1e-12));
  }

  TEST_CASE("log singularity at a breakpoint") {
    auto f = [](double x) { return std::log(std::fabs(x - 0.3)); };
    const double bp[] = {0.3};
    const QuadResult r = integrate(f, 0.0, 1.0, {}, bp);
    // closed form: sum of t log t - t pieces
    const double ref = (0.7 * std::log(0.7) - 0.7) + (0.3 * std::log(0.3) - 0.3);
    CHECK(r.value == doctest::Approx(ref).epsilon(1e-11));
    CHECK(r.abs_error <= 1e-10);
  }

  TEST_CASE("infinite range against tanh-sinh") {
    auto f = [](double x) { return 1.0 / (1.0 + x * x); };
    CHECK(integrate_to_infinity(f, 0.0).value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    auto g = [](double x) { return std::log1p(x) / (std::pow(x, 1.5) + 1.0); };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double ref = ts.integrate(g, 1.0, std::numeric_limits<double>::infinity());
    CHECK(integrate_to_infinity(g, 1.0).value == doctest::Approx(ref).epsilon(1e-9));
  }

  TEST_CASE("reversed limits and empty interval") {
    auto f = [](double x) { return x * x; };
    CHECK(integrate(f, 1.0, 0.0).value == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK(integrate(f, 1.0, 1.0).value == 0.0);
  }
}
