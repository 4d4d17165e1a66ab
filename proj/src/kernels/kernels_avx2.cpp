// AVX2 kernels. Four lanes each keep a running product of squared distances,
// renormalized every step into mantissa in [1, 2) plus an integer exponent,
// so no log is evaluated inside the loop. Lanes whose squared distance falls
// outside [2^-1000, 2^1000] (zero, underflow, overflow) are routed to the
// scalar formula instead.

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "rpz/kernels.hpp"

namespace rpz::kernels::detail {

namespace {

constexpr double kLow = 0x1.0p-1000;
constexpr double kHigh = 0x1.0p+1000;

struct LogProduct {
  __m256d mant = _mm256_set1_pd(1.0);
  __m256i expo = _mm256_setzero_si256();

  // Multiplies in v (every lane already inside [kLow, kHigh]).
  void push(__m256d v) {
    const __m256i exp_mask = _mm256_set1_epi64x(0x7FF0000000000000LL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    const __m256i bias = _mm256_set1_epi64x(1023);
    const __m256d prod = _mm256_mul_pd(mant, v);
    const __m256i bits = _mm256_castpd_si256(prod);
    const __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(_mm256_and_si256(bits, exp_mask), 52), bias);
    expo = _mm256_add_epi64(expo, e);
    mant = _mm256_castsi256_pd(_mm256_or_si256(_mm256_andnot_si256(exp_mask, bits), one_bits));
  }

  // sum over lanes of log(mant) + expo * ln 2.
  double log_sum() const {
    alignas(32) double m[4];
    alignas(32) std::int64_t e[4];
    _mm256_store_pd(m, mant);
    _mm256_store_si256(reinterpret_cast<__m256i*>(e), expo);
    double logs = 0.0;
    double exps = 0.0;
    for (int l = 0; l < 4; ++l) {
      logs += std::log(m[l]);
      exps += static_cast<double>(e[l]);
    }
    return logs + exps * std::numbers::ln2;
  }
};

// Lanes outside the safe range are replaced by 1.0; returns the bitmask of
// replaced lanes.
inline int sanitize(__m256d& v) {
  const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(v, _mm256_set1_pd(kLow), _CMP_GE_OQ),
                                   _mm256_cmp_pd(v, _mm256_set1_pd(kHigh), _CMP_LE_OQ));
  const int bad = ~_mm256_movemask_pd(ok) & 0xF;
  if (bad) v = _mm256_blendv_pd(_mm256_set1_pd(1.0), v, ok);
  return bad;
}

double sum_log_distance_avx2(PointsView w, std::complex<double> z) {
  const std::size_t n = w.size();
  const __m256d zx = _mm256_set1_pd(z.real());
  const __m256d zy = _mm256_set1_pd(z.imag());
  LogProduct acc;
  double side = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(zx, _mm256_loadu_pd(&w.re[j]));
    const __m256d dy = _mm256_sub_pd(zy, _mm256_loadu_pd(&w.im[j]));
    __m256d d2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    if (const int bad = sanitize(d2)) {
      for (int l = 0; l < 4; ++l)
        if (bad & (1 << l))
          side += std::log(std::hypot(z.real() - w.re[j + l], z.imag() - w.im[j + l]));
    }
    acc.push(d2);
  }
  for (; j < n; ++j) side += std::log(std::hypot(z.real() - w.re[j], z.imag() - w.im[j]));
  return 0.5 * acc.log_sum() + side;
}

double sum_log_distance_conj_avx2(PointsView w, std::complex<double> z) {
  const std::size_t n = w.size();
  const __m256d zx = _mm256_set1_pd(z.real());
  const __m256d zy = _mm256_set1_pd(z.imag());
  LogProduct acc;
  double side = 0.0;
  auto scalar_term = [&](std::size_t k) {
    const double dx = z.real() - w.re[k];
    return std::log(std::hypot(dx, z.imag() - w.im[k])) +
           std::log(std::hypot(dx, z.imag() + w.im[k]));
  };
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d wy = _mm256_loadu_pd(&w.im[j]);
    const __m256d dx = _mm256_sub_pd(zx, _mm256_loadu_pd(&w.re[j]));
    const __m256d dx2 = _mm256_mul_pd(dx, dx);
    const __m256d dy1 = _mm256_sub_pd(zy, wy);
    const __m256d dy2 = _mm256_add_pd(zy, wy);
    // Each squared distance is formed identically so conj(z) swaps them exactly.
    const __m256d d1 = _mm256_add_pd(dx2, _mm256_mul_pd(dy1, dy1));
    const __m256d d2 = _mm256_add_pd(dx2, _mm256_mul_pd(dy2, dy2));
    __m256d p = _mm256_mul_pd(d1, d2);
    if (const int bad = sanitize(p)) {
      for (int l = 0; l < 4; ++l)
        if (bad & (1 << l)) side += scalar_term(j + l);
    }
    acc.push(p);
  }
  for (; j < n; ++j) side += scalar_term(j);
  return 0.5 * acc.log_sum() + side;
}

double sum_log_abs_diff_avx2(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  LogProduct acc;
  double side = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]));
    __m256d d2 = _mm256_mul_pd(d, d);
    if (const int bad = sanitize(d2)) {
      for (int l = 0; l < 4; ++l)
        if (bad & (1 << l)) side += std::log(std::fabs(x[i + l] - y[i + l]));
    }
    acc.push(d2);
  }
  for (; i < n; ++i) side += std::log(std::fabs(x[i] - y[i]));
  return 0.5 * acc.log_sum() + side;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{&sum_log_distance_avx2, &sum_log_distance_conj_avx2,
                             &sum_log_abs_diff_avx2};
  return t;
}

}  // namespace rpz::kernels::detail
