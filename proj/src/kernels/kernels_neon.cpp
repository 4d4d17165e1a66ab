// NEON (aarch64) kernels; same mantissa/exponent product scheme as the AVX2
// variant with two lanes.

#include <arm_neon.h>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "rpz/kernels.hpp"

namespace rpz::kernels::detail {

namespace {

constexpr double kLow = 0x1.0p-1000;
constexpr double kHigh = 0x1.0p+1000;

struct LogProduct {
  float64x2_t mant = vdupq_n_f64(1.0);
  int64x2_t expo = vdupq_n_s64(0);

  void push(float64x2_t v) {
    const uint64x2_t exp_mask = vdupq_n_u64(0x7FF0000000000000ULL);
    const uint64x2_t one_bits = vdupq_n_u64(0x3FF0000000000000ULL);
    const uint64x2_t bits = vreinterpretq_u64_f64(vmulq_f64(mant, v));
    const int64x2_t e = vsubq_s64(
        vreinterpretq_s64_u64(vshrq_n_u64(vandq_u64(bits, exp_mask), 52)), vdupq_n_s64(1023));
    expo = vaddq_s64(expo, e);
    mant = vreinterpretq_f64_u64(vorrq_u64(vbicq_u64(bits, exp_mask), one_bits));
  }

  double log_sum() const {
    return std::log(vgetq_lane_f64(mant, 0)) + std::log(vgetq_lane_f64(mant, 1)) +
           static_cast<double>(vgetq_lane_s64(expo, 0) + vgetq_lane_s64(expo, 1)) *
               std::numbers::ln2;
  }
};

inline unsigned sanitize(float64x2_t& v) {
  const uint64x2_t ok = vandq_u64(vcgeq_f64(v, vdupq_n_f64(kLow)), vcleq_f64(v, vdupq_n_f64(kHigh)));
  const unsigned bad = (vgetq_lane_u64(ok, 0) ? 0u : 1u) | (vgetq_lane_u64(ok, 1) ? 0u : 2u);
  if (bad) v = vbslq_f64(ok, v, vdupq_n_f64(1.0));
  return bad;
}

double sum_log_distance_neon(PointsView w, std::complex<double> z) {
  const std::size_t n = w.size();
  const float64x2_t zx = vdupq_n_f64(z.real());
  const float64x2_t zy = vdupq_n_f64(z.imag());
  LogProduct acc;
  double side = 0.0;
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t dx = vsubq_f64(zx, vld1q_f64(&w.re[j]));
    const float64x2_t dy = vsubq_f64(zy, vld1q_f64(&w.im[j]));
    float64x2_t d2 = vfmaq_f64(vmulq_f64(dy, dy), dx, dx);
    if (const unsigned bad = sanitize(d2)) {
      for (unsigned l = 0; l < 2; ++l)
        if (bad & (1u << l))
          side += std::log(std::hypot(z.real() - w.re[j + l], z.imag() - w.im[j + l]));
    }
    acc.push(d2);
  }
  for (; j < n; ++j) side += std::log(std::hypot(z.real() - w.re[j], z.imag() - w.im[j]));
  return 0.5 * acc.log_sum() + side;
}

double sum_log_distance_conj_neon(PointsView w, std::complex<double> z) {
  const std::size_t n = w.size();
  const float64x2_t zx = vdupq_n_f64(z.real());
  const float64x2_t zy = vdupq_n_f64(z.imag());
  LogProduct acc;
  double side = 0.0;
  auto scalar_term = [&](std::size_t k) {
    const double dx = z.real() - w.re[k];
    return std::log(std::hypot(dx, z.imag() - w.im[k])) +
           std::log(std::hypot(dx, z.imag() + w.im[k]));
  };
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t wy = vld1q_f64(&w.im[j]);
    const float64x2_t dx = vsubq_f64(zx, vld1q_f64(&w.re[j]));
    const float64x2_t dx2 = vmulq_f64(dx, dx);
    const float64x2_t dy1 = vsubq_f64(zy, wy);
    const float64x2_t dy2 = vaddq_f64(zy, wy);
    const float64x2_t d1 = vaddq_f64(dx2, vmulq_f64(dy1, dy1));
    const float64x2_t d2 = vaddq_f64(dx2, vmulq_f64(dy2, dy2));
    float64x2_t p = vmulq_f64(d1, d2);
    if (const unsigned bad = sanitize(p)) {
      for (unsigned l = 0; l < 2; ++l)
        if (bad & (1u << l)) side += scalar_term(j + l);
    }
    acc.push(p);
  }
  for (; j < n; ++j) side += scalar_term(j);
  return 0.5 * acc.log_sum() + side;
}

double sum_log_abs_diff_neon(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  LogProduct acc;
  double side = 0.0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(&x[i]), vld1q_f64(&y[i]));
    float64x2_t d2 = vmulq_f64(d, d);
    if (const unsigned bad = sanitize(d2)) {
      for (unsigned l = 0; l < 2; ++l)
        if (bad & (1u << l)) side += std::log(std::fabs(x[i + l] - y[i + l]));
    }
    acc.push(d2);
  }
  for (; i < n; ++i) side += std::log(std::fabs(x[i] - y[i]));
  return 0.5 * acc.log_sum() + side;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t{&sum_log_distance_neon, &sum_log_distance_conj_neon,
                             &sum_log_abs_diff_neon};
  return t;
}

}  // namespace rpz::kernels::detail
