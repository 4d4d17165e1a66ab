#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rpz/kernels.hpp"

namespace rpz::kernels {

namespace {

Backend detect_default() {
  if (const char* env = std::getenv("RPZ_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && backend_available(Backend::avx2)) return Backend::avx2;
    if (v == "neon" && backend_available(Backend::neon)) return Backend::neon;
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

std::atomic<Backend>& active() {
  static std::atomic<Backend> b{detect_default()};
  return b;
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(RPZ_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(RPZ_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
    if (backend_available(b)) out.push_back(b);
  return out;
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable& table(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("kernel backend not available: " + std::string(backend_name(b)));
  switch (b) {
#if defined(RPZ_HAVE_AVX2_KERNELS)
    case Backend::avx2:
      return detail::avx2_table();
#endif
#if defined(RPZ_HAVE_NEON_KERNELS)
    case Backend::neon:
      return detail::neon_table();
#endif
    default:
      return detail::scalar_table();
  }
}

Backend active_backend() { return active().load(std::memory_order_relaxed); }

void set_active_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("kernel backend not available: " + std::string(backend_name(b)));
  active().store(b, std::memory_order_relaxed);
}

double sum_log_distance(PointsView w, std::complex<double> z) {
  return table(active_backend()).sum_log_distance(w, z);
}

double sum_log_distance_conj(PointsView w, std::complex<double> z) {
  return table(active_backend()).sum_log_distance_conj(w, z);
}

double sum_log_abs_diff(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("sum_log_abs_diff: size mismatch");
  return table(active_backend()).sum_log_abs_diff(x, y);
}

double pairwise_log_distance(PointsView w) {
  const auto& t = table(active_backend());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const PointsView tail{w.re.subspan(i + 1), w.im.subspan(i + 1)};
    s += t.sum_log_distance(tail, {w.re[i], w.im[i]});
  }
  return s;
}

double cross_log_distance(PointsView a, PointsView b) {
  const auto& t = table(active_backend());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += t.sum_log_distance(b, {a.re[i], a.im[i]});
  return s;
}

}  // namespace rpz::kernels
