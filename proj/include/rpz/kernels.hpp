#pragma once

// Log-distance reductions used by potentials, energies and the Monte Carlo
// energy oracle. Every kernel has a scalar reference implementation and, where
// the host supports it, a SIMD variant selected at runtime. The SIMD variants
// accumulate products of squared distances in mantissa/exponent form instead
// of calling log per element, so results agree with the scalar reference to
// rounding (relative ~1e-15 per term), not bitwise.

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace rpz::kernels {

enum class Backend { scalar, avx2, neon };

/// Structure-of-arrays view of complex points.
struct PointsView {
  std::span<const double> re;
  std::span<const double> im;
  std::size_t size() const noexcept { return re.size(); }
};

struct KernelTable {
  /// sum_j log|z - w_j|; -inf if some w_j == z.
  double (*sum_log_distance)(PointsView w, std::complex<double> z);
  /// sum_j (log|z - w_j| + log|z - conj(w_j)|), symmetric under z -> conj(z) bitwise.
  double (*sum_log_distance_conj)(PointsView w, std::complex<double> z);
  /// sum_i log|x_i - y_i| over paired real samples.
  double (*sum_log_abs_diff)(std::span<const double> x, std::span<const double> y);
};

const KernelTable& table(Backend b);
bool backend_available(Backend b);
std::vector<Backend> available_backends();
std::string_view backend_name(Backend b);

/// Backend used by the dispatching entry points below. Defaults to the widest
/// available ISA; the RPZ_SIMD environment variable (scalar|avx2|neon) overrides.
Backend active_backend();
void set_active_backend(Backend b);

double sum_log_distance(PointsView w, std::complex<double> z);
double sum_log_distance_conj(PointsView w, std::complex<double> z);
double sum_log_abs_diff(std::span<const double> x, std::span<const double> y);

/// sum_{i<j} log|w_i - w_j|.
double pairwise_log_distance(PointsView w);
/// sum_i sum_j log|a_i - b_j|.
double cross_log_distance(PointsView a, PointsView b);

namespace detail {
const KernelTable& scalar_table();
#if defined(RPZ_HAVE_AVX2_KERNELS)
const KernelTable& avx2_table();
#endif
#if defined(RPZ_HAVE_NEON_KERNELS)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace rpz::kernels
