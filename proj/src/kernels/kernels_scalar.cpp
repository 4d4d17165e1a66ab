// Scalar reference kernels: one log per term, summed in index order.

#include <cmath>

#include "rpz/kernels.hpp"

namespace rpz::kernels::detail {

namespace {

double sum_log_distance_scalar(PointsView w, std::complex<double> z) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j)
    s += std::log(std::hypot(z.real() - w.re[j], z.imag() - w.im[j]));
  return s;
}

double sum_log_distance_conj_scalar(PointsView w, std::complex<double> z) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double dx = z.real() - w.re[j];
    s += std::log(std::hypot(dx, z.imag() - w.im[j])) +
         std::log(std::hypot(dx, z.imag() + w.im[j]));
  }
  return s;
}

double sum_log_abs_diff_scalar(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::log(std::fabs(x[i] - y[i]));
  return s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{&sum_log_distance_scalar, &sum_log_distance_conj_scalar,
                             &sum_log_abs_diff_scalar};
  return t;
}

}  // namespace rpz::kernels::detail
