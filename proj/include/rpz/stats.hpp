#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rpz::stats {

/// Two-sided 99% standard normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double estimate;
  double lo;
  double hi;
};

/// Wilson score interval for a binomial proportion (valid at 0 and n successes).
Interval wilson(std::uint64_t successes, std::uint64_t trials, double z = kZ99);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;     // sample standard deviation
  double half_width = 0.0; // z * stddev / sqrt(count)
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double q01 = 0.0, q99 = 0.0;
};

/// Summary statistics with a normal-approximation 99% half-width for the mean.
Summary summarize(std::span<const double> values, double z = kZ99);

/// Linear-interpolation quantile of already sorted values.
double quantile_sorted(std::span<const double> sorted, double q);

/// Kolmogorov-Smirnov distance sup |F_n - F| between the empirical CDF of
/// `samples` and a continuous CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic 99% critical value of the one-sample KS statistic, 1.6276 / sqrt(n).
double ks_critical_99(std::size_t n);

}  // namespace rpz::stats
