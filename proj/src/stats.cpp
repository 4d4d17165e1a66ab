#include "rpz/stats.hpp"

#include <algorithm>
#include <cmath>

#include "rpz/errors.hpp"

namespace rpz::stats {

Interval wilson(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw DomainError("wilson: no trials");
  if (successes > trials) throw DomainError("wilson: successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval r{p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) r.lo = 0.0;
  if (successes == trials) r.hi = 1.0;
  return r;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DomainError("quantile_sorted: empty input");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double f = pos - static_cast<double>(i);
  return sorted[i] + f * (sorted[i + 1] - sorted[i]);
}

Summary summarize(std::span<const double> values, double z) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  s.half_width = z * s.stddev / std::sqrt(static_cast<double>(v.size()));
  s.min = v.front();
  s.max = v.back();
  s.median = quantile_sorted(v, 0.5);
  s.q01 = quantile_sorted(v, 0.01);
  s.q99 = quantile_sorted(v, 0.99);
  return s;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_99(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace rpz::stats
