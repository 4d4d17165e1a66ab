#include "rpz/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <gmpxx.h>

#include "rpz/equilibrium.hpp"
#include "rpz/errors.hpp"
#include "rpz/measures.hpp"
#include "rpz/parallel.hpp"
#include "rpz/pilot_constants.hpp"
#include "rpz/stats.hpp"

namespace rpz::experiments {

using cplx = std::complex<double>;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ojson summary_json(const stats::Summary& s) {
  ojson j;
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["stddev"] = s.stddev;
  j["half_width_99"] = s.half_width;
  j["min"] = s.min;
  j["max"] = s.max;
  j["median"] = s.median;
  j["q01"] = s.q01;
  j["q99"] = s.q99;
  return j;
}

ojson interval_json(const stats::Interval& iv) {
  return {{"estimate", iv.estimate}, {"lo", iv.lo}, {"hi", iv.hi}};
}

int nonnegative_roots(const RootConfiguration& cfg) {
  int c = 0;
  for (double x : cfg.reals)
    if (x >= 0.0) ++c;
  return c;
}

double max_backward_error(const RootConfiguration& cfg) {
  double m = 0.0;
  for (double e : cfg.backward_errors) m = std::max(m, e);
  return m;
}

// Root finding for one trial; nullopt when certification fails.
std::optional<RootConfiguration> try_roots(const Polynomial& p, double tol) {
  try {
    return find_roots(p, tol);
  } catch (const ConvergenceError&) {
    return std::nullopt;
  } catch (const AccuracyError&) {
    return std::nullopt;
  } catch (const SymmetryError&) {
    return std::nullopt;
  }
}

}  // namespace

void CommonConfig::validate() const {
  if (n < 1) throw DomainError("experiment: n must be >= 1");
  if (trials < 1) throw DomainError("experiment: trials must be >= 1");
  if (!(tol > 0.0)) throw DomainError("experiment: tol must be > 0");
  if (workers < 1) throw DomainError("experiment: workers must be >= 1");
}

// workers is left out on purpose: it must not change output bytes.
ojson CommonConfig::to_json() const {
  ojson j;
  j["n"] = n;
  j["trials"] = trials;
  j["seed"] = seed;
  j["tol"] = tol;
  j["emit_rows"] = emit_rows;
  return j;
}

double xn_statistic(const Polynomial& p) {
  double sum = 0.0;
  for (double c : p.coefficients()) sum += c;
  const double n = p.degree();
  return std::log(sum / p.leading()) / (n * n);
}

double xn_from_roots(const RootConfiguration& cfg) {
  double s = 0.0;
  for (const cplx& z : cfg.all_roots()) s += std::log(std::abs(1.0 - z));
  const double n = cfg.degree;
  return s / (n * n);
}

double yn_statistic(const RootConfiguration& cfg) {
  double s = 0.0;
  for (const cplx& z : cfg.all_roots()) {
    const double d = std::abs(1.0 - z);
    if (d < 1.0) s += -std::log(d);
  }
  return s / cfg.degree;
}

double joint_log_density(const RootConfiguration& cfg) {
  const auto roots = cfg.all_roots();
  const int n = static_cast<int>(roots.size());
  const int k = cfg.k();
  double pair_sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(roots[i] - roots[j]);
      if (d == 0.0) return kNegInf;
      pair_sum += std::log(d);
    }
  double one_sum = 0.0;
  for (const cplx& z : roots) {
    const double d = std::abs(1.0 - z);
    if (d == 0.0) return kNegInf;
    one_sum += std::log(d);
  }
  const double prefactor = k * std::numbers::ln2 - std::lgamma(k + 1.0) - std::lgamma(n - 2.0 * k + 1.0);
  return pair_sum - (n + 1.0) * one_sum + prefactor;
}

double xn_tail_bound(int n, double B) {
  const double nn = n;
  return 20.0 * nn * std::exp(-B * nn * nn);
}

ExperimentReport xn_tail_experiment(const XnTailConfig& cfg) {
  const CommonConfig& c = cfg.common;
  c.validate();
  if (!(cfg.B > 0.0)) throw DomainError("xn_tail_experiment: B must be > 0");
  std::vector<double> xs(c.trials);
  parallel_for(c.trials, c.workers, [&](std::size_t t) {
    xs[t] = xn_statistic(sample_exponential_poly(c.n, c.seed, t));
  });

  ExperimentReport r;
  r.experiment = "xn-tail";
  r.config = c.to_json();
  r.config["B"] = cfg.B;
  r.columns = {"trial", "xn", "exceeds"};
  std::uint64_t exceed = 0;
  for (std::uint64_t t = 0; t < c.trials; ++t) {
    const bool e = xs[t] > cfg.B;
    exceed += e;
    if (c.emit_rows) r.rows.push_back(ojson::array({t, xs[t], e}));
  }
  const auto ci = stats::wilson(exceed, c.trials);
  const double bound = xn_tail_bound(c.n, cfg.B);
  r.summary["exceedances"] = exceed;
  r.summary["frequency"] = interval_json(ci);
  r.summary["bound"] = bound;
  r.summary["vacuous"] = bound >= 1.0;
  r.summary["xn"] = summary_json(stats::summarize(xs));
  if (bound >= 1.0) r.warnings.push_back("vacuous bound: 20 n e^{-B n^2} >= 1");
  if (c.n < 4) r.warnings.push_back("bound is asserted only for large n; n < 4 violations are recorded, not asserted");
  r.gates.push_back(make_gate("exceedance_upper_99", ci.hi, "<=", bound));
  return r;
}

ExperimentReport ldp_statistics(const LdpStatsConfig& cfg) {
  const CommonConfig& c = cfg.common;
  c.validate();
  struct Trial {
    bool ok = false;
    int k = 0;
    double xn = 0, xn_roots = 0, yn = 0, rate = 0, berr = 0;
    int nonneg = 0;
  };
  std::vector<Trial> out(c.trials);
  parallel_for(c.trials, c.workers, [&](std::size_t t) {
    const Polynomial p = sample_exponential_poly(c.n, c.seed, t);
    Trial tr;
    tr.xn = xn_statistic(p);
    if (auto roots = try_roots(p, c.tol)) {
      tr.ok = true;
      tr.k = roots->k();
      tr.xn_roots = xn_from_roots(*roots);
      tr.yn = yn_statistic(*roots);
      tr.rate = rate_function(EmpiricalMeasure::from_roots(*roots), Verdict::verified_inside).value;
      tr.berr = max_backward_error(*roots);
      tr.nonneg = nonnegative_roots(*roots);
    }
    out[t] = tr;
  });

  ExperimentReport r;
  r.experiment = "ldp-stats";
  r.config = c.to_json();
  r.config["dual_tol"] = cfg.dual_tol;
  r.config["rate_floor"] = cfg.rate_floor;
  r.columns = {"trial", "certified", "k", "xn", "xn_roots", "dual_diff", "yn", "rate", "max_backward_error"};
  std::vector<double> xn, diff, yn, rate;
  std::uint64_t failed = 0;
  int nonneg = 0;
  double max_berr = 0.0;
  for (std::uint64_t t = 0; t < c.trials; ++t) {
    const Trial& tr = out[t];
    if (!tr.ok) {
      ++failed;
      if (c.emit_rows) r.rows.push_back(ojson::array({t, false, nullptr, tr.xn, nullptr, nullptr, nullptr, nullptr, nullptr}));
      continue;
    }
    const double d = std::fabs(tr.xn - tr.xn_roots);
    xn.push_back(tr.xn);
    diff.push_back(d);
    yn.push_back(tr.yn);
    rate.push_back(tr.rate);
    nonneg += tr.nonneg;
    max_berr = std::max(max_berr, tr.berr);
    if (c.emit_rows)
      r.rows.push_back(ojson::array({t, true, tr.k, tr.xn, tr.xn_roots, d, tr.yn, tr.rate, tr.berr}));
  }
  r.summary["certified"] = c.trials - failed;
  r.summary["failed"] = failed;
  r.summary["max_backward_error"] = max_berr;
  r.summary["nonnegative_roots"] = nonneg;
  if (!xn.empty()) {
    r.summary["xn"] = summary_json(stats::summarize(xn));
    r.summary["dual_diff"] = summary_json(stats::summarize(diff));
    r.summary["yn"] = summary_json(stats::summarize(yn));
    r.summary["rate"] = summary_json(stats::summarize(rate));
    r.gates.push_back(make_gate("max_dual_diff", *std::max_element(diff.begin(), diff.end()), "<=", cfg.dual_tol));
    r.gates.push_back(make_gate("max_yn", *std::max_element(yn.begin(), yn.end()), "<=", 2.0 + pilot::kYnSlack));
    r.gates.push_back(make_gate("min_rate", *std::min_element(rate.begin(), rate.end()), ">=", cfg.rate_floor));
  }
  if (failed) r.warnings.push_back(std::to_string(failed) + " trial(s) failed root certification and were excluded");
  r.gates.push_back(make_gate("nonnegative_roots", nonneg, "<=", 0));
  r.gates.push_back(make_gate("certified_trials", static_cast<double>(c.trials - failed), ">=", 1));
  return r;
}

namespace {

struct CircleTrial {
  bool ok = false;
  int k = 0;
  double annulus = 0, distance = 0, berr = 0;
  int nonneg = 0;
  std::vector<double> sectors;
};

std::vector<CircleTrial> circle_trials(int n, const CircleConfig& cfg, const EmpiricalMeasure& ref) {
  const CommonConfig& c = cfg.common;
  std::vector<CircleTrial> out(c.trials);
  parallel_for(c.trials, c.workers, [&](std::size_t t) {
    CircleTrial tr;
    auto roots = try_roots(sample_exponential_poly(n, c.seed, t), c.tol);
    if (roots) {
      tr.ok = true;
      tr.k = roots->k();
      tr.berr = max_backward_error(*roots);
      tr.nonneg = nonnegative_roots(*roots);
      tr.sectors.assign(cfg.sectors, 0.0);
      const auto all = roots->all_roots();
      const double w = 1.0 / n;
      for (const cplx& z : all) {
        const double m = std::abs(z);
        if (m >= 1.0 - cfg.delta && m <= 1.0 + cfg.delta) tr.annulus += w;
        double a = std::arg(z);
        if (a < 0.0) a += 2.0 * std::numbers::pi;
        int s = static_cast<int>(a / (2.0 * std::numbers::pi) * cfg.sectors);
        tr.sectors[std::clamp(s, 0, cfg.sectors - 1)] += w;
      }
      tr.distance = measure_distance(EmpiricalMeasure::from_roots(*roots), ref);
    }
    out[t] = std::move(tr);
  });
  return out;
}

}  // namespace

ExperimentReport circle_convergence_experiment(const CircleConfig& cfg) {
  const CommonConfig& c = cfg.common;
  c.validate();
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw DomainError("circle: delta must lie in (0, 1)");
  if (cfg.sectors < 1) throw DomainError("circle: sectors must be >= 1");
  if (cfg.compare_n < 0) throw DomainError("circle: compare_n must be >= 0");
  if (cfg.reference_k < 1) throw DomainError("circle: reference_k must be >= 1");
  const EmpiricalMeasure ref = rotated_roots_of_unity(cfg.reference_k);
  const auto trials = circle_trials(c.n, cfg, ref);

  ExperimentReport r;
  r.experiment = "circle";
  r.config = c.to_json();
  r.config["delta"] = cfg.delta;
  r.config["sectors"] = cfg.sectors;
  r.config["compare_n"] = cfg.compare_n;
  r.config["reference_k"] = cfg.reference_k;
  r.config["pilot_version"] = pilot::kVersion;
  r.columns = {"trial", "certified", "k", "annulus_mass", "distance", "max_backward_error"};
  for (int s = 0; s < cfg.sectors; ++s) r.columns.push_back("sector_" + std::to_string(s));

  std::vector<double> annulus, distance;
  std::vector<std::vector<double>> sectors(cfg.sectors);
  std::uint64_t failed = 0;
  int nonneg = 0;
  for (std::uint64_t t = 0; t < c.trials; ++t) {
    const CircleTrial& tr = trials[t];
    if (!tr.ok) {
      ++failed;
      if (c.emit_rows) {
        ojson row = ojson::array({t, false, nullptr, nullptr, nullptr, nullptr});
        for (int s = 0; s < cfg.sectors; ++s) row.push_back(nullptr);
        r.rows.push_back(std::move(row));
      }
      continue;
    }
    annulus.push_back(tr.annulus);
    distance.push_back(tr.distance);
    nonneg += tr.nonneg;
    for (int s = 0; s < cfg.sectors; ++s) sectors[s].push_back(tr.sectors[s]);
    if (c.emit_rows) {
      ojson row = ojson::array({t, true, tr.k, tr.annulus, tr.distance, tr.berr});
      for (double m : tr.sectors) row.push_back(m);
      r.rows.push_back(std::move(row));
    }
  }
  r.summary["certified"] = c.trials - failed;
  r.summary["failed"] = failed;
  r.summary["nonnegative_roots"] = nonneg;
  if (failed) r.warnings.push_back(std::to_string(failed) + " trial(s) failed root certification and were excluded");
  r.gates.push_back(make_gate("nonnegative_roots", nonneg, "<=", 0));
  if (annulus.empty()) {
    r.gates.push_back(make_gate("certified_trials", 0, ">=", 1));
    return r;
  }
  const auto sa = stats::summarize(annulus);
  const auto sd = stats::summarize(distance);
  r.summary["annulus_mass"] = summary_json(sa);
  r.summary["distance"] = summary_json(sd);
  ojson sector_means = ojson::array();
  double worst = 0.0;
  for (int s = 0; s < cfg.sectors; ++s) {
    const auto ss = stats::summarize(sectors[s]);
    sector_means.push_back(ss.mean);
    worst = std::max(worst, std::fabs(ss.mean - 1.0 / cfg.sectors));
  }
  r.summary["sector_means"] = sector_means;
  r.summary["max_sector_deviation"] = worst;
  r.gates.push_back(make_gate("mean_annulus_mass", sa.mean, ">=", pilot::kAnnulusMassMin));
  r.gates.push_back(make_gate("max_sector_deviation", worst, "<=", pilot::kSectorTolerance));
  r.gates.push_back(make_gate("mean_distance", sd.mean, "<=", pilot::kCircleDistanceMax));

  if (cfg.compare_n > 0 && cfg.compare_n != c.n) {
    const auto other = circle_trials(cfg.compare_n, cfg, ref);
    std::vector<double> od;
    for (const CircleTrial& tr : other)
      if (tr.ok) od.push_back(tr.distance);
    if (!od.empty()) {
      const auto so = stats::summarize(od);
      r.summary["compare_distance"] = summary_json(so);
      // the larger degree must sit closer to the circle law
      const bool larger = c.n > cfg.compare_n;
      r.gates.push_back(make_gate("distance_trend", larger ? sd.mean - so.mean : so.mean - sd.mean, "<", 0.0));
    }
  }
  return r;
}

bool all_roots_real(const Polynomial& p, double tol) {
  const int n = p.degree();
  if (n <= 1) return true;
  if (n <= 3) {
    std::vector<mpq_class> q;
    for (double x : p.coefficients()) q.emplace_back(x);
    mpq_class disc;
    if (n == 2) {
      disc = q[1] * q[1] - 4 * q[0] * q[2];
    } else {
      const mpq_class &a = q[3], &b = q[2], &c = q[1], &d = q[0];
      disc = 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d;
    }
    return sgn(disc) >= 0;
  }
  return find_roots(p, tol).k() == 0;
}

ExperimentReport all_real_probability(const RealProbConfig& cfg) {
  const CommonConfig& c = cfg.common;
  c.validate();
  std::vector<unsigned char> real(c.trials);
  parallel_for(c.trials, c.workers, [&](std::size_t t) {
    real[t] = all_roots_real(sample_exponential_poly(c.n, c.seed, t), c.tol);
  });

  ExperimentReport r;
  r.experiment = "real-prob";
  r.config = c.to_json();
  r.columns = {"trial", "all_real"};
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < c.trials; ++t) {
    hits += real[t];
    if (c.emit_rows) r.rows.push_back(ojson::array({t, static_cast<bool>(real[t])}));
  }
  const auto ci = stats::wilson(hits, c.trials);
  const double nn = static_cast<double>(c.n) * c.n;
  r.summary["successes"] = hits;
  r.summary["probability"] = interval_json(ci);
  r.summary["method"] = c.n <= 3 ? "exact discriminant" : "certified roots";
  if (hits > 0) {
    r.summary["neg_log2_p_over_n2"] = -std::log2(ci.estimate) / nn;
  } else {
    // only the upper confidence bound is informative
    r.summary["neg_log2_p_over_n2_lower"] = -std::log2(ci.hi) / nn;
    r.warnings.push_back("no successes: one-sided confidence bound reported");
  }
  return r;
}

ExperimentReport conditioned_real_profile(const ConditionedConfig& cfg) {
  const CommonConfig& c = cfg.common;
  c.validate();
  if (c.n > 5) throw DomainError("conditioned_real_profile: n must be <= 5");
  std::vector<std::vector<double>> accepted(c.trials);
  std::vector<unsigned char> ok(c.trials);
  parallel_for(c.trials, c.workers, [&](std::size_t t) {
    const Polynomial p = sample_exponential_poly(c.n, c.seed, t);
    if (!all_roots_real(p, c.tol)) return;
    ok[t] = 1;
    std::vector<double> xs;
    if (c.n == 1) {
      xs.push_back(-p[0] / p[1]);
    } else {
      // A pair may survive where the exact test says real (near-double root);
      // its real part is then the root to within the pairing tolerance.
      for (const cplx& z : find_roots(p, c.tol).all_roots()) xs.push_back(z.real());
    }
    std::sort(xs.begin(), xs.end());
    accepted[t] = std::move(xs);
  });

  ExperimentReport r;
  r.experiment = "conditioned";
  r.config = c.to_json();
  r.config["min_accepted"] = cfg.min_accepted;
  r.columns = {"trial", "index", "root"};
  std::vector<double> pooled;
  std::uint64_t n_acc = 0;
  for (std::uint64_t t = 0; t < c.trials; ++t) {
    if (!ok[t]) continue;
    ++n_acc;
    for (std::size_t i = 0; i < accepted[t].size(); ++i) {
      pooled.push_back(accepted[t][i]);
      if (c.emit_rows) r.rows.push_back(ojson::array({t, i, accepted[t][i]}));
    }
  }
  r.summary["accepted"] = n_acc;
  r.summary["acceptance"] = interval_json(stats::wilson(n_acc, c.trials));
  int nonneg = 0;
  for (double x : pooled)
    if (x >= 0.0) ++nonneg;
  r.summary["nonnegative_roots"] = nonneg;
  r.gates.push_back(make_gate("nonnegative_roots", nonneg, "<=", 0));
  if (n_acc < cfg.min_accepted) r.warnings.push_back("insufficient data: fewer accepted trials than min_accepted");
  if (pooled.empty()) return r;
  const double ks = stats::ks_statistic(pooled, equilibrium::standard_cdf);
  std::sort(pooled.begin(), pooled.end());
  r.summary["pooled_roots"] = pooled.size();
  r.summary["ks_statistic"] = ks;
  r.summary["ks_critical_99_iid"] = stats::ks_critical_99(pooled.size());
  r.summary["pooled_median"] = stats::quantile_sorted(pooled, 0.5);
  r.summary["reference_median"] = -1.0;
  r.summary["max_root"] = pooled.back();
  r.warnings.push_back("diagnostic only: small n is far from the limit law, and pooled roots are not independent");
  return r;
}

}  // namespace rpz::experiments
