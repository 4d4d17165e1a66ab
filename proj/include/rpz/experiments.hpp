#pragma once

#include <cstdint>

#include "rpz/polynomial.hpp"
#include "rpz/report.hpp"
#include "rpz/roots.hpp"

namespace rpz::experiments {

/// Fields shared by every experiment. Trial t draws its coefficients from
/// CounterRng(seed, t), so output never depends on the worker count.
struct CommonConfig {
  int n = 64;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  double tol = 1e-12;  // root-finder backward-error target
  int workers = 1;
  bool emit_rows = true;

  void validate() const;
  ojson to_json() const;
};

/// (1/n^2) log(sum xi / xi_n), from coefficients only. Always >= 0.
double xn_statistic(const Polynomial& p);
/// (1/n^2) sum log|1 - z_i| over certified roots.
double xn_from_roots(const RootConfiguration& cfg);
/// (1/n) sum over roots with |1 - z| < 1 of |log|1 - z||.
double yn_statistic(const RootConfiguration& cfg);
/// sum_{i<j} log|z_i - z_j| - (n+1) sum log|1 - z_j| + log(2^k / (k! (n-2k)!)).
/// -inf for a root at 1 or a repeated root.
double joint_log_density(const RootConfiguration& cfg);

/// 20 n e^{-B n^2}.
double xn_tail_bound(int n, double B);

struct XnTailConfig {
  CommonConfig common{.n = 6, .trials = 100000};
  double B = 0.2;
};
/// Exceedance frequency of X_n > B with a 99% Wilson upper bound, gated
/// against xn_tail_bound. A bound >= 1 is reported as vacuous.
ExperimentReport xn_tail_experiment(const XnTailConfig& cfg);

struct LdpStatsConfig {
  CommonConfig common{.n = 64, .trials = 500};
  double dual_tol = 1e-8;
  double rate_floor = -1e-8;
};
/// Per trial: X_n by both routes, Y_n, k, and the discrete rate I(L_n).
ExperimentReport ldp_statistics(const LdpStatsConfig& cfg);

struct CircleConfig {
  CommonConfig common{.n = 256, .trials = 100};
  double delta = 0.25;
  int sectors = 16;
  int compare_n = 16;     // 0 disables the trend check
  int reference_k = 1024; // atoms in the discretized circle law
};
ExperimentReport circle_convergence_experiment(const CircleConfig& cfg);

/// Decides whether every root of p is real. Degrees 1..3 use an exact
/// discriminant sign on the coefficients; higher degrees use certified roots.
bool all_roots_real(const Polynomial& p, double tol = 1e-12);

struct RealProbConfig {
  CommonConfig common{.n = 2, .trials = 100000};
};
ExperimentReport all_real_probability(const RealProbConfig& cfg);

struct ConditionedConfig {
  CommonConfig common{.n = 2, .trials = 100000};
  std::uint64_t min_accepted = 100;
};
/// Pooled roots of all-real trials against the equilibrium CDF. Diagnostic only.
ExperimentReport conditioned_real_profile(const ConditionedConfig& cfg);

}  // namespace rpz::experiments
