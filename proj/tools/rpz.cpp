// rpz: command-line front end for the random-polynomial zero laboratory.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "rpz/class_p.hpp"
#include "rpz/equilibrium.hpp"
#include "rpz/errors.hpp"
#include "rpz/experiments.hpp"
#include "rpz/measures.hpp"
#include "rpz/parallel.hpp"
#include "rpz/polynomial.hpp"
#include "rpz/report.hpp"
#include "rpz/roots.hpp"

namespace {

using namespace rpz;
using cplx = std::complex<double>;

struct Output {
  std::string format = "json";
  std::string out;
};

int emit(const ExperimentReport& r, const Output& o) {
  const std::string text = o.format == "csv" ? to_csv(r) : to_json_string(r);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + o.out);
    f << text;
    if (!f) throw std::runtime_error("failed writing " + o.out);
  }
  return r.passed() ? 0 : 1;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double x = std::stod(item, &used);
    if (used != item.size() && item.find_first_not_of(" ", used) != std::string::npos)
      throw DomainError("bad number in list: " + item);
    v.push_back(x);
  }
  if (v.empty()) throw DomainError("empty coefficient list");
  return v;
}

ExactPolynomial parse_exact(const std::string& s) {
  std::vector<mpq_class> c;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    mpq_class q;
    if (item.empty() || q.set_str(item, 10) != 0) throw DomainError("bad rational coefficient: " + item);
    q.canonicalize();
    c.push_back(q);
  }
  return ExactPolynomial(std::move(c));
}

ojson coefficients_json(const Polynomial& p) {
  ojson a = ojson::array();
  for (double c : p.coefficients()) a.push_back(c);
  return a;
}

// Measure selected by --measure / --input.
struct MeasureChoice {
  std::string kind = "sample";  // sample | unity | circle | interval | input
  int n = 64;
  std::uint64_t seed = 1;
  std::uint64_t trial = 0;
  double tol = 1e-12;
  int cells = 256;
  std::string input;

  ojson to_json() const {
    ojson j;
    j["measure"] = kind;
    if (kind == "sample") {
      j["n"] = n;
      j["seed"] = seed;
      j["trial"] = trial;
      j["tol"] = tol;
    } else if (kind == "unity") {
      j["k"] = n;
    } else if (kind == "input") {
      j["input"] = input;
    } else {
      j["cells"] = cells;
    }
    return j;
  }
};

struct Loaded {
  std::optional<EmpiricalMeasure> empirical;
  std::optional<GridDensityMeasure> grid;
  std::optional<Verdict> known;  // membership known by construction
};

Loaded load_measure(const MeasureChoice& m) {
  Loaded l;
  if (m.kind == "sample") {
    l.empirical = EmpiricalMeasure::from_roots(find_roots(sample_exponential_poly(m.n, m.seed, m.trial), m.tol));
    l.known = Verdict::verified_inside;
  } else if (m.kind == "unity") {
    l.empirical = rotated_roots_of_unity(m.n);
    l.known = Verdict::verified_inside;  // roots of z^k + 1
  } else if (m.kind == "circle") {
    l.grid = GridDensityMeasure::uniform_circle(1.0, m.cells);
  } else if (m.kind == "interval") {
    l.grid = GridDensityMeasure::uniform_interval(-1.0, 0.0, m.cells);
  } else if (m.kind == "input") {
    std::ifstream f(m.input);
    if (!f) throw std::runtime_error("cannot open " + m.input);
    const auto j = nlohmann::json::parse(f);
    if (j.contains("type") && j["type"] == "grid")
      l.grid = grid_from_json(j);
    else
      l.empirical = empirical_from_json(j);
  } else {
    throw DomainError("unknown measure " + m.kind);
  }
  return l;
}

MembershipVerdict membership(const Loaded& l, int workers) {
  if (l.empirical) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const cplx& z : l.empirical->atoms()) {
      if (std::abs(z) > 0) lo = std::min(lo, std::abs(z));
      hi = std::max(hi, std::abs(z));
    }
    const auto g = default_bes_grid(std::isfinite(lo) ? lo : 0.0, hi);
    return bes_condition(*l.empirical, g.radii, g.angles, {}, workers);
  }
  const auto g = default_bes_grid(l.grid->min_modulus(), l.grid->max_modulus());
  return bes_condition(*l.grid, g.radii, g.angles, {}, workers);
}

void add_measure_flags(CLI::App* c, MeasureChoice& m) {
  c->add_option("--measure", m.kind, "sample | unity | circle | interval | input")
      ->check(CLI::IsMember({"sample", "unity", "circle", "interval", "input"}));
  c->add_option("--n", m.n, "degree (sample) or atom count (unity)")->check(CLI::Range(1, 1 << 20));
  c->add_option("--seed", m.seed, "master seed");
  c->add_option("--trial", m.trial, "trial index (RNG stream)");
  c->add_option("--tol", m.tol, "root backward-error target")->check(CLI::PositiveNumber);
  c->add_option("--cells", m.cells, "grid cells for circle / interval")->check(CLI::Range(1, 1 << 16));
  c->add_option("--input", m.input, "measure JSON file (with --measure input; default: none)");
}

void add_common(CLI::App* c, experiments::CommonConfig& cc) {
  c->add_option("--n", cc.n, "polynomial degree")->check(CLI::Range(1, 1 << 16));
  c->add_option("--trials", cc.trials, "number of trials")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  c->add_option("--seed", cc.seed, "master seed");
  c->add_option("--tol", cc.tol, "root backward-error target")->check(CLI::PositiveNumber);
  c->add_flag("!--no-rows", cc.emit_rows, "omit the per-trial table");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rpz: zeros of random polynomials with exponential coefficients"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Output out;
  int workers = default_workers();
  app.add_option("--format", out.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out.out, "output file (default: standard output)");
  app.add_option("--workers", workers, "worker threads (default from RPZ_WORKERS or hardware)")
      ->check(CLI::Range(1, 1024));
  app.fallthrough();

  // sample
  int s_n = 8;
  std::uint64_t s_seed = 1, s_trial = 0;
  auto* sample = app.add_subcommand("sample", "draw one polynomial with Exp(1) coefficients");
  sample->add_option("--n", s_n, "degree")->check(CLI::Range(1, 1 << 20));
  sample->add_option("--seed", s_seed, "master seed");
  sample->add_option("--trial", s_trial, "trial index (RNG stream)");

  // roots
  int r_n = 8;
  std::uint64_t r_seed = 1, r_trial = 0;
  double r_tol = 1e-12;
  std::string r_coeffs;
  auto* roots = app.add_subcommand("roots", "certified roots of a sampled or given polynomial");
  roots->add_option("--n", r_n, "degree")->check(CLI::Range(1, 1 << 16));
  roots->add_option("--seed", r_seed, "master seed");
  roots->add_option("--trial", r_trial, "trial index (RNG stream)");
  roots->add_option("--tol", r_tol, "backward-error target")->check(CLI::PositiveNumber);
  roots->add_option("--coeffs", r_coeffs, "comma-separated coefficients a_0,...,a_d (overrides sampling; default: none)");

  // rate
  MeasureChoice rate_m;
  double rate_tol = 1e-8;
  auto* rate = app.add_subcommand("rate", "rate function I(mu)");
  add_measure_flags(rate, rate_m);
  rate->add_option("--rate-tol", rate_tol, "accuracy required for grid measures")->check(CLI::PositiveNumber);

  // check-p
  MeasureChoice cp_m;
  std::string cp_poly, cp_expect = "any";
  int cp_mmax = 200;
  auto* checkp = app.add_subcommand("check-p", "class-P membership tests");
  add_measure_flags(checkp, cp_m);
  checkp->add_option("--poly", cp_poly, "exact coefficients a_0,...,a_d (integers or p/q): run the De Angelis tests (default: none)");
  checkp->add_option("--m-max", cp_mmax, "largest power tried by the De Angelis power route")->check(CLI::Range(1, 10000));
  checkp->add_option("--expect", cp_expect, "gate on the verdict")
      ->check(CLI::IsMember({"any", "inside", "outside"}));

  // equilibrium
  double eq_tol = 1e-9, eq_gamma = 0.5;
  int eq_points = 50;
  std::uint64_t eq_mc = 0, eq_seed = 1;
  auto* equil = app.add_subcommand("equilibrium", "verify the equilibrium measure of the negative axis");
  equil->add_option("--quad-tol", eq_tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  equil->add_option("--gamma", eq_gamma, "variational multiplier")->check(CLI::PositiveNumber);
  equil->add_option("--points", eq_points, "log-grid points on [1e-2, 1e2]")->check(CLI::Range(2, 100000));
  equil->add_option("--mc-samples", eq_mc, "pairwise Monte Carlo samples (0 disables)");
  equil->add_option("--seed", eq_seed, "Monte Carlo seed");

  // ldp-stats
  std::string ldp_kind = "stats";
  experiments::CommonConfig ldp_c{.n = 64, .trials = 500};
  double ldp_B = 0.2, ldp_delta = 0.25;
  int ldp_sectors = 16, ldp_compare = 16;
  auto* ldp = app.add_subcommand("ldp-stats", "X_n / Y_n / rate statistics, X_n tail, circle convergence");
  ldp->add_option("--kind", ldp_kind, "stats | tail | circle")->check(CLI::IsMember({"stats", "tail", "circle"}));
  add_common(ldp, ldp_c);
  ldp->add_option("--B", ldp_B, "tail threshold (kind tail)")->check(CLI::PositiveNumber);
  ldp->add_option("--delta", ldp_delta, "annulus half-width (kind circle)")->check(CLI::Range(1e-12, 1.0 - 1e-12));
  ldp->add_option("--sectors", ldp_sectors, "angular sectors (kind circle)")->check(CLI::Range(1, 4096));
  ldp->add_option("--compare-n", ldp_compare, "second degree for the trend check, 0 disables (kind circle)")
      ->check(CLI::Range(0, 1 << 16));

  // real-prob
  experiments::RealProbConfig rp;
  auto* realp = app.add_subcommand("real-prob", "probability that every root is real");
  add_common(realp, rp.common);

  // conditioned
  experiments::ConditionedConfig co;
  auto* cond = app.add_subcommand("conditioned", "root profile conditioned on all roots real (n <= 5)");
  add_common(cond, co.common);
  cond->add_option("--min-accepted", co.min_accepted, "accepted trials below this raise a warning");

  for (CLI::App* sub : app.get_subcommands({}))
    sub->footer("Global options (before or after the subcommand): --format {json,csv} [json], "
                "--out FILE [stdout], --workers INT [RPZ_WORKERS or hardware threads].");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ExperimentReport r;
    if (*sample) {
      const Polynomial p = sample_exponential_poly(s_n, s_seed, s_trial);
      r.experiment = "sample";
      r.config = {{"n", s_n}, {"seed", s_seed}, {"trial", s_trial}};
      r.columns = {"index", "coefficient"};
      for (int j = 0; j <= p.degree(); ++j) r.rows.push_back(ojson::array({j, p[j]}));
      r.summary["xn"] = experiments::xn_statistic(p);
      return emit(r, out);
    }
    if (*roots) {
      const Polynomial p = r_coeffs.empty() ? sample_exponential_poly(r_n, r_seed, r_trial)
                                            : Polynomial(parse_list(r_coeffs));
      r.experiment = "roots";
      if (r_coeffs.empty())
        r.config = {{"n", r_n}, {"seed", r_seed}, {"trial", r_trial}, {"tol", r_tol}};
      else
        r.config = {{"coeffs", coefficients_json(p)}, {"tol", r_tol}};
      r.columns = {"index", "re", "im", "backward_error"};
      try {
        const RootConfiguration cfg = find_roots(p, r_tol);
        const auto all = cfg.all_roots();
        double worst = 0.0;
        for (std::size_t i = 0; i < all.size(); ++i) {
          r.rows.push_back(ojson::array({i, all[i].real(), all[i].imag(), cfg.backward_errors[i]}));
          worst = std::max(worst, cfg.backward_errors[i]);
        }
        r.summary["degree"] = cfg.degree;
        r.summary["k"] = cfg.k();
        r.summary["real_roots"] = cfg.reals.size();
        r.summary["max_backward_error"] = worst;
        r.summary["bnk_positive"] = nullptr;
        try {
          r.summary["bnk_positive"] = bnk_membership(cfg);
        } catch (const InconclusiveError&) {
          r.warnings.push_back("monic expansion has a coefficient inside the guard band");
        }
        r.gates.push_back(make_gate("max_backward_error", worst, "<=", r_tol));
      } catch (const ConvergenceError& e) {
        r.warnings.push_back(e.what());
        r.gates.push_back(make_gate("certified", 0, ">=", 1));
      } catch (const AccuracyError& e) {
        r.warnings.push_back(e.what());
        r.gates.push_back(make_gate("max_backward_error", e.achieved_error(), "<=", r_tol));
      }
      return emit(r, out);
    }
    if (*rate) {
      const Loaded l = load_measure(rate_m);
      r.experiment = "rate";
      r.config = rate_m.to_json();
      r.config["rate_tol"] = rate_tol;
      Verdict v;
      if (l.known) {
        v = *l.known;
        r.summary["membership"] = "by construction";
      } else {
        const MembershipVerdict mv = membership(l, workers);
        v = mv.verdict;
        r.summary["membership"] = sanitize(to_json(mv));
      }
      const RateResult rr = l.empirical ? rate_function(*l.empirical, v) : rate_function(*l.grid, v, rate_tol);
      r.summary["verdict"] = std::string(verdict_name(rr.verdict));
      r.summary["value"] = rr.value;
      r.summary["linear_term"] = rr.linear_term;
      r.summary["energy_term"] = rr.energy_term;
      r.summary["error_bound"] = rr.error_bound;
      if (rate_m.kind == "unity") {
        const double k = rate_m.n;
        r.summary["closed_form"] = std::numbers::ln2 / k - std::log(k) / (2.0 * k);
      }
      r.summary = sanitize(r.summary);
      return emit(r, out);
    }
    if (*checkp) {
      r.experiment = "check-p";
      std::string verdict;
      if (!cp_poly.empty()) {
        const ExactPolynomial p = parse_exact(cp_poly);
        r.config = {{"poly", cp_poly}, {"m_max", cp_mmax}};
        const auto m = de_angelis_smallest_m(p, cp_mmax);
        const ConditionIII c3 = de_angelis_condition_iii(p.to_double(), {}, workers);
        r.summary["smallest_m"] = m ? ojson(*m) : ojson(nullptr);
        r.summary["condition_iii"] = c3.ok;
        r.summary["a1_positive"] = c3.a1_positive;
        r.summary["ad1_positive"] = c3.ad1_positive;
        r.summary["reason"] = c3.reason;
        if (c3.witness) r.summary["witness"] = {c3.witness->real(), c3.witness->imag()};
        r.summary["routes_agree"] = m.has_value() == c3.ok;
        r.gates.push_back(make_gate("routes_agree", m.has_value() == c3.ok, ">=", 1));
        verdict = m ? "inside" : (c3.ok ? "inconclusive" : "outside");
      } else {
        const Loaded l = load_measure(cp_m);
        r.config = cp_m.to_json();
        const MembershipVerdict mv = membership(l, workers);
        r.summary["bes"] = sanitize(to_json(mv));
        verdict = mv.verdict == Verdict::verified_inside    ? "inside"
                  : mv.verdict == Verdict::verified_outside ? "outside"
                                                            : "inconclusive";
        if (l.empirical) {
          ojson cones = ojson::array();
          int violations = 0;
          for (int j = 1; j <= 15; ++j) {
            const ObrechkoffResult o = obrechkoff_mass(*l.empirical, ConeSpec(std::numbers::pi * j / 16.0));
            violations += !o.ok;
            cones.push_back({{"alpha", std::numbers::pi * j / 16.0}, {"mass", o.mass}, {"bound", o.bound}});
          }
          r.summary["obrechkoff"] = cones;
          r.summary["obrechkoff_violations"] = violations;
        }
      }
      r.config["expect"] = cp_expect;
      r.summary["verdict"] = verdict;
      if (cp_expect != "any") r.gates.push_back(make_gate("verdict_matches", verdict == cp_expect, ">=", 1));
      return emit(r, out);
    }
    if (*equil) {
      namespace eq = equilibrium;
      r.experiment = "equilibrium";
      r.config = {{"quad_tol", eq_tol}, {"gamma", eq_gamma}, {"points", eq_points},
                  {"mc_samples", eq_mc}, {"seed", eq_seed}};
      const auto xs = eq::log_grid(1e-2, 1e2, eq_points);
      double max_res = 0.0;
      r.columns = {"x", "potential", "residual", "abs_error"};
      for (double x : xs) {
        const auto v = eq::equilibrium_potential_residual(x, eq_tol);
        max_res = std::max(max_res, std::fabs(v.residual));
        r.rows.push_back(ojson::array({x, v.potential, v.residual, v.abs_error}));
      }
      const auto ys = eq::log_grid(1e-2, 1e2, 9);
      const auto var = eq::variational_residual(eq_gamma, xs, ys, eq_tol);
      const auto control = eq::variational_residual(eq_gamma, xs, ys, eq_tol, eq::Candidate::uniform_unit);
      const auto ir = eq::rate_at_equilibrium(eq_tol);
      r.summary["max_potential_residual"] = max_res;
      r.summary["C"] = var.C;
      r.summary["variational_max_residual"] = var.max_residual;
      r.summary["control_max_residual"] = control.max_residual;
      r.summary["I_R"] = ir.value;
      r.summary["I_R_first_term"] = ir.first_term;
      r.summary["I_R_energy"] = ir.energy;
      r.summary["I_R_abs_error"] = ir.abs_error;
      const double tol_scale = std::max(1e-5, 10.0 * eq_tol);
      r.gates.push_back(make_gate("max_potential_residual", max_res, "<=", tol_scale));
      r.gates.push_back(make_gate("abs_C", std::fabs(var.C), "<=", tol_scale));
      r.gates.push_back(make_gate("control_max_residual", control.max_residual, ">", 0.1));
      r.gates.push_back(make_gate("I_R_error", std::fabs(ir.value - std::numbers::ln2), "<=", 1e-3));
      if (eq_mc > 0) {
        const auto mc = eq::monte_carlo_rate(eq_mc, eq_seed, workers);
        r.summary["mc_value"] = mc.value;
        r.summary["mc_value_se"] = mc.value_se;
        r.gates.push_back(make_gate("mc_vs_quadrature", std::fabs(mc.value - ir.value), "<=", 5e-3));
      }
      return emit(r, out);
    }
    if (*ldp) {
      ldp_c.workers = workers;
      if (ldp_kind == "tail") {
        experiments::XnTailConfig c{.common = ldp_c, .B = ldp_B};
        return emit(experiments::xn_tail_experiment(c), out);
      }
      if (ldp_kind == "circle") {
        experiments::CircleConfig c{.common = ldp_c, .delta = ldp_delta, .sectors = ldp_sectors,
                                    .compare_n = ldp_compare};
        return emit(experiments::circle_convergence_experiment(c), out);
      }
      experiments::LdpStatsConfig c{.common = ldp_c};
      return emit(experiments::ldp_statistics(c), out);
    }
    if (*realp) {
      rp.common.workers = workers;
      return emit(experiments::all_real_probability(rp), out);
    }
    if (*cond) {
      co.common.workers = workers;
      return emit(experiments::conditioned_real_profile(co), out);
    }
  } catch (const std::exception& e) {
    std::cerr << "rpz: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
