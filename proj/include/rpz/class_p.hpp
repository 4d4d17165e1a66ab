#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpz/measures.hpp"
#include "rpz/polynomial.hpp"
#include "rpz/roots.hpp"
#include "rpz/verdict.hpp"

namespace rpz {

/// Closed cone {z : |arg z| <= alpha} around the positive axis, 0 < alpha < pi.
struct ConeSpec {
  double alpha;
  explicit ConeSpec(double alpha_);
};

struct ObrechkoffResult {
  double mass;   // mu(C_alpha), boundary atoms counted inside
  double bound;  // 2 alpha / pi
  bool ok;       // mass <= bound + 1e-12
};

ObrechkoffResult obrechkoff_mass(const EmpiricalMeasure& mu, const ConeSpec& cone);

struct NearOneTail {
  double mass;      // mu(A_M), A_M = {log|1 - z| <= -M}
  double integral;  // integral over A_M of |log|1 - z||
};

NearOneTail near_one_tail(const EmpiricalMeasure& mu, double M);

/// sum_{j >= ceil(M)} 4 j e^{-j}.
double near_one_budget(double M);

/// Result of a numerical class-P test. margin is the signed worst-case slack:
/// positive means every sampled inequality held with that much room.
struct MembershipVerdict {
  Verdict verdict = Verdict::inconclusive;
  double margin = 0.0;
  nlohmann::ordered_json evidence = nlohmann::ordered_json::object();
};

struct BesPolicy {
  int min_angles = 64;
  int min_radii = 32;
  double outside_tol = 1e-9;    // D above this is a violation
  double margin_floor = 1e-12;  // inside requires max D below -margin_floor
};

/// Scans D(r, theta) = Lhat(r e^{i theta}) - Lhat(r) for theta in (0, pi].
/// verified-outside when some D > outside_tol (location in evidence);
/// verified-inside when max D < -margin_floor and the grid meets the policy
/// (enough radii and angles, radii covering [min|w| / 2, 2 max|w|] of the support);
/// inconclusive otherwise. Throws SymmetryError for non-symmetric input.
MembershipVerdict bes_condition(const EmpiricalMeasure& mu, std::span<const double> radii,
                                std::span<const double> angles, const BesPolicy& policy = {},
                                int workers = 1);
MembershipVerdict bes_condition(const GridDensityMeasure& mu, std::span<const double> radii,
                                std::span<const double> angles, const BesPolicy& policy = {},
                                int workers = 1);

struct BesGrid {
  std::vector<double> radii;
  std::vector<double> angles;
};

/// Grid meeting the default policy: 64 log-spaced radii over the support range
/// and angles pi j / 128, j = 1..128.
BesGrid default_bes_grid(double min_modulus, double max_modulus);

/// Smallest m <= m_max with every coefficient of p^m strictly positive.
/// Throws PreconditionError unless a_0 > 0 and a_d > 0.
std::optional<int> de_angelis_smallest_m(const ExactPolynomial& p, int m_max);

struct DeAngelisGrid {
  int radii = 10000;
  double r_min = 1e-3;
  double r_max = 1e3;
  int angles = 1000;
  double rel_tol = 1e-12;  // |f(z)| >= (1 - rel_tol) f(|z|) counts as a violation
  int refine_candidates = 16;
};

struct ConditionIII {
  bool ok = false;
  bool a1_positive = false;
  bool ad1_positive = false;
  std::optional<std::complex<double>> witness;
  double witness_gap = 0.0;  // 1 - |f(z)| / f(|z|) at the witness
  std::string reason;
};

/// De Angelis condition (iii): a_1 > 0, a_{d-1} > 0 and |f(z)| < f(|z|) off [0, inf).
/// The inequality is sampled on a log-radius x angle grid; the points with the
/// smallest normalized gap (1 - |f(z)|/f(|z|)) / (1 - cos theta) are then refined
/// by pattern search, which finds isolated tangencies between grid nodes. The scan
/// runs even when a coefficient test fails, so witness is set whenever one is found.
/// Throws PreconditionError unless a_0 > 0 and a_d > 0.
ConditionIII de_angelis_condition_iii(const Polynomial& p, const DeAngelisGrid& grid = {},
                                      int workers = 1);

/// Fixed corpus of 50 exact polynomials of degree 2..8 used to cross-check the
/// two De Angelis routes.
std::vector<ExactPolynomial> de_angelis_corpus();

/// True iff the monic polynomial with the configuration's roots, expanded exactly
/// from its real quadratic and linear factors, has all coefficients positive.
/// An exactly zero or clearly negative coefficient gives false; a nonzero
/// coefficient within 1e-10 * max|c| of 0 throws InconclusiveError.
bool bnk_membership(const RootConfiguration& cfg);

nlohmann::ordered_json to_json(const MembershipVerdict& v);

}  // namespace rpz
