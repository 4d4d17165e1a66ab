#include "rpz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace rpz {

namespace {

// Kronrod 15-point abscissae; odd indices are the embedded Gauss 7 nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::fabs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

  const double value = resk * h;
  resabs *= std::fabs(h);
  resasc *= std::fabs(h);
  double err = std::fabs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);
  return {a, b, value, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts, std::span<const double> breakpoints) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Segment s = gk15(f, cuts[i], cuts[i + 1]);
    out.evaluations += 15;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }

  int intervals = static_cast<int>(heap.size());
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::fabs(total)); };
  while (total_err > target() && intervals < opts.max_intervals) {
    const Segment s = heap.top();
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b)) break;  // interval can no longer be split
    heap.pop();
    const Segment l = gk15(f, s.a, mid);
    const Segment r = gk15(f, mid, s.b);
    out.evaluations += 30;
    total += l.value + r.value - s.value;
    total_err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
    ++intervals;
  }

  // Re-add from scratch so the reported value does not carry the running
  // update's rounding drift.
  total = 0.0;
  total_err = 0.0;
  std::vector<Segment> segs;
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const Segment& s : segs) {
    total += s.value;
    total_err += s.error;
  }
  out.value = sign * total;
  out.abs_error = total_err;
  out.converged = total_err <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(total));
  return out;
}

QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 const QuadOptions& opts) {
  auto g = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double x = a + (1.0 - t) / t;
    return f(x) / (t * t);
  };
  return integrate(g, 0.0, 1.0, opts);
}

}  // namespace rpz
