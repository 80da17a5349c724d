#include "crcensus/quadrature/gauss_kronrod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "crcensus/errors.hpp"

namespace crcensus::quadrature {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double rule_error = 0.0;
  double inherited = 0.0;
  double l1 = 0.0;
  bool splittable = true;
};

// Node layout: x[0..6] = c - h*xgk[0..6], x[7] = c, x[8..14] = c + h*xgk[6..0].
Interval evaluate(const BatchIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, kGkNodes> x{}, fx{}, ex{}, ax{};
  for (std::size_t j = 0; j < 7; ++j) {
    x[j] = c - h * kXgk[j];
    x[14 - j] = c + h * kXgk[j];
  }
  x[7] = c;
  fx.fill(0.0);
  ex.fill(0.0);
  ax.fill(-1.0);
  f(x, NodeValues{fx, ex, ax});
  for (std::size_t j = 0; j < kGkNodes; ++j) {
    if (ax[j] < 0.0) ax[j] = std::abs(fx[j]);
  }

  const double fc = fx[7];
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = ax[7] * kWgk[7];
  double inherited = std::abs(ex[7]) * kWgk[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double f1 = fx[j];
    const double f2 = fx[14 - j];
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (ax[j] + ax[14 - j]);
    inherited += kWgk[j] * (std::abs(ex[j]) + std::abs(ex[14 - j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (std::size_t j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fx[j] - reskh) + std::abs(fx[14 - j] - reskh));
  }
  const double dh = std::abs(h);
  Interval out;
  out.a = a;
  out.b = b;
  out.value = resk * h;
  out.l1 = resabs * dh;
  resasc *= dh;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (out.l1 > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * out.l1, err);
  out.rule_error = err;
  out.inherited = inherited * dh;
  out.splittable = dh > 100.0 * kEps * std::max(std::abs(a), std::abs(b)) && dh > 1e-300;
  if (!std::isfinite(out.value)) {
    throw NumericalInconsistency("integrate_gk15: non-finite integrand value");
  }
  return out;
}

}  // namespace

const std::array<double, 8>& kronrod_nodes() { return kXgk; }
const std::array<double, 8>& kronrod_weights() { return kWgk; }

GkResult integrate_gk15(const BatchIntegrand& f, std::span<const double> breaks, const GkOptions& options) {
  if (breaks.size() < 2) throw DomainError("integrate_gk15: need at least two break points");
  std::vector<Interval> intervals;
  intervals.reserve(std::max<std::size_t>(options.max_intervals, breaks.size()));
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) throw DomainError("integrate_gk15: break points must increase");
    intervals.push_back(evaluate(f, breaks[i], breaks[i + 1]));
  }

  auto by_error = [&intervals](std::size_t l, std::size_t r) {
    return intervals[l].rule_error < intervals[r].rule_error;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)> heap(by_error);
  for (std::size_t i = 0; i < intervals.size(); ++i) heap.push(i);

  auto totals = [&intervals](double& value, double& rule, double& inherited, double& l1) {
    value = rule = inherited = l1 = 0.0;
    for (const auto& iv : intervals) {
      value += iv.value;
      rule += iv.rule_error;
      inherited += iv.inherited;
      l1 += iv.l1;
    }
  };

  double value = 0.0, rule = 0.0, inherited = 0.0, l1 = 0.0;
  totals(value, rule, inherited, l1);
  auto target = [&options](double v, double l) {
    const double scale = options.relative_to_l1 ? l : std::abs(v);
    return std::max(options.abs_tol, options.rel_tol * scale);
  };

  while (rule + inherited > target(value, l1) && intervals.size() < options.max_intervals && !heap.empty()) {
    // splitting only reduces the rule part; stop once the inherited part dominates
    if (rule <= 0.25 * target(value, l1)) break;
    const std::size_t worst = heap.top();
    heap.pop();
    if (!intervals[worst].splittable) continue;
    const Interval old = intervals[worst];
    const double mid = 0.5 * (old.a + old.b);
    Interval left = evaluate(f, old.a, mid);
    Interval right = evaluate(f, mid, old.b);
    value += left.value + right.value - old.value;
    rule += left.rule_error + right.rule_error - old.rule_error;
    inherited += left.inherited + right.inherited - old.inherited;
    l1 += left.l1 + right.l1 - old.l1;
    intervals[worst] = left;
    intervals.push_back(right);
    heap.push(worst);
    heap.push(intervals.size() - 1);
  }

  // Re-sum in left-to-right order so the result does not depend on the update history.
  std::sort(intervals.begin(), intervals.end(), [](const Interval& l, const Interval& r) { return l.a < r.a; });
  totals(value, rule, inherited, l1);

  GkResult out;
  out.value = value;
  out.abs_error_estimate = rule + inherited;
  out.inherited_error = inherited;
  out.l1 = l1;
  out.subdivisions = intervals.size();
  out.converged = out.abs_error_estimate <= target(value, l1);
  return out;
}

GkResult integrate_gk15(const std::function<double(double)>& f, double a, double b, const GkOptions& options) {
  const BatchIntegrand batch = [&f](std::span<const double> x, const NodeValues& out) {
    for (std::size_t i = 0; i < x.size(); ++i) out.f[i] = f(x[i]);
  };
  const std::array<double, 2> breaks{a, b};
  return integrate_gk15(batch, breaks, options);
}

}  // namespace crcensus::quadrature
