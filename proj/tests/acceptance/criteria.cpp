#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <unistd.h>

#include <Eigen/Dense>

#include "crcensus/counts/census.hpp"
#include "crcensus/critical/profile.hpp"
#include "crcensus/errors.hpp"
#include "crcensus/flow/reduced_flow.hpp"
#include "crcensus/geometry/heisenberg.hpp"
#include "crcensus/geometry/sublaplacian.hpp"
#include "crcensus/interaction/matrix.hpp"
#include "crcensus/quadrature/constants.hpp"
#include "crcensus/quadrature/gauss_kronrod.hpp"
#include "crcensus/quadrature/integrate.hpp"
#include "crcensus/quadrature/kernels.hpp"
#include "crcensus/report/cache.hpp"
#include "crcensus/report/config.hpp"
#include "crcensus/report/pipeline.hpp"

namespace acceptance {

using namespace crcensus;
using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

// ---- shared fixtures -------------------------------------------------------

report::FileConstantCache& cache() {
  static report::FileConstantCache c(report::FileConstantCache::default_directory());
  return c;
}

const quadrature::StructuralConstants& constants_at(double beta) {
  static std::map<double, quadrature::StructuralConstants> memo;
  auto it = memo.find(beta);
  if (it == memo.end()) it = memo.emplace(beta, quadrature::compute_structural_constants(beta, 1e-8, &cache())).first;
  return it->second;
}

std::string num(double v, int digits = 3) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

geometry::SpherePoint random_sphere(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  while (true) {
    Complex a(n(rng), n(rng)), b(n(rng), n(rng));
    const double r = std::sqrt(std::norm(a) + std::norm(b));
    a /= r;
    b /= r;
    if (std::abs(1.0 + b) > 0.3) return {a, b};
  }
}

// |1 - zeta1 conj(eta1) - zeta2 conj(eta2)|, written out independently of the library.
double distance_sq(const geometry::SpherePoint& a, const geometry::SpherePoint& b) {
  return std::abs(1.0 - a.zeta1() * std::conj(b.zeta1()) - a.zeta2() * std::conj(b.zeta2()));
}

// The interaction matrix from its defining formulas.
Eigen::MatrixXd oracle_matrix(const std::vector<critical::CriticalPointProfile>& ps, double c_G) {
  const auto& k = constants_at(2.0);
  const auto n = static_cast<Eigen::Index>(ps.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = ps[static_cast<std::size_t>(i)];
    const double sigma = p.b.b1 + p.b.b2 + k.kappa_prime.value * p.b.b0;
    m(i, i) = -k.c.value * sigma / (2.0 * p.k_value * p.k_value);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& q = ps[static_cast<std::size_t>(j)];
      const double g = c_G / distance_sq(p.position, q.position);
      m(i, j) = -2.0 * kPi * k.omega3.value * g / std::sqrt(p.k_value * q.k_value);
    }
  }
  return m;
}

double oracle_least(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

critical::CriticalPointProfile random_profile(std::mt19937_64& rng, const std::string& id, double beta, bool negative) {
  std::uniform_real_distribution<double> coef(negative ? -4.0 : -1.0, negative ? 1.0 : 4.0);
  std::uniform_real_distribution<double> kv(0.5, 2.0);
  const double kp = constants_at(beta).kappa_prime.value;
  critical::CriticalPointProfile p;
  p.id = id;
  p.beta = beta;
  p.position = random_sphere(rng);
  p.k_value = kv(rng);
  while (true) {
    p.b = {coef(rng), coef(rng), coef(rng)};
    const double sigma = p.b.b1 + p.b.b2 + kp * p.b.b0;
    if (negative ? sigma <= -0.5 : sigma >= 0.5) return p;
  }
}

// ---- criteria --------------------------------------------------------------

Outcome cayley_round_trip() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst_sphere = 0.0, worst_chart = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto zeta = random_sphere(rng);
    const auto back = geometry::cayley_inverse(geometry::cayley_forward(zeta));
    worst_sphere = std::max({worst_sphere, std::abs(back.zeta1() - zeta.zeta1()), std::abs(back.zeta2() - zeta.zeta2())});
    const geometry::HeisenbergPoint g(u(rng), u(rng), u(rng));
    const auto h = geometry::cayley_forward(geometry::cayley_inverse(g));
    const double scale = std::max(1.0, geometry::koranyi_norm(g) * geometry::koranyi_norm(g));
    worst_chart = std::max(worst_chart, std::max(std::abs(h.z - g.z), std::abs(h.t - g.t)) / scale);
  }
  const double worst = std::max(worst_sphere, worst_chart);
  return {worst < 1e-10, "max deviation sphere " + num(worst_sphere) + ", chart " + num(worst_chart) + " (< 1e-10)"};
}

Outcome jerison_lee_residual() {
  const auto points = geometry::default_c0_sample_points();
  const auto est = geometry::c0_squared(points);
  const bool ok = est.spread < 1e-6 && points.size() >= 20;
  return {ok, "c0^2 = " + num(est.value, 12) + ", relative spread " + num(est.spread) + " over " +
                  std::to_string(points.size()) + " points (< 1e-6)"};
}

Outcome volume_transport() {
  const double c0 = geometry::jerison_lee_c0();
  const auto centre = geometry::cayley_inverse(geometry::HeisenbergPoint(0.3, -0.2, 0.1));
  const auto g0 = geometry::cayley_forward(centre);
  std::string detail;
  bool ok = true;
  for (double lambda : {1.0, 10.0}) {
    const simd::Focus focus{g0.x1(), g0.x2(), g0.t, 1.0 / lambda};
    const geometry::SphereBubbleParams sp(centre, lambda);
    const auto sphere = quadrature::integrate_sphere(
        [&](const geometry::SpherePoint& z) { return std::pow(geometry::sphere_bubble(sp, z, c0), 4); }, 1e-9, focus);
    quadrature::IntegralSpec spec;
    spec.name = "bubble-4";
    spec.tolerance = 1e-9;
    spec.focus = focus;
    spec.decay = 8.0;
    const geometry::BubbleParams bp(g0, lambda);
    spec.body = [&](const quadrature::PointBatch& p, std::span<double> out) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        out[i] = std::pow(geometry::bubble_w(bp, geometry::HeisenbergPoint(p.x1[i], p.x2[i], p.t[i]), c0), 4);
      }
    };
    const auto chart = quadrature::integrate_h1(spec);
    const double rel = std::abs(sphere.value - chart.value) / std::abs(chart.value);
    ok = ok && rel < 1e-6;
    detail += "lambda=" + num(lambda) + ": " + num(sphere.value, 12) + " vs " + num(chart.value, 12) + " (rel " +
              num(rel) + ") ";
  }
  return {ok, detail + "(< 1e-6)"};
}

Outcome constants_suite() {
  const double tol = 1e-10;
  const auto omega = quadrature::integrate_h1(quadrature::kernels::koranyi_ball(tol));
  // exact reduction: 4 * area of {|z|^2 <= sqrt(1 - t^2)} integrated over t
  const auto reduced = quadrature::integrate_gk15(
      [](double t) { return 4.0 * kPi * std::sqrt(std::max(0.0, 1.0 - t * t)); }, -1.0, 1.0,
      quadrature::GkOptions{0.0, 1e-13, false, 2000});
  const double exact = 2.0 * kPi * kPi;
  bool ok = std::abs(omega.value - exact) < 1e-8 && std::abs(reduced.value - exact) < 1e-8;

  std::vector<std::pair<std::string, quadrature::IntegralSpec>> specs = {
      {"omega3", quadrature::kernels::koranyi_ball(1e-8)},
      {"c", quadrature::kernels::c_kernel(1e-8)},
      {"jl3", quadrature::kernels::jl_power(3, 1e-8)},
      {"jl4", quadrature::kernels::jl_power(4, 1e-8)},
  };
  for (double beta : {2.0, 2.5, 3.0, 3.5}) {
    const std::string b = num(beta);
    specs.push_back({"kappa-num(" + b + ")", quadrature::kernels::kappa_numerator(beta, 1e-8)});
    specs.push_back({"kappa-den(" + b + ")", quadrature::kernels::kappa_denominator(beta, quadrature::kernels::Axis::X1, 1e-8)});
    specs.push_back({"kappa'-num(" + b + ")", quadrature::kernels::kappa_prime_numerator(beta, 1e-8)});
    specs.push_back(
        {"kappa'-den(" + b + ")", quadrature::kernels::kappa_prime_denominator(beta, quadrature::kernels::Axis::X1, 1e-8)});
  }
  double worst_z = 0.0;
  std::string worst_name;
  std::uint64_t seed = 400;
  for (const auto& [name, spec] : specs) {
    const double q = quadrature::integrate_h1(spec).value;
    const auto mc = quadrature::monte_carlo_oracle(spec, 1000000, seed++);
    const double z = std::abs(q - mc.value) / mc.standard_error;
    if (z > worst_z) {
      worst_z = z;
      worst_name = name;
    }
  }
  ok = ok && worst_z <= 3.0;
  return {ok, "omega3 quad " + num(omega.value, 15) + ", 1-D " + num(reduced.value, 15) + " vs 2 pi^2; " +
                  std::to_string(specs.size()) + " integrals vs MC, worst " + num(worst_z) + " s.e. (" + worst_name +
                  ", <= 3)"};
}

Outcome odd_kernels() {
  bool ok = true;
  std::string detail = "kappa'(beta):";
  for (double beta : {2.0, 2.5, 3.0, 3.5}) {
    const auto kp = quadrature::compute_kappa_prime(beta, 1e-8, &cache());
    ok = ok && kp.value > 0.0;
    detail += " " + num(kp.value, 8);
  }
  double worst = 0.0;
  for (double beta : {2.0, 2.5, 3.0, 3.5}) {
    for (int k : {0, 1, 2}) {
      const auto d = quadrature::dk_integrals(beta, geometry::HeisenbergPoint{}, k, 1e-6);
      worst = std::max({worst, std::abs(d.horizontal.value), std::abs(d.vertical.value)});
    }
  }
  ok = ok && worst <= 1e-6;
  detail += "; dk at zero shift max |value| " + num(worst) + " (<= 1e-6)";

  auto odd = [](std::string name, std::function<double(double, double, double)> f, int jl) {
    quadrature::IntegralSpec spec;
    spec.name = std::move(name);
    spec.tolerance = 1e-8;
    spec.decay = 2.0 * jl - 2.0;
    spec.body = [f, jl](const quadrature::PointBatch& p, std::span<double> out) {
      simd::jl_inverse_power(p.r2, p.t, jl, out);
      for (std::size_t i = 0; i < p.size(); ++i) out[i] *= f(p.x1[i], p.x2[i], p.t[i]);
    };
    return quadrature::integrate_h1(spec).value;
  };
  const double o1 = odd("x1", [](double x1, double, double) { return x1; }, 6);
  const double o2 = odd("t", [](double, double, double t) { return t; }, 6);
  const double o3 = odd("x2 t", [](double, double x2, double t) { return x2 * t; }, 8);
  const double worst_odd = std::max({std::abs(o1), std::abs(o2), std::abs(o3)});
  ok = ok && worst_odd <= 1e-8;
  detail += "; x1, t, x2 t kernels max |value| " + num(worst_odd) + " (<= 1e-8)";
  return {ok, detail};
}

Outcome enumeration_oracle() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> size(1, 10);
  std::uniform_real_distribution<double> cg(0.5, 2.0);
  std::bernoulli_distribution coin(0.5);
  int mismatches = 0, skipped = 0, total_sets = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const int r = size(rng);
    const double c_G = cg(rng);
    std::vector<critical::CriticalPointProfile> ps;
    for (int i = 0; i < r; ++i) {
      // random signs with magnitudes in [0.2, 3]; only K1 points enter
      std::uniform_real_distribution<double> mag(0.2, 3.0);
      critical::CriticalPointProfile p;
      p.id = "p" + std::to_string(i);
      p.position = random_sphere(rng);
      p.k_value = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
      do {
        p.b = {(coin(rng) ? -1 : 1) * mag(rng), (coin(rng) ? -1 : 1) * mag(rng), (coin(rng) ? -1 : 1) * mag(rng)};
      } while (p.b.b1 + p.b.b2 + constants_at(2.0).kappa_prime.value * p.b.b0 > -0.1);
      ps.push_back(p);
    }
    std::vector<std::vector<std::string>> brute;
    bool marginal = false;
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
      std::vector<critical::CriticalPointProfile> sub;
      for (int i = 0; i < r; ++i) {
        if (mask & (1u << i)) sub.push_back(ps[static_cast<std::size_t>(i)]);
      }
      const double rho = oracle_least(oracle_matrix(sub, c_G));
      if (std::abs(rho) <= 1e-9) marginal = true;
      if (rho > 0.0) {
        std::vector<std::string> ids;
        for (const auto& p : sub) ids.push_back(p.id);
        brute.push_back(ids);
      }
    }
    if (marginal) {
      ++skipped;
      continue;
    }
    counts::EnumerationConfig ec;
    ec.green.c_G = c_G;
    const auto pruned = counts::enumerate_k1_plus(ps, constants_at(2.0), ec);
    std::vector<std::vector<std::string>> got;
    for (const auto& t : pruned) got.push_back(t.members);
    std::sort(brute.begin(), brute.end());
    std::sort(got.begin(), got.end());
    total_sets += static_cast<int>(brute.size());
    if (brute != got) ++mismatches;
  }
  return {mismatches == 0 && skipped == 0, std::to_string(mismatches) + " mismatches over 100 instances (" +
                                               std::to_string(total_sets) + " PD subsets, " + std::to_string(skipped) +
                                               " marginal instances skipped)"};
}

Outcome counting_consistency() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> m_dist(0, 3), n_dist(0, 4), p_dist(1, 4);
  int failures = 0, checks = 0;
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<counts::SingleEntry> k2;
    std::vector<counts::TupleEntry> tuples;
    const int n2 = n_dist(rng), nt = n_dist(rng);
    for (int i = 0; i < n2; ++i) k2.push_back({"s" + std::to_string(i), m_dist(rng)});
    for (int i = 0; i < nt; ++i) {
      counts::TupleEntry t;
      const int p = p_dist(rng);
      for (int j = 0; j < p; ++j) {
        t.positions.push_back(static_cast<std::size_t>(j));
        t.members.push_back("t" + std::to_string(i) + "_" + std::to_string(j));
        t.m.push_back(m_dist(rng));
      }
      t.rho = 1.0;
      const int msum = t.m_sum();
      // parity identity (-1)^(4p-1-sum m) = -(-1)^(sum m)
      if (((4 * p - 1 - msum) % 2 == 0 ? 1 : -1) != -(msum % 2 == 0 ? 1 : -1)) ++failures;
      tuples.push_back(t);
    }
    std::vector<int> indices;
    for (const auto& s : k2) indices.push_back(3 - s.m);
    for (const auto& t : tuples) indices.push_back(4 * static_cast<int>(t.members.size()) - 1 - t.m_sum());
    const int L0 = indices.empty() ? 0 : *std::max_element(indices.begin(), indices.end());
    try {
      const auto census = counts::indices_at_infinity(tuples, k2);
      if (census.L0 != L0) ++failures;
      for (int k = 1; k <= L0 + 1; ++k) {
        int sum = 0;
        for (int idx : indices) {
          if (idx <= k - 1) sum += idx % 2 == 0 ? 1 : -1;
        }
        const int expected = 1 - (1 - sum);
        const auto gate = counts::existence_gate(census, k);
        ++checks;
        if (gate.sum != expected || counts::multiplicity_bound(census, k) != std::abs(1 - sum)) ++failures;
      }
      const auto full = counts::full_criterion(census);
      const auto last = counts::existence_gate(census, L0 + 1);
      if (full.k != L0 + 1 || full.exists != last.verdict || full.gate.sum != last.sum ||
          full.total_bound != counts::multiplicity_bound(census, L0 + 1)) {
        ++failures;
      }
    } catch (const Error&) {
      ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " failures over 100 censuses (" + std::to_string(checks) + " gate checks)"};
}

// Roots of the characteristic polynomial of a symmetric matrix of size <= 3.
double characteristic_least(const Eigen::Matrix3d& a, int n) {
  if (n == 1) return a(0, 0);
  if (n == 2) {
    const double tr = a(0, 0) + a(1, 1);
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
  }
  // trigonometric form for the three real roots
  const double q = a.trace() / 3.0;
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) + (a(2, 2) - q) * (a(2, 2) - q) +
                    2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p == 0.0) return q;
  const Eigen::Matrix3d b = (a - q * Eigen::Matrix3d::Identity()) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
}

Outcome eigenvalue_oracle() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> size(1, 3);
  double worst = 0.0;
  int disagreements = 0, compared = 0, pd_count = 0;
  const double margin = interaction::kDefaultPdMargin;
  for (int i = 0; i < 10000; ++i) {
    const int n = size(rng);
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    for (int r = 0; r < n; ++r) {
      for (int c = r; c < n; ++c) a(r, c) = a(c, r) = u(rng);
    }
    if (i % 2 == 0) {
      // half of the sample is pushed toward positive definiteness
      const Eigen::Matrix3d b = a;
      a = b * b.transpose();
      a.topLeftCorner(n, n) += 0.01 * Eigen::MatrixXd::Identity(n, n);
    }
    const Eigen::MatrixXd m = a.topLeftCorner(n, n);
    const double rho = interaction::least_eigenvalue(m);
    worst = std::max(worst, std::abs(rho - characteristic_least(a, n)));
    if (std::abs(rho) > margin) {
      ++compared;
      const bool pd = rho > margin;
      pd_count += pd;
      if (interaction::pivot_positive_definite(m) != pd) ++disagreements;
    }
  }
  return {worst < 1e-10 && disagreements == 0,
          "max |Jacobi - characteristic root| " + num(worst) + " (< 1e-10); pivot vs eigenvalue disagreements " +
              std::to_string(disagreements) + " of " + std::to_string(compared) + " (" + std::to_string(pd_count) +
              " PD)"};
}

struct FlowRun {
  flow::FlowResult result;
  bool descent = true;
  double max_ratio = 1.0;
};

FlowRun run_flow(const std::vector<critical::CriticalPointProfile>& ps, const std::vector<double>& lambdas) {
  flow::FlowModel model(ps, [](double beta) { return constants_at(beta); });
  flow::BubbleEnsemble ens;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    flow::Bubble b;
    b.profile_id = ps[i].id;
    b.lambda = lambdas[i];
    ens.bubbles.push_back(b);
  }
  FlowRun run;
  run.result = flow::integrate_flow(model, ens);
  const auto& j = run.result.fate.j_history;
  for (std::size_t n = 1; n < j.size(); ++n) run.descent = run.descent && j[n] <= j[n - 1] + 1e-12;
  for (const auto& l : run.result.fate.lambda_history) {
    run.max_ratio = std::max(run.max_ratio, *std::max_element(l.begin(), l.end()) / *std::min_element(l.begin(), l.end()));
  }
  return run;
}

Outcome flow_properties() {
  bool descent = true;
  std::string detail;

  // single K2 bubble
  critical::CriticalPointProfile k2;
  k2.id = "k2";
  k2.beta = 3.0;
  k2.b = {-1.0, -0.5, -1.0};
  k2.k_value = 1.3;
  k2.position = geometry::cayley_inverse(geometry::HeisenbergPoint(0.2, 0.1, -0.3));
  const auto single = run_flow({k2}, {100.0});
  descent = descent && single.descent;
  const double limit = constants_at(2.0).S.value / std::sqrt(k2.k_value);
  const double j_end = single.result.fate.j_history.back();
  const double rel = (j_end - limit) / limit;
  const bool single_ok = single.result.fate.kind == flow::FateKind::BlowUp && rel >= 0.0 && rel < 1e-3 &&
                         single.result.fate.lambda_history.back()[0] > 1e4;
  detail += std::string("K2 single ") + flow::to_string(single.result.fate.kind) + ", (J - S/sqrt K)/(S/sqrt K) = " +
            num(rel) + "; ";

  // constructed K1+ pair: strong curvature, antipodal positions
  critical::CriticalPointProfile p1, p2;
  p1.id = "p1";
  p1.b = {-5.0, -5.0, -5.0};
  p1.position = geometry::SpherePoint(Complex(0.0, 1.0), Complex(0.0, 0.0));
  p2 = p1;
  p2.id = "p2";
  p2.k_value = 1.2;
  p2.position = geometry::SpherePoint(Complex(0.0, -1.0), Complex(0.0, 0.0));
  const double rho_pair = oracle_least(oracle_matrix({p1, p2}, 2.0 / kPi));
  const auto pair = run_flow({p1, p2}, {100.0, 150.0});
  descent = descent && pair.descent;
  const bool pair_ok = rho_pair > 0.0 && pair.result.fate.kind == flow::FateKind::BlowUp && pair.max_ratio <= 100.0;
  detail += std::string("PD pair (rho ") + num(rho_pair) + ") " + flow::to_string(pair.result.fate.kind) +
            ", max ratio " + num(pair.max_ratio) + "; ";

  // randomized battery
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_real_distribution<double> lam(50.0, 500.0);
  std::uniform_int_distribution<int> beta_pick(0, 2);
  const double betas[] = {2.5, 3.0, 3.5};
  int violations = 0, missed = 0, neither_blowups = 0, blowups = 0;
  for (int run = 0; run < 50; ++run) {
    const int type = kind(rng);
    std::vector<critical::CriticalPointProfile> ps;
    bool expect = false;
    bool has_neither = false;
    switch (type) {
      case 0:
        ps = {random_profile(rng, "a", 2.0, true)};
        expect = true;
        break;
      case 1:
        ps = {random_profile(rng, "a", betas[beta_pick(rng)], true)};
        expect = true;
        break;
      case 2:
        ps = {random_profile(rng, "a", betas[beta_pick(rng)] - 0.5 * (run % 2), false)};
        has_neither = true;
        break;
      case 3: {
        // K1 pair away from the marginal band; PD decides the expected fate
        while (true) {
          ps = {random_profile(rng, "a", 2.0, true), random_profile(rng, "b", 2.0, true)};
          if (distance_sq(ps[0].position, ps[1].position) < 0.05) continue;
          const auto m = oracle_matrix(ps, 2.0 / kPi);
          const double rho = oracle_least(m);
          if (std::abs(rho) < 0.05 * m.diagonal().maxCoeff()) continue;
          expect = rho > 0.0;
          break;
        }
        break;
      }
      case 4:
        do {
          ps = {random_profile(rng, "a", 2.0, true), random_profile(rng, "b", 2.0, false)};
        } while (distance_sq(ps[0].position, ps[1].position) < 0.05);
        has_neither = true;
        break;
      default:
        do {
          ps = {random_profile(rng, "a", 2.0, true), random_profile(rng, "b", betas[beta_pick(rng)], true)};
        } while (distance_sq(ps[0].position, ps[1].position) < 0.05);
        break;
    }
    std::vector<double> lambdas;
    for (std::size_t i = 0; i < ps.size(); ++i) lambdas.push_back(lam(rng));
    const auto r = run_flow(ps, lambdas);
    descent = descent && r.descent;
    const bool blew = r.result.fate.kind == flow::FateKind::BlowUp;
    blowups += blew;
    if (blew && !expect) ++violations;
    if (blew && has_neither) ++neither_blowups;
    if (!blew && expect) ++missed;
  }
  detail += "battery: " + std::to_string(blowups) + " blow-ups, " + std::to_string(violations) +
            " unexpected, " + std::to_string(missed) + " missed, " + std::to_string(neither_blowups) +
            " involving a Neither point; descent " + (descent ? "held" : "violated");
  const bool ok = single_ok && pair_ok && violations == 0 && missed == 0 && neither_blowups == 0 && descent;
  return {ok, detail};
}

Outcome determinism() {
  const std::string text = R"({
    "critical_points": [
      {"id": "a", "position": {"sphere": [[0, 1], [0, 0]]}, "beta": 2, "b1": -5, "b2": -5, "b0": -5, "K": 1},
      {"id": "b", "position": {"sphere": [[0, -1], [0, 0]]}, "beta": 2, "b1": -5, "b2": -5, "b0": -5, "K": 1.2},
      {"id": "c", "position": {"chart": [0.3, -0.1, 0.4]}, "beta": 3, "b1": -1, "b2": 0.5, "b0": -1, "K": 0.8},
      {"id": "d", "position": {"chart": [-1, 0.5, 0]}, "beta": 2, "b1": 1, "b2": 1, "b0": 1, "K": 1}
    ],
    "quadrature": {"mc_samples": 100000, "seed": 11}
  })";
  const auto config = report::parse_config(text);
  const auto grid = report::geometric_grid(0.1, 10.0, 5);
  const std::string first = report::certificate_text(report::run_census(config, &cache(), grid));
  const std::string second = report::certificate_text(report::run_census(config, &cache(), grid));
  const auto fresh_dir = std::filesystem::temp_directory_path() / ("crcensus-determinism-" + std::to_string(::getpid()));
  std::filesystem::remove_all(fresh_dir);
  std::string third;
  {
    report::FileConstantCache fresh(fresh_dir);
    third = report::certificate_text(report::run_census(config, &fresh, grid));
  }
  std::filesystem::remove_all(fresh_dir);
  const bool ok = first == second && first == third;
  return {ok, "warm cache twice and cold cache: " + std::string(ok ? "byte-identical" : "differ") + " (" +
                  std::to_string(first.size()) + " bytes)"};
}

}  // namespace

std::vector<Criterion> criteria() {
  return {
      {1, "Cayley round trip", 5.0, cayley_round_trip},
      {2, "Jerison-Lee residual", 10.0, jerison_lee_residual},
      {3, "volume transport", 60.0, volume_transport},
      {4, "omega3 and constants suite vs Monte Carlo", 60.0, constants_suite},
      {5, "kappa' positivity and odd kernels", 0.0, odd_kernels},
      {6, "enumeration vs brute force", 30.0, enumeration_oracle},
      {7, "counting consistency", 0.0, counting_consistency},
      {8, "eigenvalue oracle and pivot test", 0.0, eigenvalue_oracle},
      {9, "flow properties", 120.0, flow_properties},
      {10, "certificate determinism", 0.0, determinism},
  };
}

bool run_all(std::ostream& out) {
  bool all = true;
  for (const auto& c : criteria()) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass;
    std::string timing = num(secs, 3) + " s";
    if (c.time_limit_s > 0.0) {
      timing += " / " + num(c.time_limit_s) + " s";
      if (secs > c.time_limit_s) {
        pass = false;
        timing += " exceeded";
      }
    }
    out << "criterion " << std::setw(2) << c.id << " " << (pass ? "PASS" : "FAIL") << "  " << c.title << ": " << o.detail
        << " [" << timing << "]" << std::endl;
    all = all && pass;
  }
  return all;
}

}  // namespace acceptance
