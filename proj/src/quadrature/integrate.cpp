#include "crcensus/quadrature/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "crcensus/errors.hpp"

namespace crcensus::quadrature {

namespace {

constexpr double kPi = std::numbers::pi;
// Beyond this Koranyi radius the tail integrand is replaced by its leading power law.
constexpr double kRhoMax = 1e12;

// psi = (pi/4)(3u - u^3): flattens the sqrt(cos psi) behaviour at the poles psi = +-pi/2.
double psi_of_u(double u) { return 0.25 * kPi * (3.0 * u - u * u * u); }
double dpsi_du(double u) { return 0.75 * kPi * (1.0 - u * u); }

double u_of_psi(double psi) {
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi_of_u(mid) < psi ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool focus_is_pure_dilation(const simd::Focus& f) { return f.c1 == 0.0 && f.c2 == 0.0 && f.ct == 0.0; }

struct Budget {
  GkOptions outer;
  double eta_mid = 1e-4;
  double eta_in = 2.5e-5;
  std::size_t max_mid = 400;
  std::size_t max_in = 200;
};

struct Partial {
  double value = 0.0;
  double err = 0.0;
  double l1 = 0.0;
};

class Nested {
 public:
  Nested(const IntegralSpec& spec, Budget budget) : spec_(spec), budget_(std::move(budget)) {
    u_breaks_.push_back(-1.0);
    for (double p : spec_.psi_breaks) u_breaks_.push_back(u_of_psi(p));
    u_breaks_.push_back(1.0);
    phi_breaks_.push_back(0.0);
    for (double p : spec_.phi_breaks) phi_breaks_.push_back(p);
    phi_breaks_.push_back(2.0 * kPi);
    if (spec_.shape == AngularShape::Radial) {
      angular_ = {2.0 * kPi, 0.0};
    } else if (spec_.shape == AngularShape::Separable) {
      GkOptions o;
      o.rel_tol = 1e-14;
      o.abs_tol = 1e-300;
      o.max_intervals = 500;
      const auto r = integrate_gk15(
          [this](std::span<const double> x, const NodeValues& out) {
            for (std::size_t i = 0; i < x.size(); ++i) out.f[i] = spec_.angular(x[i]);
          },
          phi_breaks_, o);
      angular_ = {r.value, r.abs_error_estimate};
    }
    const double s = spec_.focus.scale;
    measure_ = 4.0 * s * s * s * s;
  }

  H1Result run() {
    H1Result out;
    const double radius = spec_.support_radius.value_or(1.0);
    const auto body = integrate_gk15(
        [this](std::span<const double> rho, const NodeValues& out) {
          for (std::size_t i = 0; i < rho.size(); ++i) {
            const Partial p = shell(rho[i]);
            const double w = measure_ * rho[i] * rho[i] * rho[i];
            out.f[i] = w * p.value;
            out.err[i] = w * p.err;
            out.abs[i] = w * p.l1;
          }
        },
        std::array<double, 2>{0.0, radius}, budget_.outer);
    accumulate(out, body);
    if (!spec_.support_radius) {
      gamma_ = std::min(1.0, spec_.decay - 4.0);
      const auto tail = integrate_gk15(
          [this, radius](std::span<const double> y, const NodeValues& out) {
            for (std::size_t i = 0; i < y.size(); ++i) {
              const Partial p = tail_node(radius, y[i]);
              out.f[i] = p.value;
              out.err[i] = p.err;
              out.abs[i] = p.l1;
            }
          },
          std::array<double, 2>{0.0, 1.0}, budget_.outer);
      accumulate(out, tail);
    }
    return out;
  }

 private:
  static void accumulate(H1Result& out, const GkResult& r) {
    out.value += r.value;
    out.abs_error_estimate += r.abs_error_estimate;
    out.l1 += r.l1;
    out.subdivisions += r.subdivisions;
  }

  // integrand in y for rho = radius * y^(-1/gamma), including measure and Jacobian
  Partial tail_node(double radius, double y) {
    const double y_max = std::pow(radius / kRhoMax, gamma_);
    if (y < y_max) {
      if (!frozen_) frozen_ = tail_node(radius, y_max);
      const double f = std::pow(y / y_max, (spec_.decay - 4.0) / gamma_ - 1.0);
      return {frozen_->value * f, frozen_->err * f, frozen_->l1 * f};
    }
    const double rho = radius * std::pow(y, -1.0 / gamma_);
    const double w = measure_ * rho * rho * rho * rho / (gamma_ * y);
    const Partial p = shell(rho);
    return {w * p.value, w * p.err, w * p.l1};
  }

  // integral over psi and phi at fixed rho (without rho^3)
  Partial shell(double rho) {
    GkOptions o;
    o.rel_tol = 0.75 * budget_.eta_mid;
    o.relative_to_l1 = true;
    o.abs_tol = 1e-300;
    o.max_intervals = budget_.max_mid;
    GkResult r;
    if (spec_.shape == AngularShape::General) {
      r = integrate_gk15(
          [this, rho](std::span<const double> u, const NodeValues& out) {
            for (std::size_t i = 0; i < u.size(); ++i) {
              const double j = dpsi_du(u[i]);
              const Partial p = ring(rho, psi_of_u(u[i]));
              out.f[i] = j * p.value;
              out.err[i] = j * p.err;
              out.abs[i] = j * p.l1;
            }
          },
          u_breaks_, o);
    } else {
      r = integrate_gk15(
          [this, rho](std::span<const double> u, const NodeValues& out) {
            std::array<double, kGkNodes> psi{}, phi{}, rr{}, x1{}, x2{}, t{}, r2{}, f{};
            const std::size_t n = u.size();
            for (std::size_t i = 0; i < n; ++i) {
              psi[i] = psi_of_u(u[i]);
              rr[i] = rho;
              x1[i] = rho * std::sqrt(std::max(0.0, std::cos(psi[i])));
              x2[i] = 0.0;
              t[i] = rho * rho * std::sin(psi[i]);
            }
            simd::translate_dilate(spec_.focus, std::span(x1.data(), n), std::span(x2.data(), n),
                                   std::span(t.data(), n));
            for (std::size_t i = 0; i < n; ++i) r2[i] = x1[i] * x1[i] + x2[i] * x2[i];
            evaluate_body(n, rr, psi, phi, x1, x2, t, r2, f);
            for (std::size_t i = 0; i < n; ++i) {
              const double j = dpsi_du(u[i]);
              out.f[i] = j * angular_.first * f[i];
              out.err[i] = j * angular_.second * std::abs(f[i]);
              out.abs[i] = j * std::abs(angular_.first * f[i]);
            }
          },
          u_breaks_, o);
    }
    return {r.value, r.abs_error_estimate, r.l1};
  }

  // integral over phi at fixed (rho, psi)
  Partial ring(double rho, double psi) {
    GkOptions o;
    o.rel_tol = budget_.eta_in;
    o.relative_to_l1 = true;
    o.abs_tol = 1e-300;
    o.max_intervals = budget_.max_in;
    const double r = rho * std::sqrt(std::max(0.0, std::cos(psi)));
    const double tl = rho * rho * std::sin(psi);
    const auto res = integrate_gk15(
        [&](std::span<const double> phi, const NodeValues& out) {
          std::array<double, kGkNodes> rr{}, ps{}, ph{}, x1{}, x2{}, t{}, r2{}, f{};
          const std::size_t n = phi.size();
          for (std::size_t i = 0; i < n; ++i) {
            rr[i] = rho;
            ps[i] = psi;
            ph[i] = phi[i];
            x1[i] = r * std::cos(phi[i]);
            x2[i] = r * std::sin(phi[i]);
            t[i] = tl;
          }
          simd::translate_dilate(spec_.focus, std::span(x1.data(), n), std::span(x2.data(), n),
                                 std::span(t.data(), n));
          for (std::size_t i = 0; i < n; ++i) r2[i] = x1[i] * x1[i] + x2[i] * x2[i];
          evaluate_body(n, rr, ps, ph, x1, x2, t, r2, f);
          for (std::size_t i = 0; i < n; ++i) out.f[i] = f[i];
        },
        phi_breaks_, o);
    return {res.value, res.abs_error_estimate, res.l1};
  }

  void evaluate_body(std::size_t n, const std::array<double, kGkNodes>& rho, const std::array<double, kGkNodes>& psi,
                     const std::array<double, kGkNodes>& phi, const std::array<double, kGkNodes>& x1,
                     const std::array<double, kGkNodes>& x2, const std::array<double, kGkNodes>& t,
                     const std::array<double, kGkNodes>& r2, std::array<double, kGkNodes>& f) const {
    PointBatch batch{std::span(rho.data(), n), std::span(psi.data(), n), std::span(phi.data(), n),
                     std::span(x1.data(), n),  std::span(x2.data(), n),  std::span(t.data(), n),
                     std::span(r2.data(), n)};
    if (spec_.support_radius) {
      // the support radius is focus-local
      spec_.body(batch, std::span(f.data(), n));
      for (std::size_t i = 0; i < n; ++i) {
        if (rho[i] > *spec_.support_radius) f[i] = 0.0;
      }
      return;
    }
    spec_.body(batch, std::span(f.data(), n));
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(f[i])) {
        std::ostringstream msg;
        msg << "kernel '" << spec_.name << "' returned a non-finite value at (" << x1[i] << ", " << x2[i]
            << ", " << t[i] << ")";
        throw SingularityError(msg.str());
      }
    }
  }

  const IntegralSpec& spec_;
  Budget budget_;
  std::vector<double> u_breaks_;
  std::vector<double> phi_breaks_;
  std::pair<double, double> angular_{1.0, 0.0};
  double measure_ = 4.0;
  double gamma_ = 1.0;
  std::optional<Partial> frozen_;
};

// SplitMix64 finaliser, used as a counter-based generator.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = mix64(mix64(seed) ^ (counter * 0xD1B54A32D192ED03ULL));
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
};

Moments combine(const Moments& a, const Moments& b) {
  if (a.n == 0.0) return b;
  if (b.n == 0.0) return a;
  Moments out;
  out.n = a.n + b.n;
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * b.n / out.n;
  out.m2 = a.m2 + b.m2 + delta * delta * a.n * b.n / out.n;
  return out;
}

Moments tree_reduce(const std::vector<Moments>& blocks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return combine(tree_reduce(blocks, lo, mid), tree_reduce(blocks, mid, hi));
}

}  // namespace

void IntegralSpec::validate() const {
  std::vector<std::string> problems;
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) problems.push_back("tolerance must be positive");
  if (!body) problems.push_back("kernel body is missing");
  if (!support_radius && !(decay > 4.0)) problems.push_back("decay exponent must exceed 4 for an unbounded domain");
  if (support_radius && !(*support_radius > 0.0)) problems.push_back("support radius must be positive");
  if (shape == AngularShape::Separable && !angular) problems.push_back("separable kernel needs an angular factor");
  if (shape != AngularShape::General && !focus_is_pure_dilation(focus)) {
    problems.push_back("radial and separable kernels cannot be combined with a translated focus");
  }
  if (!(focus.scale > 0.0) || !std::isfinite(focus.scale)) problems.push_back("focus scale must be positive");
  if (auto it = params.find("beta"); it != params.end() && !(it->second >= 2.0 && it->second < 4.0)) {
    problems.push_back("beta must lie in [2,4)");
  }
  if (!std::is_sorted(psi_breaks.begin(), psi_breaks.end()) ||
      std::any_of(psi_breaks.begin(), psi_breaks.end(), [](double p) { return !(std::abs(p) < kPi / 2); })) {
    problems.push_back("psi breaks must be increasing inside (-pi/2, pi/2)");
  }
  if (!std::is_sorted(phi_breaks.begin(), phi_breaks.end()) ||
      std::any_of(phi_breaks.begin(), phi_breaks.end(), [](double p) { return !(p > 0.0 && p < 2 * kPi); })) {
    problems.push_back("phi breaks must be increasing inside (0, 2pi)");
  }
  if (!problems.empty()) {
    std::string msg = "invalid integral spec '" + name + "':";
    for (const auto& p : problems) msg += " " + p + ";";
    throw DomainError(msg);
  }
}

H1Result integrate_h1_nothrow(const IntegralSpec& spec) {
  spec.validate();
  Budget pilot_budget;
  pilot_budget.outer.rel_tol = 1e-3;
  pilot_budget.outer.relative_to_l1 = true;
  pilot_budget.outer.abs_tol = 1e-300;
  pilot_budget.outer.max_intervals = spec.max_subdivisions;
  const H1Result pilot = Nested(spec, pilot_budget).run();

  const double target = spec.tolerance * std::max(1.0, std::abs(pilot.value));
  const double l1 = std::max(pilot.l1, 1e-300);
  Budget budget;
  budget.eta_mid = std::clamp(target / (4.0 * l1), 1e-13, 1e-3);
  budget.eta_in = 0.25 * budget.eta_mid;
  budget.outer.abs_tol = 0.5 * target;
  budget.outer.rel_tol = 0.0;
  budget.outer.max_intervals = spec.max_subdivisions;
  H1Result out = Nested(spec, budget).run();
  out.converged = out.abs_error_estimate <= spec.tolerance * std::max(1.0, std::abs(out.value));
  return out;
}

H1Result integrate_h1(const IntegralSpec& spec) {
  const H1Result r = integrate_h1_nothrow(spec);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "integral '" << spec.name << "' did not converge: value " << r.value << ", error estimate "
        << r.abs_error_estimate << " after " << r.subdivisions << " subdivisions";
    throw ConvergenceError(msg.str(), r.value, r.abs_error_estimate);
  }
  return r;
}

H1Result integrate_sphere(const SphereKernel& kernel, double tolerance, const simd::Focus& focus, double decay) {
  IntegralSpec spec;
  spec.name = "sphere-pullback";
  spec.tolerance = tolerance;
  spec.focus = focus;
  spec.decay = decay;
  spec.body = [&kernel](const PointBatch& p, std::span<double> out) {
    simd::jl_inverse_power(p.r2, p.t, 4, out);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto zeta = geometry::cayley_inverse(geometry::HeisenbergPoint(p.x1[i], p.x2[i], p.t[i]));
      out[i] *= 16.0 * kernel(zeta);
    }
  };
  return integrate_h1(spec);
}

MonteCarloEstimate monte_carlo_oracle(const IntegralSpec& spec, std::size_t samples, std::uint64_t seed) {
  spec.validate();
  if (samples < 10000) throw DomainError("monte_carlo_oracle: at least 1e4 samples are required");
  const double s_a = 2.0;
  const double s_b = spec.support_radius ? 2.0 : std::clamp(spec.decay - 4.0, 0.05, 2.0);
  const double scale = spec.focus.scale;
  const double measure = 4.0 * scale * scale * scale * scale;
  auto density = [](double s, double u) { return s * std::pow(1.0 + u, -1.0 - 0.25 * s) / (2.0 * kPi * kPi); };

  constexpr std::size_t kChunk = 64;
  constexpr std::size_t kBlock = 4096;
  std::vector<Moments> blocks;
  blocks.reserve(samples / kBlock + 1);
  std::array<double, kChunk> rho{}, psi{}, phi{}, x1{}, x2{}, t{}, r2{}, f{}, q{};
  Moments block;
  for (std::size_t start = 0; start < samples; start += kChunk) {
    const std::size_t n = std::min(kChunk, samples - start);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t id = 4 * static_cast<std::uint64_t>(start + i);
      const double pick = uniform01(seed, id);
      const double v = uniform01(seed, id + 1);
      const double s = pick < 0.5 ? s_a : s_b;
      double u = std::pow(1.0 - v, -4.0 / s) - 1.0;
      if (!std::isfinite(u) || u > kRhoMax * kRhoMax * kRhoMax * kRhoMax) u = std::pow(kRhoMax, 4);
      rho[i] = std::pow(u, 0.25);
      psi[i] = kPi * (uniform01(seed, id + 2) - 0.5);
      phi[i] = 2.0 * kPi * uniform01(seed, id + 3);
      const double r = rho[i] * std::sqrt(std::max(0.0, std::cos(psi[i])));
      x1[i] = r * std::cos(phi[i]);
      x2[i] = r * std::sin(phi[i]);
      t[i] = rho[i] * rho[i] * std::sin(psi[i]);
      q[i] = 0.5 * (density(s_a, u) + density(s_b, u));
    }
    simd::translate_dilate(spec.focus, std::span(x1.data(), n), std::span(x2.data(), n), std::span(t.data(), n));
    for (std::size_t i = 0; i < n; ++i) r2[i] = x1[i] * x1[i] + x2[i] * x2[i];
    PointBatch batch{std::span<const double>(rho.data(), n), std::span<const double>(psi.data(), n),
                     std::span<const double>(phi.data(), n), std::span<const double>(x1.data(), n),
                     std::span<const double>(x2.data(), n),  std::span<const double>(t.data(), n),
                     std::span<const double>(r2.data(), n)};
    spec.body(batch, std::span(f.data(), n));
    for (std::size_t i = 0; i < n; ++i) {
      double value = f[i];
      if (spec.support_radius && rho[i] > *spec.support_radius) value = 0.0;
      const double x = measure * value / q[i];
      block = combine(block, Moments{1.0, x, 0.0});
      if (static_cast<std::size_t>(block.n) == kBlock) {
        blocks.push_back(block);
        block = {};
      }
    }
  }
  if (block.n > 0.0) blocks.push_back(block);
  const Moments total = tree_reduce(blocks, 0, blocks.size());
  MonteCarloEstimate out;
  out.value = total.mean;
  out.samples = samples;
  out.standard_error = total.n > 1.0 ? std::sqrt(total.m2 / (total.n - 1.0) / total.n) : 0.0;
  return out;
}

}  // namespace crcensus::quadrature
