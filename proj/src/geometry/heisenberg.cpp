#include "crcensus/geometry/heisenberg.hpp"

#include <cmath>
#include <string>

#include "crcensus/errors.hpp"
#include "crcensus/geometry/sublaplacian.hpp"

namespace crcensus::geometry {

namespace {

bool finite(const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

constexpr double kPoleTolerance = 1e-12;

}  // namespace

HeisenbergPoint::HeisenbergPoint(Complex z_, double t_) : z(z_), t(t_) {
  if (!finite(z) || !std::isfinite(t)) throw DomainError("HeisenbergPoint: non-finite component");
}

SpherePoint::SpherePoint(Complex zeta1, Complex zeta2) {
  if (!finite(zeta1) || !finite(zeta2)) throw DomainError("SpherePoint: non-finite component");
  const double n = std::sqrt(std::norm(zeta1) + std::norm(zeta2));
  if (!(n > 0.0)) throw DomainError("SpherePoint: zero vector cannot be normalized");
  zeta1_ = zeta1 / n;
  zeta2_ = zeta2 / n;
}

HeisenbergPoint group_mul(const HeisenbergPoint& g, const HeisenbergPoint& h) noexcept {
  HeisenbergPoint out;
  out.z = g.z + h.z;
  out.t = g.t + h.t + 2.0 * std::imag(g.z * std::conj(h.z));
  return out;
}

HeisenbergPoint group_inverse(const HeisenbergPoint& g) noexcept {
  HeisenbergPoint out;
  out.z = -g.z;
  out.t = -g.t;
  return out;
}

double koranyi_norm(const HeisenbergPoint& g) noexcept {
  const double r2 = std::norm(g.z);
  return std::pow(r2 * r2 + g.t * g.t, 0.25);
}

HeisenbergPoint dilate(double lambda, const HeisenbergPoint& g) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("dilate: lambda must be positive, got " + std::to_string(lambda));
  }
  return {lambda * g.z, lambda * lambda * g.t};
}

HeisenbergPoint cayley_forward(const SpherePoint& zeta) {
  const Complex one_plus = 1.0 + zeta.zeta2();
  if (std::abs(zeta.zeta1()) < kPoleTolerance && std::abs(one_plus) < kPoleTolerance) {
    throw PoleError("cayley_forward: (0,-1) is outside the chart");
  }
  const double m2 = std::norm(one_plus);
  if (m2 == 0.0) throw PoleError("cayley_forward: 1 + zeta2 = 0");
  return {zeta.zeta1() / one_plus, 2.0 * zeta.zeta2().imag() / m2};
}

SpherePoint cayley_inverse(const HeisenbergPoint& g) {
  const double r2 = std::norm(g.z);
  const Complex den(1.0 + r2, -g.t);
  return {2.0 * g.z / den, Complex(1.0 - r2, g.t) / den};
}

double cr_distance_sq(const SpherePoint& zeta, const SpherePoint& eta) noexcept {
  const Complex inner = zeta.zeta1() * std::conj(eta.zeta1()) + zeta.zeta2() * std::conj(eta.zeta2());
  return std::abs(1.0 - inner);
}

double jl_modulus(const HeisenbergPoint& g) noexcept {
  return std::hypot(1.0 + std::norm(g.z), g.t);
}

BubbleParams::BubbleParams(HeisenbergPoint c, double l) : center(c), lambda(l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("bubble: lambda must be positive");
}

SphereBubbleParams::SphereBubbleParams(SpherePoint c, double l) : center(c), lambda(l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("bubble: lambda must be positive");
}

double bubble_w(const BubbleParams& params, const HeisenbergPoint& g, double c0) {
  const double l2 = params.lambda * params.lambda;
  const Complex& z0 = params.center.z;
  const double re = 1.0 + l2 * std::norm(g.z - z0);
  const double im = -l2 * (g.t - params.center.t - 2.0 * std::imag(z0 * std::conj(g.z)));
  return c0 * params.lambda / std::hypot(re, im);
}

double bubble_w(const BubbleParams& params, const HeisenbergPoint& g) {
  return bubble_w(params, g, jerison_lee_c0());
}

double sphere_bubble(const SphereBubbleParams& params, const SpherePoint& zeta, double c0) {
  const HeisenbergPoint g = cayley_forward(zeta);
  const BubbleParams flat(cayley_forward(params.center), params.lambda);
  return bubble_w(flat, g, c0) / std::abs(1.0 + zeta.zeta2());
}

double sphere_bubble(const SphereBubbleParams& params, const SpherePoint& zeta) {
  return sphere_bubble(params, zeta, jerison_lee_c0());
}

}  // namespace crcensus::geometry
