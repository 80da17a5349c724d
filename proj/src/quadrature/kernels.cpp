#include "crcensus/quadrature/kernels.hpp"

#include <cmath>
#include <string>

#include "crcensus/errors.hpp"
#include "crcensus/simd/jl_batch.hpp"

namespace crcensus::quadrature::kernels {

namespace {

void check_beta(double beta) {
  if (!(beta >= 2.0 && beta < 4.0)) throw DomainError("beta must lie in [2,4), got " + std::to_string(beta));
}

std::string beta_tag(double beta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", beta);
  return buf;
}

// rho^4 = |z|^4 + t^2 in global coordinates
inline double koranyi4(double r2, double t) { return r2 * r2 + t * t; }

// |x_axis|^beta evaluated at phi = 0 (axis X1) and the matching angular factor
IntegralSpec separable_power(std::string name, double beta, Axis axis, int jl, bool curvature_weight,
                             double tolerance) {
  IntegralSpec spec;
  spec.name = std::move(name);
  spec.params = {{"beta", beta}, {"axis", axis == Axis::X1 ? 1.0 : 2.0}};
  spec.tolerance = tolerance;
  spec.shape = AngularShape::Separable;
  spec.angular = axis == Axis::X1 ? std::function<double(double)>([beta](double phi) {
    return std::pow(std::abs(std::cos(phi)), beta);
  })
                                  : std::function<double(double)>([beta](double phi) {
                                      return std::pow(std::abs(std::sin(phi)), beta);
                                    });
  // x1 holds r = |z| here because the body is evaluated on phi = 0
  spec.body = [beta, jl, curvature_weight](const PointBatch& p, std::span<double> out) {
    simd::jl_inverse_power(p.r2, p.t, jl, out);
    for (std::size_t i = 0; i < p.size(); ++i) {
      double v = out[i] * std::pow(std::abs(p.x1[i]), beta);
      if (curvature_weight) v *= 1.0 - koranyi4(p.r2[i], p.t[i]);
      out[i] = v;
    }
  };
  // |x|^beta rho^4 / rho^(2 jl) at infinity
  spec.decay = 2.0 * jl - beta - (curvature_weight ? 4.0 : 0.0);
  return spec;
}

IntegralSpec radial_t_power(std::string name, double beta, int jl, bool curvature_weight, double tolerance) {
  IntegralSpec spec;
  spec.name = std::move(name);
  spec.params = {{"beta", beta}};
  spec.tolerance = tolerance;
  spec.shape = AngularShape::Radial;
  spec.body = [beta, jl, curvature_weight](const PointBatch& p, std::span<double> out) {
    simd::jl_inverse_power(p.r2, p.t, jl, out);
    for (std::size_t i = 0; i < p.size(); ++i) {
      double v = out[i] * std::pow(std::abs(p.t[i]), 0.5 * beta);
      if (curvature_weight) v *= 1.0 - koranyi4(p.r2[i], p.t[i]);
      out[i] = v;
    }
  };
  spec.decay = 2.0 * jl - beta - (curvature_weight ? 4.0 : 0.0);
  return spec;
}

}  // namespace

IntegralSpec koranyi_ball(double tolerance) {
  IntegralSpec spec;
  spec.name = "koranyi-ball";
  spec.tolerance = tolerance;
  spec.shape = AngularShape::Radial;
  spec.support_radius = 1.0;
  spec.body = [](const PointBatch& p, std::span<double> out) {
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = 1.0;
  };
  return spec;
}

IntegralSpec jl_power(int n, double tolerance) {
  if (n < 3 || n > 12) throw DomainError("jl_power: exponent must be in [3,12]");
  IntegralSpec spec;
  spec.name = "jl-power-" + std::to_string(n);
  spec.params = {{"exponent", static_cast<double>(n)}};
  spec.tolerance = tolerance;
  spec.shape = AngularShape::Radial;
  spec.body = [n](const PointBatch& p, std::span<double> out) { simd::jl_inverse_power(p.r2, p.t, n, out); };
  spec.decay = 2.0 * n;
  return spec;
}

IntegralSpec c_kernel(double tolerance) {
  IntegralSpec spec = separable_power("c", 2.0, Axis::X1, 4, false, tolerance);
  spec.params.erase("beta");
  return spec;
}

IntegralSpec kappa_numerator(double beta, double tolerance) {
  check_beta(beta);
  return radial_t_power("kappa-num-" + beta_tag(beta), beta, 6, true, tolerance);
}

IntegralSpec kappa_denominator(double beta, Axis axis, double tolerance) {
  check_beta(beta);
  return separable_power("kappa-den-" + beta_tag(beta), beta, axis, 6, true, tolerance);
}

IntegralSpec kappa_prime_numerator(double beta, double tolerance) {
  check_beta(beta);
  return radial_t_power("kappa-prime-num-" + beta_tag(beta), beta, 4, false, tolerance);
}

IntegralSpec kappa_prime_denominator(double beta, Axis axis, double tolerance) {
  check_beta(beta);
  return separable_power("kappa-prime-den-" + beta_tag(beta), beta, axis, 4, false, tolerance);
}

IntegralSpec dk_horizontal(double beta, const geometry::HeisenbergPoint& shift, int k, double tolerance) {
  check_beta(beta);
  if (k != 1 && k != 2) throw DomainError("dk_horizontal: k must be 1 or 2");
  IntegralSpec spec;
  spec.name = "dk-horizontal-" + std::to_string(k);
  spec.params = {{"beta", beta}, {"k", static_cast<double>(k)}, {"s1", shift.x1()}, {"s2", shift.x2()},
                 {"s0", shift.t}};
  spec.tolerance = tolerance;
  const double sk = k == 1 ? shift.x1() : shift.x2();
  spec.body = [beta, k, sk](const PointBatch& p, std::span<double> out) {
    simd::jl_inverse_power(p.r2, p.t, 6, out);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double xk = k == 1 ? p.x1[i] : p.x2[i];
      out[i] *= std::pow(std::abs(xk + sk), beta) * xk * (1.0 + p.r2[i]);
    }
  };
  spec.decay = 9.0 - beta;
  return spec;
}

IntegralSpec dk_vertical(double beta, const geometry::HeisenbergPoint& shift, int k, double tolerance) {
  check_beta(beta);
  if (k != 0 && k != 1 && k != 2) throw DomainError("dk_vertical: k must be 0, 1 or 2");
  IntegralSpec spec;
  spec.name = "dk-vertical-" + std::to_string(k);
  spec.params = {{"beta", beta}, {"k", static_cast<double>(k)}, {"s1", shift.x1()}, {"s2", shift.x2()},
                 {"s0", shift.t}};
  spec.tolerance = tolerance;
  const double s1 = shift.x1(), s2 = shift.x2(), s0 = shift.t;
  spec.body = [beta, k, s1, s2, s0](const PointBatch& p, std::span<double> out) {
    simd::jl_inverse_power(p.r2, p.t, 6, out);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double x1 = p.x1[i], x2 = p.x2[i], t = p.t[i];
      const double shifted = t + s0 + 2.0 * (x2 * s1 - x1 * s2);
      double weight = t;
      if (k == 1) weight = x1 * (1.0 + p.r2[i]) + x2 * t;
      if (k == 2) weight = x2 * (1.0 + p.r2[i]) - x1 * t;
      out[i] *= std::pow(std::abs(shifted), 0.5 * beta) * weight;
    }
  };
  spec.decay = (k == 0 ? 10.0 : 9.0) - beta;
  return spec;
}

IntegralSpec horizontal_moment(double beta, double tolerance) {
  check_beta(beta);
  IntegralSpec spec = separable_power("horizontal-moment-" + beta_tag(beta), beta, Axis::X1, 6, false, tolerance);
  spec.body = [beta](const PointBatch& p, std::span<double> out) {
    simd::jl_inverse_power(p.r2, p.t, 6, out);
    for (std::size_t i = 0; i < p.size(); ++i) out[i] *= std::pow(std::abs(p.x1[i]), beta) * (1.0 + p.r2[i]);
  };
  spec.decay = 10.0 - beta;
  return spec;
}

IntegralSpec vertical_moment(double beta, double tolerance) {
  check_beta(beta);
  return radial_t_power("vertical-moment-" + beta_tag(beta), beta, 6, false, tolerance);
}

}  // namespace crcensus::quadrature::kernels
