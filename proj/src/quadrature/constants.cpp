#include "crcensus/quadrature/constants.hpp"

#include <cmath>
#include <numbers>

#include "crcensus/errors.hpp"
#include "crcensus/geometry/sublaplacian.hpp"
#include "crcensus/quadrature/integrate.hpp"
#include "crcensus/quadrature/kernels.hpp"

namespace crcensus::quadrature {

namespace {

void check_beta(double beta) {
  if (!(beta >= 2.0 && beta < 4.0)) throw DomainError("beta must lie in [2,4), got " + std::to_string(beta));
}

ValueWithError ratio(const H1Result& num, const H1Result& den) {
  if (den.value == 0.0) throw NumericalInconsistency("vanishing denominator integral");
  const double r = num.value / den.value;
  const double rel = std::abs(num.abs_error_estimate / num.value) + std::abs(den.abs_error_estimate / den.value);
  return {r, std::abs(r) * rel};
}

ValueWithError from(const H1Result& r) { return {r.value, r.abs_error_estimate}; }

template <class F>
ValueWithError cached(ConstantCache* cache, const std::string& name, double beta, double tolerance, F compute) {
  if (cache != nullptr) {
    if (auto hit = cache->lookup(name, beta, tolerance)) return *hit;
  }
  const ValueWithError v = compute();
  if (cache != nullptr) cache->store(name, beta, tolerance, v);
  return v;
}

ValueWithError scaled_by_c0_power(const ValueWithError& integral, int power) {
  const auto& c0sq = geometry::c0_squared();
  const double factor = std::pow(c0sq.value, 0.5 * power);
  const double rel_c0sq = c0sq.spread;
  return {factor * integral.value,
          factor * integral.error + std::abs(factor * integral.value) * 0.5 * power * rel_c0sq};
}

}  // namespace

ValueWithError compute_kappa(double beta, double tolerance, ConstantCache* cache) {
  check_beta(beta);
  return cached(cache, "kappa", beta, tolerance, [&] {
    return ratio(integrate_h1(kernels::kappa_numerator(beta, tolerance)),
                 integrate_h1(kernels::kappa_denominator(beta, kernels::Axis::X1, tolerance)));
  });
}

ValueWithError compute_kappa_prime(double beta, double tolerance, ConstantCache* cache) {
  check_beta(beta);
  return cached(cache, "kappa_prime", beta, tolerance, [&] {
    return ratio(integrate_h1(kernels::kappa_prime_numerator(beta, tolerance)),
                 integrate_h1(kernels::kappa_prime_denominator(beta, kernels::Axis::X1, tolerance)));
  });
}

StructuralConstants compute_structural_constants(double beta, double tolerance, ConstantCache* cache) {
  check_beta(beta);
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  StructuralConstants out;
  out.beta = beta;
  out.kappa = compute_kappa(beta, tolerance, cache);
  out.kappa_prime = compute_kappa_prime(beta, tolerance, cache);
  // beta-independent entries are cached under beta = 0
  out.c = cached(cache, "c", 0.0, tolerance, [&] { return from(integrate_h1(kernels::c_kernel(tolerance))); });
  const ValueWithError jl3 =
      cached(cache, "jl3", 0.0, tolerance, [&] { return from(integrate_h1(kernels::jl_power(3, tolerance))); });
  const ValueWithError jl4 =
      cached(cache, "jl4", 0.0, tolerance, [&] { return from(integrate_h1(kernels::jl_power(4, tolerance))); });
  out.omega3 = cached(cache, "omega3", 0.0, tolerance,
                      [&] { return from(integrate_h1(kernels::koranyi_ball(tolerance))); });
  out.c2 = scaled_by_c0_power(jl3, 3);
  out.S = scaled_by_c0_power(jl4, 4);
  out.c_prime = {2.0 * std::numbers::pi * out.omega3.value, 2.0 * std::numbers::pi * out.omega3.error};
  const auto& c0sq = geometry::c0_squared();
  out.c0_sq = {c0sq.value, c0sq.spread * std::abs(c0sq.value)};
  return out;
}

double DkIntegral::combined_error(double b_k, double b_0) const noexcept {
  return std::abs(b_k) * horizontal.error + std::abs(b_0) * vertical.error;
}

DkIntegral dk_integrals(double beta, const geometry::HeisenbergPoint& scaled_center, int k, double tolerance) {
  check_beta(beta);
  if (k != 0 && k != 1 && k != 2) throw DomainError("dk_integrals: k must be 1, 2 or 0");
  DkIntegral out;
  if (k != 0) out.horizontal = from(integrate_h1(kernels::dk_horizontal(beta, scaled_center, k, tolerance)));
  out.vertical = from(integrate_h1(kernels::dk_vertical(beta, scaled_center, k, tolerance)));
  return out;
}

}  // namespace crcensus::quadrature
