#include "crcensus/critical/profile.hpp"

#include <cmath>
#include <sstream>

#include "crcensus/errors.hpp"

namespace crcensus::critical {

namespace {

void check_beta(double beta) {
  if (!(beta >= 2.0 && beta < 4.0)) {
    std::ostringstream msg;
    msg << "beta must satisfy 2 <= beta < 4, got " << beta;
    throw DomainError(msg.str());
  }
}

void check_constants(const CriticalPointProfile& p, const quadrature::StructuralConstants& constants) {
  if (std::abs(constants.beta - p.beta) > kBetaTwoTolerance) {
    std::ostringstream msg;
    msg << "constants computed at beta = " << constants.beta << " used for profile '" << p.id << "' with beta = "
        << p.beta;
    throw DomainError(msg.str());
  }
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// d/dx (b |x|^a) and d^2/dx^2 (b |x|^a); zero at x = 0 whenever the limit is finite
double power_derivative(double b, double a, double x) {
  if (x == 0.0) return 0.0;
  return b * a * std::pow(std::abs(x), a - 1.0) * sign(x);
}

double power_second_derivative(double b, double a, double x) {
  const double coeff = b * a * (a - 1.0);
  if (coeff == 0.0) return 0.0;
  if (a == 2.0) return coeff;
  if (x == 0.0) {
    if (a > 2.0) return 0.0;
    throw SingularityError("second derivative of |x|^a with a < 2 is infinite at 0");
  }
  return coeff * std::pow(std::abs(x), a - 2.0);
}

}  // namespace

const char* to_string(PointSet set) noexcept {
  switch (set) {
    case PointSet::K1:
      return "K1";
    case PointSet::K2:
      return "K2";
    case PointSet::Neither:
      break;
  }
  return "neither";
}

std::vector<Violation> validate_profile(const CriticalPointProfile& p, const quadrature::StructuralConstants& constants) {
  check_beta(p.beta);
  check_constants(p, constants);
  std::vector<Violation> out;
  if (p.id.empty()) out.push_back({"id", "profile id is empty", 0.0});
  const std::array<std::pair<const char*, double>, 3> coeffs{{{"b1", p.b.b1}, {"b2", p.b.b2}, {"b0", p.b.b0}}};
  for (const auto& [name, value] : coeffs) {
    if (!std::isfinite(value)) {
      out.push_back({name, std::string(name) + " is not finite", 0.0});
    } else if (value == 0.0) {
      out.push_back({name, std::string(name) + " = 0", 0.0});
    }
  }
  const double sum_kappa = p.b.horizontal_sum() + constants.kappa.value * p.b.b0;
  const double sum_kappa_prime = p.b.horizontal_sum() + constants.kappa_prime.value * p.b.b0;
  if (std::abs(sum_kappa) <= kDegenerateSigma) {
    out.push_back({"b", "b1 + b2 + kappa b0 vanishes", std::abs(sum_kappa)});
  }
  if (std::abs(sum_kappa_prime) <= kDegenerateSigma) {
    out.push_back({"b", "b1 + b2 + kappa' b0 vanishes", std::abs(sum_kappa_prime)});
  }
  if (!(p.k_value > 0.0) || !std::isfinite(p.k_value)) {
    out.push_back({"k_value", "K(xi) must be positive", p.k_value});
  }
  return out;
}

Classification classify_point(const CriticalPointProfile& p, const quadrature::StructuralConstants& constants) {
  check_beta(p.beta);
  check_constants(p, constants);
  Classification out;
  out.sigma = p.b.horizontal_sum() + constants.kappa_prime.value * p.b.b0;
  if (std::abs(out.sigma) <= kDegenerateSigma) {
    std::ostringstream msg;
    msg << "profile '" << p.id << "': b1 + b2 + kappa' b0 = " << out.sigma << " is numerically zero";
    throw DegenerateProfile(msg.str());
  }
  out.m = (p.b.b1 < 0.0) + (p.b.b2 < 0.0) + (p.b.b0 < 0.0);
  if (out.sigma < 0.0) {
    out.set = std::abs(p.beta - 2.0) <= kBetaTwoTolerance ? PointSet::K1 : PointSet::K2;
  }
  return out;
}

LocalField local_field_eval(const CriticalPointProfile& p, const geometry::HeisenbergPoint& x,
                            LaplacianConvention convention, double chart_radius) {
  check_beta(p.beta);
  if (geometry::koranyi_norm(x) > chart_radius) {
    std::ostringstream msg;
    msg << "chart point with Koranyi norm " << geometry::koranyi_norm(x) << " lies outside the chart radius "
        << chart_radius;
    throw ChartError(msg.str());
  }
  const double beta = p.beta;
  const double half = 0.5 * beta;
  LocalField out;
  out.k = p.k_value + p.b.b1 * std::pow(std::abs(x.x1()), beta) + p.b.b2 * std::pow(std::abs(x.x2()), beta) +
          p.b.b0 * std::pow(std::abs(x.t), half);
  out.grad = {power_derivative(p.b.b1, beta, x.x1()), power_derivative(p.b.b2, beta, x.x2()),
              power_derivative(p.b.b0, half, x.t)};
  out.laplacian = power_second_derivative(p.b.b1, beta, x.x1()) + power_second_derivative(p.b.b2, beta, x.x2());
  if (convention == LaplacianConvention::WithT) out.laplacian += power_second_derivative(p.b.b0, half, x.t);
  return out;
}

}  // namespace crcensus::critical
