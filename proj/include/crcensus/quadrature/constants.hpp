#pragma once

#include <optional>
#include <string>

#include "crcensus/geometry/heisenberg.hpp"

namespace crcensus::quadrature {

struct ValueWithError {
  double value = 0.0;
  double error = 0.0;
};

/// Storage for computed constants keyed by (name, beta, tolerance). The
/// file-backed implementation lives with the reports module.
class ConstantCache {
 public:
  virtual ~ConstantCache() = default;
  virtual std::optional<ValueWithError> lookup(const std::string& name, double beta, double tolerance) = 0;
  virtual void store(const std::string& name, double beta, double tolerance, const ValueWithError& value) = 0;
};

inline constexpr double kDefaultTolerance = 1e-8;

/// Ratio of the two curvature-weighted integrals; throws DomainError outside [2,4).
ValueWithError compute_kappa(double beta, double tolerance = kDefaultTolerance, ConstantCache* cache = nullptr);
/// Ratio of |t|^(beta/2) / |w|^4 to |x1|^beta / |w|^4.
ValueWithError compute_kappa_prime(double beta, double tolerance = kDefaultTolerance,
                                   ConstantCache* cache = nullptr);

struct StructuralConstants {
  double beta = 2.0;
  ValueWithError kappa;
  ValueWithError kappa_prime;
  ValueWithError c;        // int |x1|^2 / |w|^4
  ValueWithError c2;       // c0^3 int |w|^-3
  ValueWithError S;        // c0^4 int |w|^-4
  ValueWithError omega3;   // volume of the unit Koranyi ball
  ValueWithError c_prime;  // 2 pi omega3
  ValueWithError c0_sq;
};

StructuralConstants compute_structural_constants(double beta, double tolerance = kDefaultTolerance,
                                                 ConstantCache* cache = nullptr);

/// The two parts of the derivative integral in direction k in {1, 2, 0} for a
/// bubble whose scaled centre is lambda_j a_j:
///   horizontal = int |x_k + s_k|^beta x_k (1+|z|^2) / |w|^6          (k = 1, 2; zero for k = 0)
///   vertical   = int |t + s_0 + 2(x2 s_1 - x1 s_2)|^(beta/2) W_k / |w|^6
/// The full Taylor-coefficient-weighted value is b_k horizontal + b_0 vertical.
struct DkIntegral {
  ValueWithError horizontal;
  ValueWithError vertical;

  double combined(double b_k, double b_0) const noexcept { return b_k * horizontal.value + b_0 * vertical.value; }
  double combined_error(double b_k, double b_0) const noexcept;
};

DkIntegral dk_integrals(double beta, const geometry::HeisenbergPoint& scaled_center, int k,
                        double tolerance = 1e-6);

}  // namespace crcensus::quadrature
