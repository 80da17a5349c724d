#pragma once

#include <array>
#include <string>
#include <vector>

#include "crcensus/geometry/heisenberg.hpp"
#include "crcensus/quadrature/constants.hpp"

namespace crcensus::critical {

struct Coefficients {
  double b1 = 0.0;
  double b2 = 0.0;
  double b0 = 0.0;

  double horizontal_sum() const noexcept { return b1 + b2; }
};

/// Normal form K(x) = K(xi) + b1|x1|^beta + b2|x2|^beta + b0|t|^(beta/2) around a critical point.
struct CriticalPointProfile {
  std::string id;
  geometry::SpherePoint position;
  double beta = 2.0;
  Coefficients b;
  double k_value = 1.0;
};

enum class PointSet { K1, K2, Neither };

const char* to_string(PointSet set) noexcept;

struct Classification {
  PointSet set = PointSet::Neither;
  double sigma = 0.0;  // b1 + b2 + kappa'(beta) b0
  int m = 0;           // number of negative coefficients among b1, b2, b0
};

struct Violation {
  std::string field;
  std::string message;
  double margin = 0.0;  // how far the offending quantity is from admissible
};

inline constexpr double kBetaTwoTolerance = 1e-12;
inline constexpr double kDegenerateSigma = 1e-12;

/// Lists every violated invariant. Throws DomainError when beta is outside
/// [2,4) or the constants were computed for a different beta.
std::vector<Violation> validate_profile(const CriticalPointProfile& p, const quadrature::StructuralConstants& constants);

/// Throws DegenerateProfile when |sigma| <= 1e-12.
Classification classify_point(const CriticalPointProfile& p, const quadrature::StructuralConstants& constants);

enum class LaplacianConvention {
  Horizontal,  // d^2/dx1^2 + d^2/dx2^2
  WithT,       // adds d^2/dt^2 of the b0 term
};

struct LocalField {
  double k = 0.0;
  std::array<double, 3> grad{};  // (d/dx1, d/dx2, d/dt)
  double laplacian = 0.0;
};

inline constexpr double kDefaultChartRadius = 0.5;

/// Evaluates the normal form with vanishing remainder at chart point x.
/// Throws ChartError when the Koranyi norm of x exceeds chart_radius and
/// SingularityError when the requested Laplacian is infinite at x.
LocalField local_field_eval(const CriticalPointProfile& p, const geometry::HeisenbergPoint& x,
                            LaplacianConvention convention = LaplacianConvention::Horizontal,
                            double chart_radius = kDefaultChartRadius);

}  // namespace crcensus::critical
