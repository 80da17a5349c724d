#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crcensus/geometry/heisenberg.hpp"
#include "crcensus/quadrature/gauss_kronrod.hpp"
#include "crcensus/simd/jl_batch.hpp"

// Integration over H^1 with the measure theta0 ^ dtheta0 = 4 dx dy dt.
//
// Coordinates: Koranyi polar around a focus point,
//   g = focus * delta_scale(r cos phi, r sin phi, rho^2 sin psi),  r = rho sqrt(cos psi),
// with psi in [-pi/2, pi/2], phi in [0, 2pi); then dx dy dt = rho^3 drho dpsi dphi.
// rho in [0, R] is integrated directly, the tail [R, inf) after rho = R y^(-1/gamma)
// with gamma matched to the declared decay exponent of the kernel.

namespace crcensus::quadrature {

/// Nodes handed to a kernel body. All spans have the same length. The polar
/// coordinates are focus-local; x1, x2, t are the global coordinates and
/// r2 = x1^2 + x2^2.
struct PointBatch {
  std::span<const double> rho, psi, phi;
  std::span<const double> x1, x2, t, r2;
  std::size_t size() const noexcept { return rho.size(); }
};

using KernelBody = std::function<void(const PointBatch& points, std::span<double> out)>;

enum class AngularShape {
  Radial,     // body depends on (rho, psi) only
  Separable,  // body(rho, psi) * angular(phi)
  General,
};

enum class Domain { H1, Sphere };

struct IntegralSpec {
  std::string name;
  std::map<std::string, double> params;  // descriptive (beta, shift, exponents)
  KernelBody body;
  AngularShape shape = AngularShape::General;
  std::function<double(double)> angular;  // Separable only
  /// f(g) = O(|g|^-decay) as |g| -> infinity; must exceed 4 unless support_radius is set.
  double decay = 8.0;
  /// Koranyi radius (focus-local, before scaling) outside of which the kernel vanishes.
  std::optional<double> support_radius;
  simd::Focus focus;
  Domain domain = Domain::H1;
  double tolerance = 1e-8;
  std::vector<double> psi_breaks{0.0};
  std::vector<double> phi_breaks{1.5707963267948966, 3.141592653589793, 4.71238898038469};
  std::size_t max_subdivisions = 2000;

  /// Throws DomainError when tolerance, decay, beta or the shape data are inadmissible.
  void validate() const;
};

struct H1Result : QuadratureResult {
  double l1 = 0.0;  // estimate of the integral of |f|
};

/// Throws ConvergenceError (best value and error attached) when the nested
/// estimate misses tolerance * max(1, |value|).
H1Result integrate_h1(const IntegralSpec& spec);

/// Same computation without the throw; `converged` reports the outcome.
H1Result integrate_h1_nothrow(const IntegralSpec& spec);

using SphereKernel = std::function<double(const geometry::SpherePoint&)>;

/// Integral over S^3 with theta1 ^ dtheta1, pulled back through the Cayley
/// transform: the H^1 integrand is k(F^-1(g)) * |1 + zeta2|^4 = k * 16 / |1+|z|^2-it|^4.
/// `focus` may centre the H^1 coordinates on the image of a concentrated feature.
H1Result integrate_sphere(const SphereKernel& kernel, double tolerance,
                          const simd::Focus& focus = {}, double decay = 8.0);

struct MonteCarloEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Importance sampling with the mixture of two Koranyi-radial proposals
/// q_s(g) ~ (1 + rho^4)^(-1 - s/4), one of them matched to spec.decay.
/// Deterministic in (seed, samples): sample i is drawn from a counter-based hash.
MonteCarloEstimate monte_carlo_oracle(const IntegralSpec& spec, std::size_t samples, std::uint64_t seed);

}  // namespace crcensus::quadrature
