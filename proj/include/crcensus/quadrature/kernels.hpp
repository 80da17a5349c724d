#pragma once

#include "crcensus/geometry/heisenberg.hpp"
#include "crcensus/quadrature/integrate.hpp"

// Named integrands used by the structural constants. Throughout,
// |w| = |1 + |z|^2 - i t| and rho is the Koranyi norm.

namespace crcensus::quadrature::kernels {

enum class Axis { X1, X2 };

/// Indicator of the unit Koranyi ball.
IntegralSpec koranyi_ball(double tolerance);

/// |w|^-n for n in [3, 12].
IntegralSpec jl_power(int n, double tolerance);

/// |x1|^2 / |w|^4.
IntegralSpec c_kernel(double tolerance);

/// |t|^(beta/2) (1 - rho^4) / |w|^6.
IntegralSpec kappa_numerator(double beta, double tolerance);
/// |x_axis|^beta (1 - rho^4) / |w|^6.
IntegralSpec kappa_denominator(double beta, Axis axis, double tolerance);
/// |t|^(beta/2) / |w|^4.
IntegralSpec kappa_prime_numerator(double beta, double tolerance);
/// |x_axis|^beta / |w|^4.
IntegralSpec kappa_prime_denominator(double beta, Axis axis, double tolerance);

/// |x_k + s_k|^beta x_k (1 + |z|^2) / |w|^6, k in {1, 2}.
IntegralSpec dk_horizontal(double beta, const geometry::HeisenbergPoint& shift, int k, double tolerance);

/// |t + s_0 + 2(x2 s_1 - x1 s_2)|^(beta/2) times
///   k = 1: x1 (1+|z|^2) + x2 t,  k = 2: x2 (1+|z|^2) - x1 t,  k = 0: t,
/// all over |w|^6.
IntegralSpec dk_vertical(double beta, const geometry::HeisenbergPoint& shift, int k, double tolerance);

/// |x1|^beta (1 + |z|^2) / |w|^6: slope of the horizontal part in its own shift at 0, up to beta.
IntegralSpec horizontal_moment(double beta, double tolerance);

/// |t|^(beta/2) / |w|^6: slope of the k = 0 vertical part in s_0 at 0, up to beta/2.
IntegralSpec vertical_moment(double beta, double tolerance);

}  // namespace crcensus::quadrature::kernels
