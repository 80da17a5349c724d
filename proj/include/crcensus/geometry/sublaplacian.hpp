#pragma once

#include <functional>
#include <span>
#include <vector>

#include "crcensus/geometry/heisenberg.hpp"

namespace crcensus::geometry {

using ScalarField = std::function<double(const HeisenbergPoint&)>;

// The sublaplacian -1/2 (Z Zbar + Zbar Z) equals -1/4 (X^2 + Y^2) in the real
// left-invariant frame X = d/dx + 2y d/dt, Y = d/dy - 2x d/dt. Both X and Y
// generate one-parameter subgroups, so the stencil points g*(+-h,0) and
// g*(0,+-h i) lie exactly on their integral curves.

/// Centered second differences along X and Y, O(h^2).
double sublaplacian_fd(const ScalarField& f, const HeisenbergPoint& g, double h);

/// One Richardson step over (h, h/2), O(h^4).
double sublaplacian_richardson(const ScalarField& f, const HeisenbergPoint& g, double h);

struct C0SquaredEstimate {
  double value = 0.0;          // mean of 4 Delta w / w^3 over the sample set
  double spread = 0.0;         // (max - min) / |mean|
  double rel_stddev = 0.0;
  std::vector<double> samples; // per-point ratios, same order as the input
};

/// Default sample set: 24 points including (1,0), (0,1), (2,3), (0.5,-1).
std::vector<HeisenbergPoint> default_c0_sample_points();

/// Estimates c0^2 as the constant ratio 4 Delta w / w^3 for w = 1/|1+|z|^2-it|.
/// Throws NumericalInconsistency when the relative spread exceeds 1e-5.
C0SquaredEstimate c0_squared(std::span<const HeisenbergPoint> points, double h = 1e-2,
                             const HeisenbergPoint& shift = HeisenbergPoint::identity());

/// Cached estimate over the default sample set.
const C0SquaredEstimate& c0_squared();

/// sqrt of the cached c0^2.
double jerison_lee_c0();

}  // namespace crcensus::geometry
