#pragma once

#include <complex>

namespace crcensus::geometry {

using Complex = std::complex<double>;

/// A point (z, t) of the Heisenberg group H^1 = C x R.
/// Group law (z,t)(z',t') = (z+z', t+t'+2 Im(z conj(z'))).
struct HeisenbergPoint {
  Complex z{0.0, 0.0};
  double t = 0.0;

  HeisenbergPoint() = default;
  HeisenbergPoint(Complex z_, double t_);
  HeisenbergPoint(double x1, double x2, double t_) : HeisenbergPoint(Complex(x1, x2), t_) {}

  double x1() const noexcept { return z.real(); }
  double x2() const noexcept { return z.imag(); }

  static HeisenbergPoint identity() noexcept { return {}; }
};

/// A point of the unit sphere S^3 in C^2. Construction renormalizes so that
/// |zeta1|^2 + |zeta2|^2 = 1 to rounding.
class SpherePoint {
 public:
  SpherePoint() : zeta1_(0.0, 0.0), zeta2_(1.0, 0.0) {}
  SpherePoint(Complex zeta1, Complex zeta2);

  const Complex& zeta1() const noexcept { return zeta1_; }
  const Complex& zeta2() const noexcept { return zeta2_; }

  /// The point excluded from the Cayley chart.
  static SpherePoint pole() { return {Complex(0.0, 0.0), Complex(-1.0, 0.0)}; }

 private:
  Complex zeta1_;
  Complex zeta2_;
};

HeisenbergPoint group_mul(const HeisenbergPoint& g, const HeisenbergPoint& h) noexcept;
HeisenbergPoint group_inverse(const HeisenbergPoint& g) noexcept;

/// (|z|^4 + t^2)^{1/4}
double koranyi_norm(const HeisenbergPoint& g) noexcept;

/// (lambda z, lambda^2 t). Throws DomainError for lambda <= 0.
HeisenbergPoint dilate(double lambda, const HeisenbergPoint& g);

/// Cayley chart S^3 \ {(0,-1)} -> H^1:  (zeta1/(1+zeta2), 2 Im zeta2 / |1+zeta2|^2).
/// Throws PoleError within 1e-12 of (0,-1).
HeisenbergPoint cayley_forward(const SpherePoint& zeta);

/// Inverse chart: (2z/(1+|z|^2-it), (1-|z|^2+it)/(1+|z|^2-it)).
SpherePoint cayley_inverse(const HeisenbergPoint& g);

/// |1 - <zeta, conj(eta)>|, the sphere gauge that pulls back to the squared
/// Koranyi distance:  |1-<zeta,eta>| = 1/2 |1+zeta2||1+eta2| ||F(eta)^{-1}F(zeta)||^2.
double cr_distance_sq(const SpherePoint& zeta, const SpherePoint& eta) noexcept;

/// Modulus of 1 + |z|^2 - i t, the Jerison-Lee denominator.
double jl_modulus(const HeisenbergPoint& g) noexcept;

struct BubbleParams {
  HeisenbergPoint center;
  double lambda = 1.0;

  BubbleParams(HeisenbergPoint c, double l);
};

struct SphereBubbleParams {
  SpherePoint center;
  double lambda = 1.0;

  SphereBubbleParams(SpherePoint c, double l);
};

/// Jerison-Lee bubble c0 lambda / |1 + lambda^2|z-z0|^2 - i lambda^2 (t - t0 - 2 Im z0 conj(z))|.
double bubble_w(const BubbleParams& params, const HeisenbergPoint& g, double c0);

/// Same, with c0 taken from the cached sublaplacian estimate.
double bubble_w(const BubbleParams& params, const HeisenbergPoint& g);

/// Sphere transplant |1+zeta2|^{-1} w_{(F(zeta0),lambda)}(F(zeta)).
double sphere_bubble(const SphereBubbleParams& params, const SpherePoint& zeta, double c0);
double sphere_bubble(const SphereBubbleParams& params, const SpherePoint& zeta);

}  // namespace crcensus::geometry
