#include <cmath>

#include "crcensus/simd/jl_batch.hpp"

namespace crcensus::simd::scalar {

void jl_inverse_power(const double* r2, const double* t, int power, double* out, std::size_t n) {
  const int half = power / 2;
  const bool odd = (power % 2) != 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 1.0 + r2[i];
    const double q = a * a + t[i] * t[i];
    double p = 1.0;
    for (int k = 0; k < half; ++k) p *= q;
    if (odd) p *= std::sqrt(q);
    out[i] = 1.0 / p;
  }
}

void translate_dilate(const Focus& focus, double* x1, double* x2, double* t, std::size_t n) {
  const double s = focus.scale;
  const double s2 = s * s;
  for (std::size_t i = 0; i < n; ++i) {
    const double y1 = s * x1[i];
    const double y2 = s * x2[i];
    t[i] = focus.ct + s2 * t[i] + 2.0 * (focus.c2 * y1 - focus.c1 * y2);
    x1[i] = focus.c1 + y1;
    x2[i] = focus.c2 + y2;
  }
}

}  // namespace crcensus::simd::scalar
