// Compiled with -mavx2 -mfma; only reached through the runtime dispatch table
// after the CPU check succeeds.

#include <immintrin.h>

#include "crcensus/simd/jl_batch.hpp"

namespace crcensus::simd::avx2 {

void jl_inverse_power(const double* r2, const double* t, int power, double* out, std::size_t n) {
  const int half = power / 2;
  const bool odd = (power % 2) != 0;
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_add_pd(one, _mm256_loadu_pd(r2 + i));
    const __m256d tv = _mm256_loadu_pd(t + i);
    const __m256d q = _mm256_fmadd_pd(a, a, _mm256_mul_pd(tv, tv));
    __m256d p = one;
    for (int k = 0; k < half; ++k) p = _mm256_mul_pd(p, q);
    if (odd) p = _mm256_mul_pd(p, _mm256_sqrt_pd(q));
    _mm256_storeu_pd(out + i, _mm256_div_pd(one, p));
  }
  if (i < n) scalar::jl_inverse_power(r2 + i, t + i, power, out + i, n - i);
}

void translate_dilate(const Focus& focus, double* x1, double* x2, double* t, std::size_t n) {
  const __m256d s = _mm256_set1_pd(focus.scale);
  const __m256d s2 = _mm256_set1_pd(focus.scale * focus.scale);
  const __m256d c1 = _mm256_set1_pd(focus.c1);
  const __m256d c2 = _mm256_set1_pd(focus.c2);
  const __m256d ct = _mm256_set1_pd(focus.ct);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d y1 = _mm256_mul_pd(s, _mm256_loadu_pd(x1 + i));
    const __m256d y2 = _mm256_mul_pd(s, _mm256_loadu_pd(x2 + i));
    const __m256d cross = _mm256_fmsub_pd(c2, y1, _mm256_mul_pd(c1, y2));
    const __m256d tt = _mm256_fmadd_pd(two, cross, _mm256_fmadd_pd(s2, _mm256_loadu_pd(t + i), ct));
    _mm256_storeu_pd(t + i, tt);
    _mm256_storeu_pd(x1 + i, _mm256_add_pd(c1, y1));
    _mm256_storeu_pd(x2 + i, _mm256_add_pd(c2, y2));
  }
  if (i < n) scalar::translate_dilate(focus, x1 + i, x2 + i, t + i, n - i);
}

}  // namespace crcensus::simd::avx2
