#pragma once

#include <span>
#include <string_view>

// Batch kernels for the hot loops of the quadrature and Monte-Carlo engines.
// Every operation has a scalar reference in `scalar::` and, where the target
// supports it, an AVX2 variant in `avx2::`. The unqualified entry points route
// through a table chosen once at startup (CRCENSUS_SIMD=scalar forces the
// reference path).

namespace crcensus::simd {

enum class Level { Scalar, Avx2 };

std::string_view level_name(Level level) noexcept;
bool supported(Level level) noexcept;
Level active_level() noexcept;
/// Throws DomainError if `level` is not supported on this CPU/build.
void set_level(Level level);

/// Left translation by (c1 + i c2, ct) composed with the dilation by `scale`:
/// x <- (c1,c2,ct) * (scale x1, scale x2, scale^2 t), in place.
struct Focus {
  double c1 = 0.0;
  double c2 = 0.0;
  double ct = 0.0;
  double scale = 1.0;
};

/// out[i] = ((1 + r2[i])^2 + t[i]^2)^(-power/2), i.e. |1 + |z|^2 - i t|^-power.
/// power in [1, 12].
void jl_inverse_power(std::span<const double> r2, std::span<const double> t, int power,
                      std::span<double> out);

void translate_dilate(const Focus& focus, std::span<double> x1, std::span<double> x2,
                      std::span<double> t);

namespace scalar {
void jl_inverse_power(const double* r2, const double* t, int power, double* out, std::size_t n);
void translate_dilate(const Focus& focus, double* x1, double* x2, double* t, std::size_t n);
}  // namespace scalar

#if defined(CRCENSUS_HAVE_AVX2)
namespace avx2 {
void jl_inverse_power(const double* r2, const double* t, int power, double* out, std::size_t n);
void translate_dilate(const Focus& focus, double* x1, double* x2, double* t, std::size_t n);
}  // namespace avx2
#endif

}  // namespace crcensus::simd
