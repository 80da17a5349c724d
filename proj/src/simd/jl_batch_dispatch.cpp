#include <atomic>
#include <cstdlib>
#include <string>

#include "crcensus/errors.hpp"
#include "crcensus/simd/jl_batch.hpp"

namespace crcensus::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(CRCENSUS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Level detect() noexcept {
  if (const char* env = std::getenv("CRCENSUS_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Level::Scalar;
  }
  return cpu_has_avx2() ? Level::Avx2 : Level::Scalar;
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{detect()};
  return level;
}

}  // namespace

std::string_view level_name(Level level) noexcept {
  switch (level) {
    case Level::Avx2:
      return "avx2";
    case Level::Scalar:
      break;
  }
  return "scalar";
}

bool supported(Level level) noexcept {
  return level == Level::Scalar || (level == Level::Avx2 && cpu_has_avx2());
}

Level active_level() noexcept { return current().load(std::memory_order_relaxed); }

void set_level(Level level) {
  if (!supported(level)) {
    throw DomainError("simd level '" + std::string(level_name(level)) + "' is not available here");
  }
  current().store(level, std::memory_order_relaxed);
}

void jl_inverse_power(std::span<const double> r2, std::span<const double> t, int power,
                      std::span<double> out) {
  if (r2.size() != t.size() || out.size() != r2.size()) {
    throw DomainError("jl_inverse_power: mismatched batch sizes");
  }
  if (power < 1 || power > 12) throw DomainError("jl_inverse_power: power must be in [1,12]");
#if defined(CRCENSUS_HAVE_AVX2)
  if (active_level() == Level::Avx2) {
    avx2::jl_inverse_power(r2.data(), t.data(), power, out.data(), out.size());
    return;
  }
#endif
  scalar::jl_inverse_power(r2.data(), t.data(), power, out.data(), out.size());
}

void translate_dilate(const Focus& focus, std::span<double> x1, std::span<double> x2,
                      std::span<double> t) {
  if (x1.size() != x2.size() || x1.size() != t.size()) {
    throw DomainError("translate_dilate: mismatched batch sizes");
  }
#if defined(CRCENSUS_HAVE_AVX2)
  if (active_level() == Level::Avx2) {
    avx2::translate_dilate(focus, x1.data(), x2.data(), t.data(), x1.size());
    return;
  }
#endif
  scalar::translate_dilate(focus, x1.data(), x2.data(), t.data(), x1.size());
}

}  // namespace crcensus::simd
