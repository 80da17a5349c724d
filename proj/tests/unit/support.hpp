#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <random>

#include "crcensus/critical/profile.hpp"
#include "crcensus/geometry/heisenberg.hpp"
#include "crcensus/quadrature/constants.hpp"
#include "crcensus/report/cache.hpp"

namespace support {

inline crcensus::report::FileConstantCache& cache() {
  static crcensus::report::FileConstantCache c(crcensus::report::FileConstantCache::default_directory());
  return c;
}

inline const crcensus::quadrature::StructuralConstants& constants(double beta) {
  static std::map<double, crcensus::quadrature::StructuralConstants> memo;
  auto it = memo.find(beta);
  if (it == memo.end()) {
    it = memo.emplace(beta, crcensus::quadrature::compute_structural_constants(beta, 1e-8, &cache())).first;
  }
  return it->second;
}

inline crcensus::geometry::SpherePoint random_sphere(std::mt19937_64& rng, double pole_distance = 0.3) {
  std::normal_distribution<double> n;
  while (true) {
    std::complex<double> a(n(rng), n(rng)), b(n(rng), n(rng));
    const double r = std::sqrt(std::norm(a) + std::norm(b));
    a /= r;
    b /= r;
    if (std::abs(1.0 + b) > pole_distance) return {a, b};
  }
}

inline crcensus::critical::CriticalPointProfile profile(const std::string& id, double beta, double b1, double b2,
                                                        double b0, double k = 1.0,
                                                        crcensus::geometry::SpherePoint pos = {}) {
  crcensus::critical::CriticalPointProfile p;
  p.id = id;
  p.beta = beta;
  p.b = {b1, b2, b0};
  p.k_value = k;
  p.position = pos;
  return p;
}

}  // namespace support
