#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>

namespace crcensus::quadrature {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t subdivisions = 0;
  bool converged = false;
};

inline constexpr std::size_t kGkNodes = 15;

/// Per-node outputs of a batch integrand. `f` must be filled. `err` (preset to
/// zero) takes the error already committed while computing f, e.g. by an inner
/// quadrature; it is carried into the interval error as a weighted sum. `abs`
/// (preset to -1, meaning |f|) takes a bound on the integral of |integrand| the
/// node value stands for, so nested rules can report a full L1 norm.
struct NodeValues {
  std::span<double> f;
  std::span<double> err;
  std::span<double> abs;
};

using BatchIntegrand = std::function<void(std::span<const double> x, const NodeValues& out)>;

struct GkOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  /// When set, the relative target refers to the integral of |f| instead of |integral f|.
  bool relative_to_l1 = false;
  std::size_t max_intervals = 2000;
};

struct GkResult : QuadratureResult {
  double l1 = 0.0;             // integral of |f|
  double inherited_error = 0.0;
};

/// Globally adaptive G7/K15 over [breaks.front(), breaks.back()], initially split
/// at every interior break. Bisects the interval with the largest rule error
/// until rule + inherited error meets max(abs_tol, rel_tol * scale).
GkResult integrate_gk15(const BatchIntegrand& f, std::span<const double> breaks, const GkOptions& options);

/// Convenience wrapper for scalar functions.
GkResult integrate_gk15(const std::function<double(double)>& f, double a, double b, const GkOptions& options);

/// Kronrod nodes (positive half, descending; last is 0) and weights.
const std::array<double, 8>& kronrod_nodes();
const std::array<double, 8>& kronrod_weights();

}  // namespace crcensus::quadrature
