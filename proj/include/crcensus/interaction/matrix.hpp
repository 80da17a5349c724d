#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crcensus/critical/profile.hpp"
#include "crcensus/geometry/heisenberg.hpp"
#include "crcensus/quadrature/constants.hpp"

namespace crcensus::interaction {

struct GreenKernelConfig {
  double c_G = 1.0;
};

inline constexpr double kDefaultPdMargin = 1e-12;

/// c_G / |1 - <zeta, conj(eta)>|. Throws SingularityError for coincident points
/// and DomainError for c_G <= 0.
double green_kernel(const geometry::SpherePoint& zeta, const geometry::SpherePoint& eta,
                    const GreenKernelConfig& config = {});

struct InteractionMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd entries;
  double rho = 0.0;  // least eigenvalue
};

/// M_ss = -c sigma_s / (2 K_s^2),  M_st = -c' G(xi_s, xi_t) / sqrt(K_s K_t),
/// with sigma_s = b1 + b2 + kappa'(2) b0. `constants` must be computed at beta = 2.
InteractionMatrix assemble_matrix(std::span<const critical::CriticalPointProfile> subset,
                                  const quadrature::StructuralConstants& constants,
                                  const GreenKernelConfig& config = {});

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-13 * max(1, ||m||_F).
Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& m);
double least_eigenvalue(const Eigen::MatrixXd& m);

/// LDL^T without pivoting; true iff every pivot is positive.
bool pivot_positive_definite(const Eigen::MatrixXd& m);

/// least_eigenvalue > pd_margin, cross-checked by the pivot test.
/// Throws MarginalCase when |rho| <= pd_margin and NumericalInconsistency when
/// the two tests disagree outside that band.
bool is_positive_definite(const Eigen::MatrixXd& m, double pd_margin = kDefaultPdMargin);

}  // namespace crcensus::interaction
