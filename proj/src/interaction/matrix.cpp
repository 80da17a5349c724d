#include "crcensus/interaction/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crcensus/errors.hpp"

namespace crcensus::interaction {

namespace {

constexpr double kCoincident = 1e-14;

void check_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DomainError("matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) throw DomainError("matrix must be symmetric");
}

double off_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

}  // namespace

double green_kernel(const geometry::SpherePoint& zeta, const geometry::SpherePoint& eta, const GreenKernelConfig& config) {
  if (!(config.c_G > 0.0)) throw DomainError("c_G must be positive");
  const double d = geometry::cr_distance_sq(zeta, eta);
  if (d <= kCoincident) throw SingularityError("Green kernel evaluated at coincident points");
  return config.c_G / d;
}

InteractionMatrix assemble_matrix(std::span<const critical::CriticalPointProfile> subset,
                                  const quadrature::StructuralConstants& constants, const GreenKernelConfig& config) {
  if (std::abs(constants.beta - 2.0) > critical::kBetaTwoTolerance) {
    throw DomainError("interaction matrix needs constants computed at beta = 2");
  }
  const auto p = static_cast<Eigen::Index>(subset.size());
  InteractionMatrix out;
  out.entries = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index s = 0; s < p; ++s) {
    const auto& xi = subset[static_cast<std::size_t>(s)];
    const auto cls = critical::classify_point(xi, constants);
    if (cls.set != critical::PointSet::K1) {
      throw DomainError("profile '" + xi.id + "' is not in K1 and cannot enter an interaction matrix");
    }
    out.labels.push_back(xi.id);
    out.entries(s, s) = -constants.c.value * cls.sigma / (2.0 * xi.k_value * xi.k_value);
  }
  for (Eigen::Index s = 0; s < p; ++s) {
    for (Eigen::Index t = s + 1; t < p; ++t) {
      const auto& a = subset[static_cast<std::size_t>(s)];
      const auto& b = subset[static_cast<std::size_t>(t)];
      double g = 0.0;
      try {
        g = green_kernel(a.position, b.position, config);
      } catch (const SingularityError&) {
        throw SingularityError("profiles '" + a.id + "' and '" + b.id + "' share a position");
      }
      const double v = -constants.c_prime.value * g / std::sqrt(a.k_value * b.k_value);
      out.entries(s, t) = v;
      out.entries(t, s) = v;
    }
  }
  out.rho = p > 0 ? least_eigenvalue(out.entries) : 0.0;
  return out;
}

Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& m) {
  check_symmetric(m);
  Eigen::MatrixXd a = m;
  const Eigen::Index n = a.rows();
  const double threshold = 1e-13 * std::max(1.0, a.norm());
  for (int sweep = 0; sweep < 100 && off_norm(a) >= threshold; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        // rotation annihilating a(p,q); Golub & Van Loan sym.schur2
        const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Eigen::VectorXd eig = a.diagonal();
  std::sort(eig.data(), eig.data() + eig.size());
  return eig;
}

double least_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) throw DomainError("least eigenvalue of an empty matrix");
  return jacobi_eigenvalues(m)(0);
}

bool pivot_positive_definite(const Eigen::MatrixXd& m) {
  check_symmetric(m);
  Eigen::MatrixXd a = m;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pivot = a(k, k);
    if (!(pivot > 0.0)) return false;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double l = a(i, k) / pivot;
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return true;
}

bool is_positive_definite(const Eigen::MatrixXd& m, double pd_margin) {
  const double rho = least_eigenvalue(m);
  if (std::abs(rho) <= pd_margin) {
    std::ostringstream msg;
    msg << "least eigenvalue " << rho << " lies within the margin " << pd_margin;
    throw MarginalCase(msg.str(), rho);
  }
  const bool by_eigen = rho > pd_margin;
  if (by_eigen != pivot_positive_definite(m)) {
    std::ostringstream msg;
    msg << "Jacobi (rho = " << rho << ") and pivot tests disagree on positive definiteness";
    throw NumericalInconsistency(msg.str());
  }
  return by_eigen;
}

}  // namespace crcensus::interaction
