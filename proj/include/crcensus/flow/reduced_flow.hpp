#pragma once

#include <array>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "crcensus/critical/profile.hpp"
#include "crcensus/geometry/heisenberg.hpp"
#include "crcensus/quadrature/constants.hpp"

// Leading-order dynamics of sums of bubbles concentrated near critical points,
// with v = 0 and all o(.) remainders dropped. Each bubble sits at chart point
// a (relative to its profile, in the H^1 chart centred at the profile) with
// concentration lambda and weight alpha.

namespace crcensus::flow {

struct Bubble {
  std::string profile_id;
  double alpha = 1.0;
  geometry::HeisenbergPoint a;
  double lambda = 100.0;
};

struct BubbleEnsemble {
  std::vector<Bubble> bubbles;
  double time = 0.0;
};

/// (lambda_i/lambda_j + lambda_j/lambda_i + lambda_i lambda_j d^2)^-1.
double epsilon_ij(double lambda_i, double lambda_j, double d);
/// d epsilon_ij / d lambda_j.
double depsilon_dlambda_j(double lambda_i, double lambda_j, double d);

struct FlowConfig {
  double lambda_min = 10.0;
  double blowup_threshold = 1e4;
  double ratio_bound = 100.0;  // N in lambda_(k) <= N lambda_(k-1)
  double chart_radius = critical::kDefaultChartRadius;
  double mu = 0.1;             // lambda |a| <= mu selects the flatness form
  double c4 = 1.0;             // multipliers relative to the energy-consistent values
  double c5 = 1.0;
  double regime_C = 100.0;         // sum eps <= C / lambda_min^2
  double regime_C_prime = 1000.0;  // lambda |grad K(a)| <= 2 C'
  double alpha_rate = 10.0;        // reported relaxation rate of alpha toward balance
  critical::LaplacianConvention laplacian = critical::LaplacianConvention::Horizontal;
  double dk_tolerance = 1e-4;
  double dk_shift_floor = 1e-3;
  // integrator
  double initial_step = 1.0;
  double max_step = 1e12;
  double min_step = 1e-12;
  double max_log_lambda_change = 0.05;
  double max_position_change = 0.005;
  std::size_t max_steps = 20000;
  double horizon = 1e15;
};

/// Supplies constants for a given beta (kappa, kappa' depend on it; c, S,
/// omega3, c0 do not).
using ConstantsProvider = std::function<quadrature::StructuralConstants(double beta)>;

class FlowModel {
 public:
  FlowModel(std::vector<critical::CriticalPointProfile> profiles, ConstantsProvider constants, FlowConfig config = {});

  const FlowConfig& config() const noexcept { return config_; }
  const critical::CriticalPointProfile& profile(const std::string& id) const;
  const quadrature::StructuralConstants& base_constants() const noexcept { return base_; }

  struct ProfileData {
    critical::CriticalPointProfile profile;
    critical::Classification classification;
    double sigma_kappa = 0.0;  // b1 + b2 + kappa(beta) b0
    double gamma = 2.0;        // exponent of lambda in the curvature term
    geometry::HeisenbergPoint chart_origin;  // F(xi)
    double horizontal_moment = 0.0;
    double vertical_moment = 0.0;
  };
  const ProfileData& data(const std::string& id) const;

  /// Sphere point of a bubble: F^-1(F(xi) * a).
  geometry::SpherePoint bubble_position(const Bubble& b) const;

  /// Horizontal and vertical dk parts at scaled centre s, memoized on a relative grid.
  quadrature::DkIntegral dk(const ProfileData& p, const geometry::HeisenbergPoint& s, int k) const;

 private:
  std::vector<ProfileData> profiles_;
  std::map<std::string, std::size_t> index_;
  quadrature::StructuralConstants base_;
  FlowConfig config_;
  mutable std::map<std::array<long long, 6>, quadrature::DkIntegral> dk_cache_;
};

struct EnergyTerms {
  double J = 0.0;
  double prefactor = 0.0;  // (sum alpha^2) S / (sum alpha^4 K)^(1/2)
  double bracket = 1.0;
  std::vector<critical::LocalField> fields;
  std::vector<std::vector<double>> distance;  // d(a_i, a_j) on the sphere
  std::vector<std::vector<double>> epsilon;
  std::vector<std::vector<double>> coupling;  // alpha_i alpha_j / sum alpha^2 - 2 alpha_i^3 alpha_j K_i / sum alpha^4 K
  std::vector<double> weight;                 // alpha_i^4 / sum alpha^4 K
};

/// Throws RegimeError naming the violated bound, ChartError outside the chart.
EnergyTerms energy_terms(const FlowModel& model, const BubbleEnsemble& ens);
double reduced_energy(const FlowModel& model, const BubbleEnsemble& ens);

struct BubbleRate {
  double alpha_dot = 0.0;
  std::array<double, 3> a_dot{};
  double lambda_dot = 0.0;
  double log_lambda_dot = 0.0;
  bool flatness_branch = false;  // lambda |a| <= mu
};

/// Time derivatives; each bubble's time runs at lambda^gamma so rates stay O(1) in lambda.
std::vector<BubbleRate> pseudo_gradient_field(const FlowModel& model, const BubbleEnsemble& ens);

/// Analytic lambda_j dJ/dlambda_j of the reduced energy.
std::vector<double> energy_lambda_derivative(const FlowModel& model, const BubbleEnsemble& ens);

/// S/K^(1/2) (1 + c (1 - mu) Gamma / lambda^gamma) + |V|^2 with Gamma = -(b1 + b2 + kappa' b0).
double normal_form_energy(const critical::CriticalPointProfile& profile, const quadrature::StructuralConstants& constants,
                          double lambda_tilde, double v_norm_sq, double mu = 0.1);

/// Projects alpha onto the balanced manifold alpha_i^2 K(a_i) = 1.
void balance_alpha(const FlowModel& model, BubbleEnsemble& ens);

enum class FateKind { BlowUp, Exit, Stagnant };
const char* to_string(FateKind kind) noexcept;

struct FlowFate {
  FateKind kind = FateKind::Stagnant;
  std::vector<std::string> members;  // BlowUp only
  std::string reason;
  std::vector<double> j_history;
  std::vector<std::vector<double>> lambda_history;
  std::vector<std::vector<double>> epsilon_history;  // upper triangle, row-major
};

struct FlowResult {
  FlowFate fate;
  std::vector<BubbleEnsemble> trajectory;
  std::size_t rejected_steps = 0;
};

/// Explicit integration in (log lambda, a) with alpha slaved to balance; a step
/// is accepted only if J does not increase, otherwise it is halved. One JSON
/// object per accepted step is written to `log` when given.
FlowResult integrate_flow(const FlowModel& model, BubbleEnsemble ens, std::ostream* log = nullptr);

}  // namespace crcensus::flow
