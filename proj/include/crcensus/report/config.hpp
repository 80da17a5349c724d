#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "crcensus/critical/profile.hpp"
#include "crcensus/flow/reduced_flow.hpp"
#include "crcensus/geometry/heisenberg.hpp"
#include "crcensus/interaction/matrix.hpp"

namespace crcensus::report {

struct QuadratureSettings {
  double tolerance = 1e-8;
  std::uint64_t mc_samples = 1000000;
  std::uint64_t seed = 1;
};

struct Thresholds {
  double pd_margin = interaction::kDefaultPdMargin;
  double blowup_threshold = 1e4;
  double chart_radius = critical::kDefaultChartRadius;
};

enum class PositionTag { Sphere, Chart };

struct ScenarioBubble {
  std::string profile;
  geometry::HeisenbergPoint a;
  double lambda = 100.0;
};

struct FlowScenario {
  std::string name;
  std::vector<ScenarioBubble> bubbles;
};

struct FlowSettings {
  double mu = 0.1;
  double c4 = 1.0;
  double c5 = 1.0;
  double lambda_min = 10.0;
  double ratio_bound = 100.0;
  critical::LaplacianConvention laplacian = critical::LaplacianConvention::Horizontal;
  std::uint64_t max_steps = 20000;
  std::vector<FlowScenario> scenarios;
};

struct CensusConfig {
  std::vector<critical::CriticalPointProfile> critical_points;
  std::vector<PositionTag> position_tags;  // how each position was given, echoed back
  QuadratureSettings quadrature;
  interaction::GreenKernelConfig green;
  Thresholds thresholds;
  FlowSettings flow;

  flow::FlowConfig flow_config() const;
  const FlowScenario& scenario(const std::string& name) const;
};

/// Parses the JSON config text (comments allowed). Throws ConfigError carrying
/// either the parse position as line:column or every validation violation.
CensusConfig parse_config(const std::string& text, const std::string& source = "<config>");
CensusConfig load_config(const std::filesystem::path& path);

/// Canonical form with every default filled in; the input of the config hash.
nlohmann::json config_to_json(const CensusConfig& config);

}  // namespace crcensus::report
