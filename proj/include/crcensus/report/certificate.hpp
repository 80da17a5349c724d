#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "crcensus/quadrature/constants.hpp"
#include "crcensus/report/config.hpp"

namespace crcensus::report {

inline constexpr int kCertificateSchemaVersion = 1;
extern const char* const kToolVersion;

struct ConstantEntry {
  std::string name;
  std::optional<double> beta;  // absent for beta-independent constants
  double value = 0.0;
  double error = 0.0;
  bool operator==(const ConstantEntry&) const = default;
};

struct MonteCarloCheck {
  std::string integral;
  double quadrature = 0.0;
  double mc_value = 0.0;
  double mc_standard_error = 0.0;
  double z_score = 0.0;
  bool operator==(const MonteCarloCheck&) const = default;
};

struct PointEntry {
  std::string id;
  double beta = 2.0;
  std::string set;  // K1, K2, Neither
  double sigma = 0.0;
  int m = 0;
  double k_value = 1.0;
  bool operator==(const PointEntry&) const = default;
};

struct AtInfinityEntry {
  std::string kind;  // single, tuple
  std::vector<std::string> members;
  int m_sum = 0;
  int index = 0;
  std::optional<double> rho;
  bool operator==(const AtInfinityEntry&) const = default;
};

struct GateEntry {
  int k = 0;
  int gate_sum = 0;
  bool cond1 = false;
  bool cond2 = false;
  bool verdict = false;
  int bound = 0;          // |1 - sum_{index <= k-1} (-1)^index|
  int printed_bound = 0;  // the same bound in its printed form
  bool printed_differs = false;
  bool operator==(const GateEntry&) const = default;
};

struct SweepRow {
  double c_G = 1.0;
  std::vector<std::vector<std::string>> k1_plus;
  std::optional<int> L0;
  std::optional<bool> exists;
  std::optional<int> bound;
  std::string failure;  // set when condition (C) is marginal at this c_G
  bool changed = false;  // verdict or family differs from the previous row
  bool operator==(const SweepRow&) const = default;
};

struct Certificate {
  int schema_version = kCertificateSchemaVersion;
  std::string tool_version;
  std::string config_hash;
  double c_G = 1.0;
  double pd_margin = 0.0;
  double tolerance = 0.0;
  std::vector<ConstantEntry> constants;
  std::vector<MonteCarloCheck> mc_checks;
  std::vector<PointEntry> points;
  std::vector<AtInfinityEntry> at_infinity;
  int l_plus = 0;
  int L0 = 0;
  std::vector<GateEntry> gates;  // k = 1 .. L0 + 1
  int criterion_k = 1;
  bool criterion_exists = false;
  int criterion_bound = 0;
  int criterion_printed_bound = 0;
  std::vector<SweepRow> sensitivity;
  bool operator==(const Certificate&) const = default;
};

nlohmann::json certificate_to_json(const Certificate& cert);
/// Throws Error if required fields are missing or the schema version is unknown.
Certificate certificate_from_json(const nlohmann::json& j);

/// Sorted keys, two-space indent, trailing newline; no timestamps.
std::string certificate_text(const Certificate& cert);
void emit_certificate(const Certificate& cert, const std::filesystem::path& path);
Certificate parse_certificate(const std::filesystem::path& path);

/// Human-readable summary; rows whose printed bound differs are marked.
std::string emit_report(const Certificate& cert);

/// Lowercase hex SHA-256 of the canonical config.
std::string config_hash(const CensusConfig& config);

}  // namespace crcensus::report
