#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crcensus/errors.hpp"
#include "crcensus/quadrature/constants.hpp"
#include "crcensus/report/certificate.hpp"
#include "crcensus/report/config.hpp"

namespace crcensus::report {

enum class FailureKind { Config, Convergence, Marginal, Other };

/// A stage of the census pipeline failed; `kind` decides the exit code.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, FailureKind kind, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)), kind_(kind) {}
  const std::string& stage() const noexcept { return stage_; }
  FailureKind kind() const noexcept { return kind_; }

 private:
  std::string stage_;
  FailureKind kind_;
};

/// 0 success, 2 config invalid, 3 quadrature non-convergence, 4 condition (C) marginal, 1 otherwise.
int exit_code(FailureKind kind) noexcept;

/// Geometric grid lo, ..., hi with n points (n >= 2, 0 < lo < hi), or {lo} when n = 1.
std::vector<double> geometric_grid(double lo, double hi, int n);
/// Parses "LO:HI:N".
std::vector<double> parse_sweep(const std::string& spec);

struct ConstantsTable {
  quadrature::StructuralConstants beta2;
  std::vector<quadrature::StructuralConstants> per_point;  // aligned with config.critical_points
};

ConstantsTable compute_constants(const CensusConfig& config, quadrature::ConstantCache* cache);

/// constants -> validation/classification -> matrices -> enumeration -> gates and
/// bounds for every k in 1..L0+1 -> optional c_G sweep.
Certificate run_census(const CensusConfig& config, quadrature::ConstantCache* cache,
                       const std::vector<double>& c_g_grid = {});

/// Re-runs the enumeration for each c_G, reusing the constants.
std::vector<SweepRow> sensitivity_sweep(const CensusConfig& config, const ConstantsTable& constants,
                                        const std::vector<double>& c_g_grid);

}  // namespace crcensus::report
