#include "crcensus/report/pipeline.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "crcensus/counts/census.hpp"
#include "crcensus/critical/profile.hpp"
#include "crcensus/quadrature/integrate.hpp"
#include "crcensus/quadrature/kernels.hpp"

namespace crcensus::report {

namespace {

struct Split {
  std::vector<critical::CriticalPointProfile> k1;
  std::vector<counts::SingleEntry> k2;
};

// Runs `f` and converts module errors into a PipelineError naming `stage`.
template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const ConfigError& e) {
    throw PipelineError(name, FailureKind::Config, e.what());
  } catch (const DegenerateProfile& e) {
    throw PipelineError(name, FailureKind::Config, e.what());
  } catch (const ConvergenceError& e) {
    throw PipelineError(name, FailureKind::Convergence, e.what());
  } catch (const ConditionCViolation& e) {
    throw PipelineError(name, FailureKind::Marginal, e.what());
  } catch (const MarginalCase& e) {
    throw PipelineError(name, FailureKind::Marginal, e.what());
  } catch (const Error& e) {
    throw PipelineError(name, FailureKind::Other, e.what());
  }
}

counts::Census census_for(const Split& split, const quadrature::StructuralConstants& beta2, double c_G,
                          double pd_margin) {
  counts::EnumerationConfig ec;
  ec.green.c_G = c_G;
  ec.pd_margin = pd_margin;
  const auto tuples = counts::enumerate_k1_plus(split.k1, beta2, ec);
  return counts::indices_at_infinity(tuples, split.k2);
}

Split split_points(const CensusConfig& config, const ConstantsTable& constants) {
  Split out;
  for (std::size_t i = 0; i < config.critical_points.size(); ++i) {
    const auto& p = config.critical_points[i];
    const auto cls = critical::classify_point(p, constants.per_point[i]);
    if (cls.set == critical::PointSet::K1) out.k1.push_back(p);
    if (cls.set == critical::PointSet::K2) out.k2.push_back({p.id, cls.m});
  }
  return out;
}

std::vector<std::vector<std::string>> family(const counts::Census& census) {
  std::vector<std::vector<std::string>> out;
  for (const auto& t : census.k1_plus) out.push_back(t.members);
  return out;
}

}  // namespace

int exit_code(FailureKind kind) noexcept {
  switch (kind) {
    case FailureKind::Config:
      return 2;
    case FailureKind::Convergence:
      return 3;
    case FailureKind::Marginal:
      return 4;
    case FailureKind::Other:
      break;
  }
  return 1;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || n < 1 || (n > 1 && !(hi > lo))) {
    throw ConfigError({"c_G sweep needs 0 < LO < HI and N >= 1"});
  }
  if (n == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

std::vector<double> parse_sweep(const std::string& spec) {
  std::istringstream in(spec);
  double lo = 0.0, hi = 0.0;
  int n = 0;
  char c1 = 0, c2 = 0;
  if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw ConfigError({"--cg-sweep expects LO:HI:N, got '" + spec + "'"});
  }
  return geometric_grid(lo, hi, n);
}

ConstantsTable compute_constants(const CensusConfig& config, quadrature::ConstantCache* cache) {
  const double tol = config.quadrature.tolerance;
  ConstantsTable out;
  std::map<double, quadrature::StructuralConstants> by_beta;
  auto get = [&](double beta) -> const quadrature::StructuralConstants& {
    auto it = by_beta.find(beta);
    if (it == by_beta.end()) it = by_beta.emplace(beta, quadrature::compute_structural_constants(beta, tol, cache)).first;
    return it->second;
  };
  out.beta2 = get(2.0);
  for (const auto& p : config.critical_points) out.per_point.push_back(get(p.beta));
  return out;
}

std::vector<SweepRow> sensitivity_sweep(const CensusConfig& config, const ConstantsTable& constants,
                                        const std::vector<double>& c_g_grid) {
  const Split split = split_points(config, constants);
  std::vector<SweepRow> rows;
  for (double c_G : c_g_grid) {
    SweepRow row;
    row.c_G = c_G;
    try {
      const auto census = census_for(split, constants.beta2, c_G, config.thresholds.pd_margin);
      const auto crit = counts::full_criterion(census);
      row.k1_plus = family(census);
      row.L0 = census.L0;
      row.exists = crit.exists;
      row.bound = crit.total_bound;
    } catch (const ConditionCViolation& e) {
      row.failure = e.what();
    }
    if (!rows.empty()) {
      const auto& prev = rows.back();
      row.changed = prev.k1_plus != row.k1_plus || prev.exists != row.exists || prev.failure.empty() != row.failure.empty();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Certificate run_census(const CensusConfig& config, quadrature::ConstantCache* cache,
                       const std::vector<double>& c_g_grid) {
  Certificate cert;
  cert.tool_version = kToolVersion;
  cert.config_hash = config_hash(config);
  cert.c_G = config.green.c_G;
  cert.pd_margin = config.thresholds.pd_margin;
  cert.tolerance = config.quadrature.tolerance;

  const auto constants = stage("constants", [&] { return compute_constants(config, cache); });
  {
    const auto& b = constants.beta2;
    cert.constants.push_back({"c", std::nullopt, b.c.value, b.c.error});
    cert.constants.push_back({"c2", std::nullopt, b.c2.value, b.c2.error});
    cert.constants.push_back({"S", std::nullopt, b.S.value, b.S.error});
    cert.constants.push_back({"omega3", std::nullopt, b.omega3.value, b.omega3.error});
    cert.constants.push_back({"c_prime", std::nullopt, b.c_prime.value, b.c_prime.error});
    cert.constants.push_back({"c0_sq", std::nullopt, b.c0_sq.value, b.c0_sq.error});
    std::map<double, const quadrature::StructuralConstants*> betas{{2.0, &constants.beta2}};
    for (const auto& c : constants.per_point) betas.emplace(c.beta, &c);
    for (const auto& [beta, c] : betas) {
      cert.constants.push_back({"kappa", beta, c->kappa.value, c->kappa.error});
      cert.constants.push_back({"kappa_prime", beta, c->kappa_prime.value, c->kappa_prime.error});
    }
  }

  stage("mc-check", [&] {
    const double tol = config.quadrature.tolerance;
    const std::vector<std::pair<std::string, quadrature::IntegralSpec>> specs = {
        {"koranyi-ball", quadrature::kernels::koranyi_ball(tol)},
        {"jl-power-4", quadrature::kernels::jl_power(4, tol)},
        {"c", quadrature::kernels::c_kernel(tol)},
    };
    std::uint64_t seed = config.quadrature.seed;
    for (const auto& [name, spec] : specs) {
      const double q = quadrature::integrate_h1(spec).value;
      const auto mc = quadrature::monte_carlo_oracle(spec, config.quadrature.mc_samples, seed++);
      cert.mc_checks.push_back({name, q, mc.value, mc.standard_error, (q - mc.value) / mc.standard_error});
    }
    return 0;
  });

  stage("validate", [&] {
    std::vector<std::string> problems;
    for (std::size_t i = 0; i < config.critical_points.size(); ++i) {
      const auto& p = config.critical_points[i];
      for (const auto& v : critical::validate_profile(p, constants.per_point[i])) {
        problems.push_back("critical point '" + p.id + "' " + v.field + ": " + v.message);
      }
    }
    if (!problems.empty()) throw ConfigError(problems);
    return 0;
  });

  const Split split = stage("classify", [&] {
    for (std::size_t i = 0; i < config.critical_points.size(); ++i) {
      const auto& p = config.critical_points[i];
      const auto cls = critical::classify_point(p, constants.per_point[i]);
      cert.points.push_back({p.id, p.beta, critical::to_string(cls.set), cls.sigma, cls.m, p.k_value});
    }
    return split_points(config, constants);
  });

  const auto census = stage("enumerate", [&] {
    return census_for(split, constants.beta2, config.green.c_G, config.thresholds.pd_margin);
  });
  for (const auto& a : census.points) {
    cert.at_infinity.push_back({a.kind == counts::AtInfinityKind::Single ? "single" : "tuple", a.members, a.m_sum, a.index,
                                a.rho});
  }
  cert.l_plus = census.l_plus;
  cert.L0 = census.L0;

  stage("count", [&] {
    for (int k = 1; k <= census.L0 + 1; ++k) {
      const auto g = counts::existence_gate(census, k);
      GateEntry e{k, g.sum, g.cond1, g.cond2, g.verdict, counts::multiplicity_bound(census, k),
                  counts::printed_multiplicity_bound(census, k), false};
      e.printed_differs = e.bound != e.printed_bound;
      cert.gates.push_back(e);
    }
    const auto crit = counts::full_criterion(census);
    cert.criterion_k = crit.k;
    cert.criterion_exists = crit.exists;
    cert.criterion_bound = crit.total_bound;
    cert.criterion_printed_bound = crit.printed_bound;
    return 0;
  });

  if (!c_g_grid.empty()) {
    cert.sensitivity = stage("sensitivity", [&] { return sensitivity_sweep(config, constants, c_g_grid); });
  }
  return cert;
}

}  // namespace crcensus::report
