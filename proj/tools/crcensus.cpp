#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "crcensus/critical/profile.hpp"
#include "crcensus/errors.hpp"
#include "crcensus/flow/reduced_flow.hpp"
#include "crcensus/quadrature/constants.hpp"
#include "crcensus/report/cache.hpp"
#include "crcensus/report/certificate.hpp"
#include "crcensus/report/config.hpp"
#include "crcensus/report/pipeline.hpp"

#include "../tests/acceptance/criteria.hpp"

namespace {

using namespace crcensus;

void print_value(const std::string& name, const quadrature::ValueWithError& v) {
  std::cout << std::left << std::setw(12) << name << std::right << std::setprecision(15) << std::setw(22) << v.value
            << "  +- " << std::setprecision(2) << v.error << "\n";
}

int cmd_constants(double beta, double tol, report::FileConstantCache& cache) {
  const auto c = quadrature::compute_structural_constants(beta, tol, &cache);
  std::cout << "beta = " << beta << ", tolerance = " << tol << "\n";
  print_value("kappa", c.kappa);
  print_value("kappa_prime", c.kappa_prime);
  print_value("c", c.c);
  print_value("c2", c.c2);
  print_value("S", c.S);
  print_value("omega3", c.omega3);
  print_value("c_prime", c.c_prime);
  print_value("c0_sq", c.c0_sq);
  return 0;
}

int cmd_classify(const std::string& path, report::FileConstantCache& cache) {
  const auto config = report::load_config(path);
  const auto constants = report::compute_constants(config, &cache);
  int status = 0;
  std::cout << std::left << std::setw(16) << "id" << std::setw(8) << "beta" << std::setw(10) << "set" << std::setw(4) << "m"
            << "sigma\n";
  for (std::size_t i = 0; i < config.critical_points.size(); ++i) {
    const auto& p = config.critical_points[i];
    const auto violations = critical::validate_profile(p, constants.per_point[i]);
    std::cout << std::left << std::setw(16) << p.id << std::setw(8) << p.beta;
    if (!violations.empty()) {
      std::cout << "invalid:";
      for (const auto& v : violations) std::cout << " " << v.field << " (" << v.message << ")";
      std::cout << "\n";
      status = 2;
      continue;
    }
    try {
      const auto cls = critical::classify_point(p, constants.per_point[i]);
      std::cout << std::setw(10) << critical::to_string(cls.set) << std::setw(4) << cls.m << std::setprecision(12)
                << cls.sigma << "\n";
    } catch (const DegenerateProfile& e) {
      std::cout << "degenerate: " << e.what() << "\n";
      status = 2;
    }
  }
  return status;
}

int cmd_census(const std::string& path, const std::string& sweep, const std::string& out, bool show_report,
               report::FileConstantCache& cache) {
  const auto config = report::load_config(path);
  const auto grid = sweep.empty() ? std::vector<double>{} : report::parse_sweep(sweep);
  const auto cert = report::run_census(config, &cache, grid);
  if (out.empty()) {
    std::cout << report::certificate_text(cert);
  } else {
    report::emit_certificate(cert, out);
  }
  if (show_report || !out.empty()) std::cout << report::emit_report(cert);
  return 0;
}

int cmd_flow(const std::string& path, const std::string& scenario_name, const std::string& log_path,
             report::FileConstantCache& cache) {
  const auto config = report::load_config(path);
  const auto& scenario = config.scenario(scenario_name);
  const double tol = config.quadrature.tolerance;
  flow::FlowModel model(
      config.critical_points,
      [&](double beta) { return quadrature::compute_structural_constants(beta, tol, &cache); },
      config.flow_config());
  flow::BubbleEnsemble ens;
  for (const auto& b : scenario.bubbles) {
    flow::Bubble bubble;
    bubble.profile_id = b.profile;
    bubble.a = b.a;
    bubble.lambda = b.lambda;
    ens.bubbles.push_back(bubble);
  }
  std::unique_ptr<std::ofstream> file;
  std::ostream* log = &std::cout;
  if (!log_path.empty()) {
    file = std::make_unique<std::ofstream>(log_path, std::ios::binary | std::ios::trunc);
    if (!*file) throw Error("cannot open " + log_path);
    log = file.get();
  }
  const auto result = flow::integrate_flow(model, ens, log);
  auto& summary = log_path.empty() ? std::cerr : std::cout;
  summary << "scenario " << scenario.name << ": " << flow::to_string(result.fate.kind) << " (" << result.fate.reason
          << ") after " << result.trajectory.size() - 1 << " accepted and " << result.rejected_steps
          << " rejected steps; J = " << std::setprecision(12) << result.fate.j_history.back() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical points at infinity: constants, census and reduced flow"};
  app.require_subcommand(1);
  std::string cache_dir;
  app.add_option("--cache-dir", cache_dir, "constants cache directory (default $CRCENSUS_CACHE_DIR)");

  double beta = 2.0, tol = quadrature::kDefaultTolerance;
  auto* constants = app.add_subcommand("constants", "print the structural constants");
  constants->add_option("--beta", beta, "flatness order in [2,4)");
  constants->add_option("--tol", tol, "relative tolerance");

  std::string config_path;
  auto* classify = app.add_subcommand("classify", "classify the critical points of a config");
  classify->add_option("CONFIG", config_path)->required()->check(CLI::ExistingFile);

  std::string sweep, out;
  bool show_report = false;
  auto* census = app.add_subcommand("census", "run the census and emit a certificate");
  census->add_option("CONFIG", config_path)->required()->check(CLI::ExistingFile);
  census->add_option("--cg-sweep", sweep, "geometric c_G grid LO:HI:N");
  census->add_option("--out", out, "certificate path (default: stdout)");
  census->add_flag("--report", show_report, "also print the human-readable report");

  std::string scenario, log_path;
  auto* flow_cmd = app.add_subcommand("flow", "integrate a reduced-flow scenario");
  flow_cmd->add_option("CONFIG", config_path)->required()->check(CLI::ExistingFile);
  flow_cmd->add_option("--scenario", scenario, "scenario name")->required();
  flow_cmd->add_option("--log", log_path, "trajectory log (default: stdout)");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");

  CLI11_PARSE(app, argc, argv);

  try {
    report::FileConstantCache cache(cache_dir.empty() ? report::FileConstantCache::default_directory() : std::filesystem::path(cache_dir),
                                    &std::cerr);
    if (*constants) return cmd_constants(beta, tol, cache);
    if (*classify) return cmd_classify(config_path, cache);
    if (*census) return cmd_census(config_path, sweep, out, show_report, cache);
    if (*flow_cmd) return cmd_flow(config_path, scenario, log_path, cache);
    if (*verify) return acceptance::run_all(std::cout) ? 0 : 1;
  } catch (const report::PipelineError& e) {
    std::cerr << "error in stage " << e.what() << "\n";
    return report::exit_code(e.kind());
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (best " << e.best_value() << " +- " << e.best_error() << ")\n";
    return 3;
  } catch (const ConditionCViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
