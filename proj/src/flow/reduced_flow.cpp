#include "crcensus/flow/reduced_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "crcensus/errors.hpp"
#include "crcensus/quadrature/integrate.hpp"
#include "crcensus/quadrature/kernels.hpp"

namespace crcensus::flow {

namespace {

double c0_fourth(const quadrature::StructuralConstants& c) { return c.c0_sq.value * c.c0_sq.value; }

// interaction constant c0^4 omega3 / 4 of the energy expansion
double interaction_constant(const quadrature::StructuralConstants& c) { return c0_fourth(c) * c.omega3.value / 4.0; }

double max_abs(const geometry::HeisenbergPoint& p) {
  return std::max({std::abs(p.x1()), std::abs(p.x2()), std::abs(p.t)});
}

void check_bubble(const Bubble& b) {
  if (!(b.lambda > 0.0) || !std::isfinite(b.lambda)) throw DomainError("bubble concentration must be positive");
  if (!(b.alpha > 0.0) || !std::isfinite(b.alpha)) throw DomainError("bubble weight must be positive");
}

}  // namespace

double epsilon_ij(double lambda_i, double lambda_j, double d) {
  if (!(lambda_i > 0.0 && lambda_j > 0.0)) throw DomainError("epsilon_ij needs positive concentrations");
  return 1.0 / (lambda_i / lambda_j + lambda_j / lambda_i + lambda_i * lambda_j * d * d);
}

double depsilon_dlambda_j(double lambda_i, double lambda_j, double d) {
  const double e = epsilon_ij(lambda_i, lambda_j, d);
  const double dE = -lambda_i / (lambda_j * lambda_j) + 1.0 / lambda_i + lambda_i * d * d;
  return -e * e * dE;
}

FlowModel::FlowModel(std::vector<critical::CriticalPointProfile> profiles, ConstantsProvider constants, FlowConfig config)
    : config_(config) {
  base_ = constants(2.0);
  for (auto& p : profiles) {
    if (index_.count(p.id)) throw DomainError("duplicate profile id '" + p.id + "'");
    const auto c = constants(p.beta);
    ProfileData d;
    d.classification = critical::classify_point(p, c);
    d.sigma_kappa = p.b.horizontal_sum() + c.kappa.value * p.b.b0;
    d.gamma = std::abs(p.beta - 2.0) <= critical::kBetaTwoTolerance ? 2.0 : p.beta;
    d.chart_origin = geometry::cayley_forward(p.position);
    d.horizontal_moment = quadrature::integrate_h1(quadrature::kernels::horizontal_moment(p.beta, 1e-8)).value;
    d.vertical_moment = quadrature::integrate_h1(quadrature::kernels::vertical_moment(p.beta, 1e-8)).value;
    d.profile = std::move(p);
    index_[d.profile.id] = profiles_.size();
    profiles_.push_back(std::move(d));
  }
}

const FlowModel::ProfileData& FlowModel::data(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw DomainError("unknown profile '" + id + "'");
  return profiles_[it->second];
}

const critical::CriticalPointProfile& FlowModel::profile(const std::string& id) const { return data(id).profile; }

geometry::SpherePoint FlowModel::bubble_position(const Bubble& b) const {
  return geometry::cayley_inverse(geometry::group_mul(data(b.profile_id).chart_origin, b.a));
}

quadrature::DkIntegral FlowModel::dk(const ProfileData& p, const geometry::HeisenbergPoint& s, int k) const {
  const double scale = max_abs(s);
  auto q = [scale](double x) { return std::llround(x / (1e-3 * scale)); };
  const std::array<long long, 6> key{k, std::llround(p.profile.beta * 1e9), std::llround(std::log2(scale) * 256.0),
                                     q(s.x1()), q(s.x2()), q(s.t)};
  if (auto it = dk_cache_.find(key); it != dk_cache_.end()) return it->second;
  const auto value = quadrature::dk_integrals(p.profile.beta, s, k, config_.dk_tolerance * std::max(scale, 1e-300));
  dk_cache_.emplace(key, value);
  return value;
}

EnergyTerms energy_terms(const FlowModel& model, const BubbleEnsemble& ens) {
  const auto& cfg = model.config();
  const auto& base = model.base_constants();
  const std::size_t n = ens.bubbles.size();
  if (n == 0) throw DomainError("empty bubble ensemble");
  EnergyTerms out;
  double a2 = 0.0, d4 = 0.0;
  std::vector<std::string> failures;
  double lambda_low = ens.bubbles.front().lambda;
  for (const auto& b : ens.bubbles) {
    check_bubble(b);
    const auto& data = model.data(b.profile_id);
    out.fields.push_back(critical::local_field_eval(data.profile, b.a, cfg.laplacian, cfg.chart_radius));
    const double k = out.fields.back().k;
    if (!(k > 0.0)) failures.push_back("K(a) <= 0 for '" + b.profile_id + "'");
    a2 += b.alpha * b.alpha;
    d4 += std::pow(b.alpha, 4) * k;
    lambda_low = std::min(lambda_low, b.lambda);
    const auto& g = out.fields.back().grad;
    const double grad_norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    if (b.lambda * grad_norm > 2.0 * cfg.regime_C_prime) {
      std::ostringstream msg;
      msg << "lambda |grad K(a)| = " << b.lambda * grad_norm << " exceeds 2C' for '" << b.profile_id << "'";
      failures.push_back(msg.str());
    }
  }
  if (!failures.empty() && d4 <= 0.0) {
    throw RegimeError(failures.front());
  }
  const double S = base.S.value;
  out.prefactor = a2 * S / std::sqrt(d4);
  out.weight.resize(n);
  double curvature = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = ens.bubbles[i];
    const auto& data = model.data(b.profile_id);
    out.weight[i] = std::pow(b.alpha, 4) / d4;
    curvature += out.weight[i] * data.classification.sigma / std::pow(b.lambda, data.gamma);
  }
  out.distance.assign(n, std::vector<double>(n, 0.0));
  out.epsilon.assign(n, std::vector<double>(n, 0.0));
  out.coupling.assign(n, std::vector<double>(n, 0.0));
  std::vector<geometry::SpherePoint> positions;
  for (const auto& b : ens.bubbles) positions.push_back(model.bubble_position(b));
  double interaction = 0.0, eps_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& bi = ens.bubbles[i];
      const auto& bj = ens.bubbles[j];
      out.distance[i][j] = std::sqrt(geometry::cr_distance_sq(positions[i], positions[j]));
      out.epsilon[i][j] = epsilon_ij(bi.lambda, bj.lambda, out.distance[i][j]);
      out.coupling[i][j] = bi.alpha * bj.alpha / a2 - 2.0 * std::pow(bi.alpha, 3) * bj.alpha * out.fields[i].k / d4;
      interaction += out.epsilon[i][j] * out.coupling[i][j];
      eps_sum += out.epsilon[i][j];
    }
  }
  if (eps_sum > cfg.regime_C / (lambda_low * lambda_low)) {
    std::ostringstream msg;
    msg << "sum of epsilon_ij = " << eps_sum << " exceeds C / lambda_min^2 = " << cfg.regime_C / (lambda_low * lambda_low);
    failures.push_back(msg.str());
  }
  if (!failures.empty()) {
    std::string msg = "outside the expansion regime:";
    for (const auto& f : failures) msg += " " + f + ";";
    throw RegimeError(msg);
  }
  out.bracket = 1.0 - base.c.value / (2.0 * S * S) * curvature + interaction_constant(base) / (S * S) * interaction;
  out.J = out.prefactor * out.bracket;
  return out;
}

double reduced_energy(const FlowModel& model, const BubbleEnsemble& ens) { return energy_terms(model, ens).J; }

std::vector<double> energy_lambda_derivative(const FlowModel& model, const BubbleEnsemble& ens) {
  const auto t = energy_terms(model, ens);
  const auto& base = model.base_constants();
  const double S = base.S.value;
  const std::size_t n = ens.bubbles.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& bj = ens.bubbles[j];
    const auto& data = model.data(bj.profile_id);
    double v = base.c.value / (2.0 * S * S) * t.weight[j] * data.classification.sigma * data.gamma /
               std::pow(bj.lambda, data.gamma);
    double inter = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      inter += bj.lambda * depsilon_dlambda_j(ens.bubbles[i].lambda, bj.lambda, t.distance[i][j]) *
               (t.coupling[i][j] + t.coupling[j][i]);
    }
    v += interaction_constant(base) / (S * S) * inter;
    out[j] = t.prefactor * v;
  }
  return out;
}

std::vector<BubbleRate> pseudo_gradient_field(const FlowModel& model, const BubbleEnsemble& ens) {
  const auto& cfg = model.config();
  const auto& base = model.base_constants();
  const auto t = energy_terms(model, ens);
  const double S = base.S.value;
  const double omega3 = base.omega3.value;
  const double position_rate = base.c.value / (2.0 * S * S);
  const std::size_t n = ens.bubbles.size();
  std::vector<BubbleRate> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& bj = ens.bubbles[j];
    const auto& data = model.data(bj.profile_id);
    const auto& field = t.fields[j];
    const double scaled_norm = bj.lambda * geometry::koranyi_norm(bj.a);
    out[j].flatness_branch = scaled_norm <= cfg.mu;

    double curvature = 0.0;
    if (out[j].flatness_branch) {
      curvature = cfg.c5 * t.prefactor * base.c.value / (2.0 * S * S) * t.weight[j] * data.sigma_kappa * data.gamma /
                  std::pow(bj.lambda, data.gamma);
    } else {
      curvature = 2.0 * t.J * (omega3 / 24.0) * bj.alpha * field.laplacian / (field.k * bj.lambda * bj.lambda);
    }
    double inter = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      inter += bj.lambda * depsilon_dlambda_j(ens.bubbles[i].lambda, bj.lambda, t.distance[i][j]) *
               (t.coupling[i][j] + t.coupling[j][i]);
    }
    inter *= cfg.c4 * t.prefactor * interaction_constant(base) / (S * S);
    const double g = curvature + inter;
    out[j].log_lambda_dot = -g * std::pow(bj.lambda, data.gamma) / t.J;
    out[j].lambda_dot = bj.lambda * out[j].log_lambda_dot;

    std::array<double, 3> direction{};
    if (scaled_norm == 0.0) {
      direction = {0.0, 0.0, 0.0};
    } else if (out[j].flatness_branch) {
      const double lam = bj.lambda;
      const double beta = data.profile.beta;
      geometry::HeisenbergPoint s(lam * bj.a.x1(), lam * bj.a.x2(), lam * lam * bj.a.t);
      double unscale = 1.0;
      const double s_max = max_abs(s);
      if (s_max < cfg.dk_shift_floor) {
        // the dk integrals are linear in the shift near 0; evaluate at the floor and rescale
        const double f = cfg.dk_shift_floor / s_max;
        s = geometry::HeisenbergPoint(f * s.x1(), f * s.x2(), f * s.t);
        unscale = 1.0 / f;
      }
      const auto& b = data.profile.b;
      const auto d1 = model.dk(data, s, 1);
      const auto d2 = model.dk(data, s, 2);
      const auto d0 = model.dk(data, s, 0);
      direction[0] = unscale * std::pow(lam, 1.0 - beta) * d1.combined(b.b1, b.b0) / data.horizontal_moment;
      direction[1] = unscale * std::pow(lam, 1.0 - beta) * d2.combined(b.b2, b.b0) / data.horizontal_moment;
      direction[2] = unscale * std::pow(lam, -beta) * b.b0 * d0.vertical.value / data.vertical_moment;
    } else {
      direction = field.grad;
    }
    const double a_scale = position_rate * 2.0 * (omega3 / 48.0) * bj.alpha / field.k;
    for (int k = 0; k < 3; ++k) out[j].a_dot[static_cast<std::size_t>(k)] = a_scale * direction[static_cast<std::size_t>(k)];
    out[j].alpha_dot = cfg.alpha_rate * (1.0 / std::sqrt(field.k) - bj.alpha);
  }
  return out;
}

double normal_form_energy(const critical::CriticalPointProfile& profile, const quadrature::StructuralConstants& constants,
                          double lambda_tilde, double v_norm_sq, double mu) {
  if (!(lambda_tilde > 0.0)) throw DomainError("lambda must be positive");
  const auto cls = critical::classify_point(profile, constants);
  if (cls.set == critical::PointSet::Neither) throw DomainError("normal form energy needs a K1 or K2 point");
  const double gamma = cls.set == critical::PointSet::K1 ? 2.0 : profile.beta;
  const double Gamma = -cls.sigma;
  return constants.S.value / std::sqrt(profile.k_value) *
             (1.0 + constants.c.value * (1.0 - mu) * Gamma / std::pow(lambda_tilde, gamma)) +
         v_norm_sq;
}

void balance_alpha(const FlowModel& model, BubbleEnsemble& ens) {
  const auto& cfg = model.config();
  for (auto& b : ens.bubbles) {
    const auto field = critical::local_field_eval(model.profile(b.profile_id), b.a, cfg.laplacian, cfg.chart_radius);
    if (!(field.k > 0.0)) throw RegimeError("K(a) <= 0 for '" + b.profile_id + "'");
    b.alpha = 1.0 / std::sqrt(field.k);
  }
}

const char* to_string(FateKind kind) noexcept {
  switch (kind) {
    case FateKind::BlowUp:
      return "blow-up";
    case FateKind::Exit:
      return "exit";
    case FateKind::Stagnant:
      break;
  }
  return "stagnant";
}

namespace {

void record(const FlowModel& model, const BubbleEnsemble& ens, const EnergyTerms& terms, std::size_t step,
            FlowResult& result, std::ostream* log) {
  result.trajectory.push_back(ens);
  auto& fate = result.fate;
  fate.j_history.push_back(terms.J);
  std::vector<double> lambdas, eps;
  for (const auto& b : ens.bubbles) lambdas.push_back(b.lambda);
  const std::size_t n = ens.bubbles.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) eps.push_back(terms.epsilon[i][j]);
  }
  fate.lambda_history.push_back(lambdas);
  fate.epsilon_history.push_back(eps);
  if (log != nullptr) {
    nlohmann::json line;
    line["step"] = step;
    line["time"] = ens.time;
    line["J"] = terms.J;
    nlohmann::json bubbles = nlohmann::json::array();
    for (const auto& b : ens.bubbles) {
      const auto pos = model.bubble_position(b);
      bubbles.push_back({{"profile", b.profile_id},
                         {"alpha", b.alpha},
                         {"a", {b.a.x1(), b.a.x2(), b.a.t}},
                         {"lambda", b.lambda},
                         {"sphere", {pos.zeta1().real(), pos.zeta1().imag(), pos.zeta2().real(), pos.zeta2().imag()}}});
    }
    line["bubbles"] = bubbles;
    nlohmann::json e = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) e.push_back({{"i", i}, {"j", j}, {"epsilon", terms.epsilon[i][j]}});
    }
    line["epsilon"] = e;
    *log << line.dump() << '\n';
  }
}

bool blown_up(const FlowConfig& cfg, const BubbleEnsemble& ens) {
  std::vector<double> l;
  for (const auto& b : ens.bubbles) l.push_back(b.lambda);
  std::sort(l.begin(), l.end());
  if (l.front() <= cfg.blowup_threshold) return false;
  for (std::size_t i = 1; i < l.size(); ++i) {
    if (l[i] > cfg.ratio_bound * l[i - 1]) return false;
  }
  return true;
}

}  // namespace

FlowResult integrate_flow(const FlowModel& model, BubbleEnsemble ens, std::ostream* log) {
  const auto& cfg = model.config();
  FlowResult result;
  auto& fate = result.fate;
  auto exit_with = [&](const std::string& reason) {
    fate.kind = FateKind::Exit;
    fate.reason = reason;
    return result;
  };
  for (const auto& b : ens.bubbles) {
    check_bubble(b);
    if (b.lambda < cfg.lambda_min) throw DomainError("initial concentration below lambda_min");
  }
  for (std::size_t i = 0; i < ens.bubbles.size(); ++i) {
    for (std::size_t j = i + 1; j < ens.bubbles.size(); ++j) {
      if (ens.bubbles[i].profile_id == ens.bubbles[j].profile_id) {
        throw DomainError("bubbles must be assigned to distinct profiles");
      }
    }
  }

  EnergyTerms terms;
  try {
    balance_alpha(model, ens);
    terms = energy_terms(model, ens);
  } catch (const RegimeError& e) {
    return exit_with(e.what());
  } catch (const ChartError& e) {
    return exit_with(e.what());
  }
  std::size_t step = 0;
  record(model, ens, terms, step, result, log);
  double h = cfg.initial_step;

  while (true) {
    if (step >= cfg.max_steps || ens.time >= cfg.horizon) {
      fate.kind = FateKind::Stagnant;
      fate.reason = "horizon reached";
      return result;
    }
    std::vector<BubbleRate> rates;
    try {
      rates = pseudo_gradient_field(model, ens);
    } catch (const RegimeError& e) {
      return exit_with(e.what());
    } catch (const ChartError& e) {
      return exit_with(e.what());
    } catch (const SingularityError& e) {
      return exit_with(e.what());
    }
    double max_dl = 0.0, max_da = 0.0;
    for (const auto& r : rates) {
      max_dl = std::max(max_dl, std::abs(r.log_lambda_dot));
      for (double v : r.a_dot) max_da = std::max(max_da, std::abs(v));
    }
    if (max_dl == 0.0 && max_da == 0.0) {
      fate.kind = FateKind::Stagnant;
      fate.reason = "stationary point of the reduced field";
      return result;
    }
    double h_eff = h;
    if (max_dl > 0.0) h_eff = std::min(h_eff, cfg.max_log_lambda_change / max_dl);
    if (max_da > 0.0) h_eff = std::min(h_eff, cfg.max_position_change / max_da);

    BubbleEnsemble next = ens;
    for (std::size_t j = 0; j < rates.size(); ++j) {
      auto& b = next.bubbles[j];
      b.lambda *= std::exp(h_eff * rates[j].log_lambda_dot);
      b.a = geometry::HeisenbergPoint(b.a.x1() + h_eff * rates[j].a_dot[0], b.a.x2() + h_eff * rates[j].a_dot[1],
                                      b.a.t + h_eff * rates[j].a_dot[2]);
    }
    next.time = ens.time + h_eff;
    for (const auto& b : next.bubbles) {
      if (geometry::koranyi_norm(b.a) > cfg.chart_radius) return exit_with("bubble left the chart of '" + b.profile_id + "'");
    }
    EnergyTerms next_terms;
    try {
      balance_alpha(model, next);
      next_terms = energy_terms(model, next);
    } catch (const RegimeError& e) {
      return exit_with(e.what());
    }
    if (next_terms.J <= terms.J) {
      ens = std::move(next);
      terms = std::move(next_terms);
      ++step;
      record(model, ens, terms, step, result, log);
      h = std::min(2.0 * h_eff, cfg.max_step);
      for (const auto& b : ens.bubbles) {
        if (b.lambda < cfg.lambda_min) return exit_with("concentration of '" + b.profile_id + "' fell below lambda_min");
      }
      if (blown_up(cfg, ens)) {
        fate.kind = FateKind::BlowUp;
        for (const auto& b : ens.bubbles) fate.members.push_back(b.profile_id);
        fate.reason = "all concentrations above the blow-up threshold with bounded ratios";
        return result;
      }
    } else {
      ++result.rejected_steps;
      h = 0.5 * h_eff;
      if (h < cfg.min_step) {
        fate.kind = FateKind::Stagnant;
        fate.reason = "step size underflow";
        return result;
      }
    }
  }
}

}  // namespace crcensus::flow
