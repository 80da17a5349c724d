#include "crcensus/report/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "crcensus/errors.hpp"

namespace crcensus::report {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Walks the tree and records every problem instead of stopping at the first.
class Reader {
 public:
  std::vector<std::string> violations;

  void fail(const std::string& path, const std::string& message) { violations.push_back(path + ": " + message); }

  bool object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      if (!allowed.count(key)) fail(path + "." + key, "unknown key");
    }
    return true;
  }

  void number(const json& j, const std::string& key, const std::string& path, double& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) {
      fail(path + "." + key, "expected a number");
      return;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      fail(path + "." + key, "must be finite");
      return;
    }
    out = d;
  }

  void required_number(const json& j, const std::string& key, const std::string& path, double& out) {
    if (!j.contains(key)) {
      fail(path + "." + key, "missing");
      return;
    }
    number(j, key, path, out);
  }

  void count(const json& j, const std::string& key, const std::string& path, std::uint64_t& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      fail(path + "." + key, "expected a nonnegative integer");
      return;
    }
    out = v.get<std::uint64_t>();
  }

  void positive(double value, const std::string& path) {
    if (!(value > 0.0)) fail(path, "must be positive, got " + fmt(value));
  }

  bool triple(const json& j, const std::string& path, std::array<double, 3>& out) {
    if (!j.is_array() || j.size() != 3) {
      fail(path, "expected an array of three numbers");
      return false;
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!j[i].is_number() || !std::isfinite(j[i].get<double>())) {
        fail(path, "entries must be finite numbers");
        return false;
      }
      out[i] = j[i].get<double>();
    }
    return true;
  }

  bool complex_value(const json& j, const std::string& path, geometry::Complex& out) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
      fail(path, "expected [re, im]");
      return false;
    }
    const double re = j[0].get<double>(), im = j[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      fail(path, "entries must be finite numbers");
      return false;
    }
    out = {re, im};
    return true;
  }
};

void read_point(Reader& r, const json& j, const std::string& path, CensusConfig& cfg) {
  critical::CriticalPointProfile p;
  PositionTag tag = PositionTag::Sphere;
  if (!r.object(j, path, {"id", "position", "beta", "b1", "b2", "b0", "K"})) return;
  if (!j.contains("id") || !j.at("id").is_string() || j.at("id").get<std::string>().empty()) {
    r.fail(path + ".id", "missing or not a non-empty string");
  } else {
    p.id = j.at("id").get<std::string>();
  }
  double beta = 2.0;
  r.number(j, "beta", path, beta);
  if (!(beta >= 2.0 && beta < 4.0)) r.fail(path + ".beta", "must lie in the admissible range [2,4), got " + fmt(beta));
  p.beta = beta;
  r.required_number(j, "b1", path, p.b.b1);
  r.required_number(j, "b2", path, p.b.b2);
  r.required_number(j, "b0", path, p.b.b0);
  r.required_number(j, "K", path, p.k_value);
  if (j.contains("K")) r.positive(p.k_value, path + ".K");

  const std::string pos_path = path + ".position";
  if (!j.contains("position")) {
    r.fail(pos_path, "missing");
  } else {
    const auto& pos = j.at("position");
    if (r.object(pos, pos_path, {"sphere", "chart"})) {
      if (pos.contains("sphere") == pos.contains("chart")) {
        r.fail(pos_path, "give exactly one of \"sphere\" or \"chart\"");
      } else if (pos.contains("sphere")) {
        const auto& s = pos.at("sphere");
        geometry::Complex z1, z2;
        if (!s.is_array() || s.size() != 2) {
          r.fail(pos_path + ".sphere", "expected [[re, im], [re, im]]");
        } else if (r.complex_value(s[0], pos_path + ".sphere[0]", z1) &&
                   r.complex_value(s[1], pos_path + ".sphere[1]", z2)) {
          const double n2 = std::norm(z1) + std::norm(z2);
          if (std::abs(n2 - 1.0) > 1e-9) {
            r.fail(pos_path + ".sphere", "not on the unit sphere (|zeta1|^2 + |zeta2|^2 = " + fmt(n2) + ")");
          } else if (std::abs(z1) < 1e-12 && std::abs(z2 + 1.0) < 1e-12) {
            r.fail(pos_path + ".sphere", "the Cayley pole (0, -1) is excluded");
          } else {
            p.position = geometry::SpherePoint(z1, z2);
          }
        }
      } else {
        std::array<double, 3> c{};
        if (r.triple(pos.at("chart"), pos_path + ".chart", c)) {
          p.position = geometry::cayley_inverse(geometry::HeisenbergPoint(c[0], c[1], c[2]));
          tag = PositionTag::Chart;
        }
      }
    }
  }
  cfg.critical_points.push_back(std::move(p));
  cfg.position_tags.push_back(tag);
}

void read_flow(Reader& r, const json& j, CensusConfig& cfg) {
  const std::string path = "flow";
  if (!r.object(j, path, {"mu", "c4", "c5", "lambda_min", "ratio_bound", "laplacian", "max_steps", "scenarios"})) return;
  auto& f = cfg.flow;
  r.number(j, "mu", path, f.mu);
  r.number(j, "c4", path, f.c4);
  r.number(j, "c5", path, f.c5);
  r.number(j, "lambda_min", path, f.lambda_min);
  r.number(j, "ratio_bound", path, f.ratio_bound);
  r.count(j, "max_steps", path, f.max_steps);
  r.positive(f.mu, path + ".mu");
  r.positive(f.c4, path + ".c4");
  r.positive(f.c5, path + ".c5");
  r.positive(f.lambda_min, path + ".lambda_min");
  if (!(f.ratio_bound >= 1.0)) r.fail(path + ".ratio_bound", "must be at least 1");
  if (j.contains("laplacian")) {
    const auto& l = j.at("laplacian");
    if (l == "horizontal") {
      f.laplacian = critical::LaplacianConvention::Horizontal;
    } else if (l == "with_t") {
      f.laplacian = critical::LaplacianConvention::WithT;
    } else {
      r.fail(path + ".laplacian", "expected \"horizontal\" or \"with_t\"");
    }
  }
  if (!j.contains("scenarios")) return;
  const auto& list = j.at("scenarios");
  if (!list.is_array()) {
    r.fail(path + ".scenarios", "expected an array");
    return;
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string sp = path + ".scenarios[" + std::to_string(i) + "]";
    const auto& s = list[i];
    if (!r.object(s, sp, {"name", "bubbles"})) continue;
    FlowScenario sc;
    if (!s.contains("name") || !s.at("name").is_string() || s.at("name").get<std::string>().empty()) {
      r.fail(sp + ".name", "missing or not a non-empty string");
    } else {
      sc.name = s.at("name").get<std::string>();
      if (!names.insert(sc.name).second) r.fail(sp + ".name", "duplicate scenario name '" + sc.name + "'");
    }
    if (!s.contains("bubbles") || !s.at("bubbles").is_array() || s.at("bubbles").empty()) {
      r.fail(sp + ".bubbles", "expected a non-empty array");
    } else {
      std::set<std::string> used;
      for (std::size_t k = 0; k < s.at("bubbles").size(); ++k) {
        const std::string bp = sp + ".bubbles[" + std::to_string(k) + "]";
        const auto& b = s.at("bubbles")[k];
        if (!r.object(b, bp, {"profile", "lambda", "a"})) continue;
        ScenarioBubble bubble;
        if (!b.contains("profile") || !b.at("profile").is_string()) {
          r.fail(bp + ".profile", "missing or not a string");
        } else {
          bubble.profile = b.at("profile").get<std::string>();
          if (!used.insert(bubble.profile).second) {
            r.fail(bp + ".profile", "profile '" + bubble.profile + "' already carries a bubble in this scenario");
          }
        }
        r.number(b, "lambda", bp, bubble.lambda);
        if (!(bubble.lambda >= f.lambda_min)) {
          r.fail(bp + ".lambda", "must be at least lambda_min = " + fmt(f.lambda_min) + ", got " + fmt(bubble.lambda));
        }
        if (b.contains("a")) {
          std::array<double, 3> a{};
          if (r.triple(b.at("a"), bp + ".a", a)) bubble.a = geometry::HeisenbergPoint(a[0], a[1], a[2]);
        }
        sc.bubbles.push_back(std::move(bubble));
      }
    }
    f.scenarios.push_back(std::move(sc));
  }
}

void check_cross_references(Reader& r, CensusConfig& cfg) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < cfg.critical_points.size(); ++i) {
    const auto& id = cfg.critical_points[i].id;
    if (!id.empty() && !ids.insert(id).second) {
      r.fail("critical_points[" + std::to_string(i) + "].id", "duplicate id '" + id + "'");
    }
  }
  for (std::size_t i = 0; i < cfg.critical_points.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.critical_points.size(); ++j) {
      const auto& a = cfg.critical_points[i];
      const auto& b = cfg.critical_points[j];
      if (geometry::cr_distance_sq(a.position, b.position) <= 1e-14) {
        r.fail("critical_points[" + std::to_string(j) + "].position",
               "coincides with '" + a.id + "' (positions must be pairwise distinct)");
      }
    }
  }
  for (const auto& sc : cfg.flow.scenarios) {
    for (const auto& b : sc.bubbles) {
      if (!b.profile.empty() && !ids.count(b.profile)) {
        r.fail("flow.scenarios." + sc.name, "unknown profile '" + b.profile + "'");
      }
      if (geometry::koranyi_norm(b.a) > cfg.thresholds.chart_radius) {
        r.fail("flow.scenarios." + sc.name, "bubble on '" + b.profile + "' starts outside the chart radius");
      }
    }
  }
}

}  // namespace

flow::FlowConfig CensusConfig::flow_config() const {
  flow::FlowConfig out;
  out.lambda_min = flow.lambda_min;
  out.blowup_threshold = thresholds.blowup_threshold;
  out.ratio_bound = flow.ratio_bound;
  out.chart_radius = thresholds.chart_radius;
  out.mu = flow.mu;
  out.c4 = flow.c4;
  out.c5 = flow.c5;
  out.laplacian = flow.laplacian;
  out.max_steps = flow.max_steps;
  return out;
}

const FlowScenario& CensusConfig::scenario(const std::string& name) const {
  for (const auto& s : flow.scenarios) {
    if (s.name == name) return s;
  }
  throw ConfigError({"flow.scenarios: no scenario named '" + name + "'"});
}

CensusConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (const auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
    throw ConfigError({source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what});
  }

  Reader r;
  CensusConfig cfg;
  if (!r.object(root, "config", {"critical_points", "quadrature", "green", "thresholds", "flow"})) {
    throw ConfigError(r.violations);
  }
  if (!root.contains("critical_points") || !root.at("critical_points").is_array()) {
    r.fail("critical_points", "missing or not an array");
  } else {
    const auto& list = root.at("critical_points");
    for (std::size_t i = 0; i < list.size(); ++i) read_point(r, list[i], "critical_points[" + std::to_string(i) + "]", cfg);
  }
  if (root.contains("quadrature")) {
    const auto& q = root.at("quadrature");
    if (r.object(q, "quadrature", {"tolerance", "mc_samples", "seed"})) {
      r.number(q, "tolerance", "quadrature", cfg.quadrature.tolerance);
      r.count(q, "mc_samples", "quadrature", cfg.quadrature.mc_samples);
      r.count(q, "seed", "quadrature", cfg.quadrature.seed);
      if (!(cfg.quadrature.tolerance > 0.0 && cfg.quadrature.tolerance < 1.0)) {
        r.fail("quadrature.tolerance", "must lie in (0,1), got " + fmt(cfg.quadrature.tolerance));
      }
      if (cfg.quadrature.mc_samples < 10000) r.fail("quadrature.mc_samples", "must be at least 10000");
    }
  }
  if (root.contains("green")) {
    const auto& g = root.at("green");
    if (r.object(g, "green", {"c_G"})) {
      r.number(g, "c_G", "green", cfg.green.c_G);
      r.positive(cfg.green.c_G, "green.c_G");
    }
  }
  if (root.contains("thresholds")) {
    const auto& t = root.at("thresholds");
    if (r.object(t, "thresholds", {"pd_margin", "blowup_threshold", "chart_radius"})) {
      r.number(t, "pd_margin", "thresholds", cfg.thresholds.pd_margin);
      r.number(t, "blowup_threshold", "thresholds", cfg.thresholds.blowup_threshold);
      r.number(t, "chart_radius", "thresholds", cfg.thresholds.chart_radius);
      if (!(cfg.thresholds.pd_margin >= 0.0)) r.fail("thresholds.pd_margin", "must be nonnegative");
      r.positive(cfg.thresholds.blowup_threshold, "thresholds.blowup_threshold");
      r.positive(cfg.thresholds.chart_radius, "thresholds.chart_radius");
    }
  }
  if (root.contains("flow")) read_flow(r, root.at("flow"), cfg);
  check_cross_references(r, cfg);
  if (!r.violations.empty()) throw ConfigError(r.violations);
  return cfg;
}

CensusConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

json config_to_json(const CensusConfig& config) {
  json points = json::array();
  for (std::size_t i = 0; i < config.critical_points.size(); ++i) {
    const auto& p = config.critical_points[i];
    json pos;
    if (config.position_tags[i] == PositionTag::Chart) {
      const auto c = geometry::cayley_forward(p.position);
      pos["chart"] = {c.x1(), c.x2(), c.t};
    } else {
      pos["sphere"] = {{p.position.zeta1().real(), p.position.zeta1().imag()},
                       {p.position.zeta2().real(), p.position.zeta2().imag()}};
    }
    points.push_back(
        {{"id", p.id}, {"position", pos}, {"beta", p.beta}, {"b1", p.b.b1}, {"b2", p.b.b2}, {"b0", p.b.b0}, {"K", p.k_value}});
  }
  json scenarios = json::array();
  for (const auto& s : config.flow.scenarios) {
    json bubbles = json::array();
    for (const auto& b : s.bubbles) {
      bubbles.push_back({{"profile", b.profile}, {"lambda", b.lambda}, {"a", {b.a.x1(), b.a.x2(), b.a.t}}});
    }
    scenarios.push_back({{"name", s.name}, {"bubbles", bubbles}});
  }
  return {
      {"critical_points", points},
      {"quadrature",
       {{"tolerance", config.quadrature.tolerance},
        {"mc_samples", config.quadrature.mc_samples},
        {"seed", config.quadrature.seed}}},
      {"green", {{"c_G", config.green.c_G}}},
      {"thresholds",
       {{"pd_margin", config.thresholds.pd_margin},
        {"blowup_threshold", config.thresholds.blowup_threshold},
        {"chart_radius", config.thresholds.chart_radius}}},
      {"flow",
       {{"mu", config.flow.mu},
        {"c4", config.flow.c4},
        {"c5", config.flow.c5},
        {"lambda_min", config.flow.lambda_min},
        {"ratio_bound", config.flow.ratio_bound},
        {"laplacian", config.flow.laplacian == critical::LaplacianConvention::Horizontal ? "horizontal" : "with_t"},
        {"max_steps", config.flow.max_steps},
        {"scenarios", scenarios}}},
  };
}

}  // namespace crcensus::report
