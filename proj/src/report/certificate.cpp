#include "crcensus/report/certificate.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "crcensus/errors.hpp"

namespace crcensus::report {

using nlohmann::json;

const char* const kToolVersion = "crcensus 1.0.0";

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace

json certificate_to_json(const Certificate& c) {
  json constants = json::array();
  for (const auto& e : c.constants) {
    constants.push_back({{"name", e.name}, {"beta", opt(e.beta)}, {"value", e.value}, {"error", e.error}});
  }
  json mc = json::array();
  for (const auto& e : c.mc_checks) {
    mc.push_back({{"integral", e.integral},
                  {"quadrature", e.quadrature},
                  {"mc_value", e.mc_value},
                  {"mc_standard_error", e.mc_standard_error},
                  {"z_score", e.z_score}});
  }
  json points = json::array();
  for (const auto& p : c.points) {
    points.push_back(
        {{"id", p.id}, {"beta", p.beta}, {"set", p.set}, {"sigma", p.sigma}, {"m", p.m}, {"K", p.k_value}});
  }
  json inf = json::array();
  for (const auto& a : c.at_infinity) {
    inf.push_back(
        {{"kind", a.kind}, {"members", a.members}, {"m_sum", a.m_sum}, {"index", a.index}, {"rho", opt(a.rho)}});
  }
  json gates = json::array();
  for (const auto& g : c.gates) {
    gates.push_back({{"k", g.k},
                     {"gate_sum", g.gate_sum},
                     {"cond1", g.cond1},
                     {"cond2", g.cond2},
                     {"verdict", g.verdict},
                     {"bound", g.bound},
                     {"printed_bound", g.printed_bound},
                     {"printed_differs", g.printed_differs}});
  }
  json sweep = json::array();
  for (const auto& s : c.sensitivity) {
    sweep.push_back({{"c_G", s.c_G},
                     {"k1_plus", s.k1_plus},
                     {"L0", opt(s.L0)},
                     {"exists", opt(s.exists)},
                     {"bound", opt(s.bound)},
                     {"failure", s.failure},
                     {"changed", s.changed}});
  }
  return {{"schema", "crcensus-certificate"},
          {"schema_version", c.schema_version},
          {"tool_version", c.tool_version},
          {"config_hash", c.config_hash},
          {"settings", {{"c_G", c.c_G}, {"pd_margin", c.pd_margin}, {"tolerance", c.tolerance}}},
          {"constants", constants},
          {"mc_checks", mc},
          {"points", points},
          {"at_infinity", inf},
          {"l_plus", c.l_plus},
          {"L0", c.L0},
          {"gates", gates},
          {"criterion",
           {{"k", c.criterion_k},
            {"exists", c.criterion_exists},
            {"bound", c.criterion_bound},
            {"printed_bound", c.criterion_printed_bound}}},
          {"sensitivity", sweep}};
}

Certificate certificate_from_json(const json& j) {
  try {
    if (j.at("schema") != "crcensus-certificate") throw Error("not a crcensus certificate");
    Certificate c;
    c.schema_version = j.at("schema_version").get<int>();
    if (c.schema_version != kCertificateSchemaVersion) {
      throw Error("unsupported certificate schema version " + std::to_string(c.schema_version));
    }
    c.tool_version = j.at("tool_version").get<std::string>();
    c.config_hash = j.at("config_hash").get<std::string>();
    const auto& s = j.at("settings");
    c.c_G = s.at("c_G").get<double>();
    c.pd_margin = s.at("pd_margin").get<double>();
    c.tolerance = s.at("tolerance").get<double>();
    for (const auto& e : j.at("constants")) {
      c.constants.push_back({e.at("name").get<std::string>(), opt_from<double>(e.at("beta")), e.at("value").get<double>(),
                             e.at("error").get<double>()});
    }
    for (const auto& e : j.at("mc_checks")) {
      c.mc_checks.push_back({e.at("integral").get<std::string>(), e.at("quadrature").get<double>(),
                             e.at("mc_value").get<double>(), e.at("mc_standard_error").get<double>(),
                             e.at("z_score").get<double>()});
    }
    for (const auto& p : j.at("points")) {
      c.points.push_back({p.at("id").get<std::string>(), p.at("beta").get<double>(), p.at("set").get<std::string>(),
                          p.at("sigma").get<double>(), p.at("m").get<int>(), p.at("K").get<double>()});
    }
    for (const auto& a : j.at("at_infinity")) {
      c.at_infinity.push_back({a.at("kind").get<std::string>(), a.at("members").get<std::vector<std::string>>(),
                               a.at("m_sum").get<int>(), a.at("index").get<int>(), opt_from<double>(a.at("rho"))});
    }
    c.l_plus = j.at("l_plus").get<int>();
    c.L0 = j.at("L0").get<int>();
    for (const auto& g : j.at("gates")) {
      c.gates.push_back({g.at("k").get<int>(), g.at("gate_sum").get<int>(), g.at("cond1").get<bool>(),
                         g.at("cond2").get<bool>(), g.at("verdict").get<bool>(), g.at("bound").get<int>(),
                         g.at("printed_bound").get<int>(), g.at("printed_differs").get<bool>()});
    }
    const auto& crit = j.at("criterion");
    c.criterion_k = crit.at("k").get<int>();
    c.criterion_exists = crit.at("exists").get<bool>();
    c.criterion_bound = crit.at("bound").get<int>();
    c.criterion_printed_bound = crit.at("printed_bound").get<int>();
    for (const auto& r : j.at("sensitivity")) {
      SweepRow row;
      row.c_G = r.at("c_G").get<double>();
      row.k1_plus = r.at("k1_plus").get<std::vector<std::vector<std::string>>>();
      row.L0 = opt_from<int>(r.at("L0"));
      row.exists = opt_from<bool>(r.at("exists"));
      row.bound = opt_from<int>(r.at("bound"));
      row.failure = r.at("failure").get<std::string>();
      row.changed = r.at("changed").get<bool>();
      c.sensitivity.push_back(std::move(row));
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed certificate: ") + e.what());
  }
}

std::string certificate_text(const Certificate& cert) { return certificate_to_json(cert).dump(2) + "\n"; }

void emit_certificate(const Certificate& cert, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << certificate_text(cert);
  if (!out) throw Error("failed writing " + path.string());
}

Certificate parse_certificate(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return certificate_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string emit_report(const Certificate& c) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << c.tool_version << "  config " << c.config_hash.substr(0, 16) << "\n\n";
  out << "constants (tolerance " << c.tolerance << ")\n";
  for (const auto& e : c.constants) {
    out << "  " << std::left << std::setw(12) << e.name << std::right;
    if (e.beta) out << " beta=" << *e.beta;
    out << "  " << e.value << " +- " << std::setprecision(2) << e.error << std::setprecision(12) << "\n";
  }
  if (!c.mc_checks.empty()) {
    out << "\nMonte Carlo cross-checks\n";
    for (const auto& m : c.mc_checks) {
      out << "  " << m.integral << "  quadrature " << m.quadrature << "  mc " << m.mc_value << " +- "
          << std::setprecision(3) << m.mc_standard_error << "  z = " << m.z_score << std::setprecision(12) << "\n";
    }
  }
  out << "\ncritical points\n";
  for (const auto& p : c.points) {
    out << "  " << p.id << "  beta=" << p.beta << "  K=" << p.k_value << "  sigma=" << p.sigma << "  m=" << p.m << "  "
        << p.set << "\n";
  }
  out << "\ncritical points at infinity (c_G = " << c.c_G << ", pd_margin = " << c.pd_margin << ")\n";
  if (c.at_infinity.empty()) out << "  none\n";
  for (const auto& a : c.at_infinity) {
    out << "  " << a.kind << " {";
    for (std::size_t i = 0; i < a.members.size(); ++i) out << (i ? ", " : "") << a.members[i];
    out << "}  m_sum=" << a.m_sum << "  index=" << a.index;
    if (a.rho) out << "  rho=" << *a.rho;
    out << "\n";
  }
  out << "\nl+ = " << c.l_plus << ", L0 = " << c.L0 << "\n\n";
  out << "   k  gate-sum  cond1  cond2  verdict  bound  printed\n";
  for (const auto& g : c.gates) {
    out << std::setw(4) << g.k << std::setw(10) << g.gate_sum << std::setw(7) << (g.cond1 ? "yes" : "no") << std::setw(7)
        << (g.cond2 ? "yes" : "no") << std::setw(9) << (g.verdict ? "yes" : "no") << std::setw(7) << g.bound
        << std::setw(9) << g.printed_bound << (g.printed_differs ? "  * printed form differs" : "") << "\n";
  }
  out << "\nat k = L0 + 1 = " << c.criterion_k << ": solution " << (c.criterion_exists ? "exists" : "not guaranteed")
      << ", at least " << c.criterion_bound << " (printed form: " << c.criterion_printed_bound << ")\n";
  if (!c.sensitivity.empty()) {
    out << "\nc_G sensitivity\n";
    for (const auto& s : c.sensitivity) {
      out << "  c_G=" << s.c_G << "  |K1+|=" << s.k1_plus.size();
      if (s.failure.empty()) {
        out << "  L0=" << *s.L0 << "  exists=" << (*s.exists ? "yes" : "no") << "  bound=" << *s.bound;
      } else {
        out << "  " << s.failure;
      }
      out << (s.changed ? "  * changed" : "") << "\n";
    }
  }
  out << "\nnotes\n"
      << "  Green kernel G = c_G / |1 - <zeta, conj eta>|; the normalization c_G is a free input.\n"
      << "  sigma = b1 + b2 + kappa'(beta) b0; K1 and K2 require sigma < 0, Gamma = -sigma.\n"
      << "  m counts the negative coefficients among b1, b2, b0.\n"
      << "  'bound' uses |1 - sum (-1)^index| over indices <= k - 1; 'printed' evaluates the printed\n"
      << "  expression literally and is reported for comparison only.\n";
  return out.str();
}

std::string config_hash(const CensusConfig& config) {
  const std::string text = config_to_json(config).dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

}  // namespace crcensus::report
