#include "pdrwm/experiment/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "pdrwm/errors.hpp"

namespace pdrwm::experiment {
namespace {

struct ScenarioInfo {
  Scenario scenario;
  const char* name;
  const char* summary;
};

const ScenarioInfo kScenarios[] = {
    {Scenario::Figure1, "figure1",
     "per-proposal alpha rows under e^{-|x|} with power_field(4), x in {5,10,20,40}"},
    {Scenario::Figure2Data, "figure2_data",
     "ridge density: proposal acceptance for spherical vs position-dependent covariance"},
    {Scenario::Figure3Data, "figure3_data", "rectangle density levels and a Q_P trajectory"},
    {Scenario::Table1Grid, "table1_grid",
     "3x3 tail/growth classification from spectral-gap scans and drift trends"},
    {Scenario::Lemma2Drift, "lemma2_drift",
     "drift ratio, exponential tails with sub-quadratic covariance growth"},
    {Scenario::Lemma3Drift, "lemma3_drift",
     "drift ratio, polynomial tails with quadratic covariance growth, small and large h"},
    {Scenario::Lemma4Probe, "lemma4_probe",
     "acceptance-set mass under super-quadratic covariance growth"},
    {Scenario::Lemma6Exact, "lemma6_exact",
     "exact circle-proposal rejection on the rectangle density vs bound and Monte Carlo"},
    {Scenario::Lemma7Sweep, "lemma7_sweep",
     "ellipse hemisphere-overlap sweep and Q_P return chain"},
    {Scenario::EsjdScan, "esjd_scan", "ESJD over power_field exponents with tuned step size"},
    {Scenario::OracleScan, "oracle_scan", "discretized-chain spectral gap over growing domains"},
    {Scenario::Custom, "custom", "single chain from an explicit target/field/h/start"},
};

const std::set<std::string> kTopKeys = {
    "scenario", "target",   "field",   "lyapunov", "h",        "h_values", "seed",
    "grid",     "start",    "n_samples", "n_steps", "epsilon", "L_values", "delta",
    "b_values", "output_dir"};

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                const std::string& prefix) {
  if (!node.IsMap()) throw ConfigError("config key '" + prefix + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key))
      throw ConfigError("unknown config key '" + (prefix.empty() ? key : prefix + "." + key) + "'");
  }
}

template <class T>
T get(const YAML::Node& node, const std::string& key, const std::string& path, T fallback) {
  const YAML::Node child = node[key];
  if (!child) return fallback;
  try {
    return child.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config key '" + path + "' has the wrong type");
  }
}

double positive(double value, const std::string& key) {
  if (!(value > 0) || !std::isfinite(value))
    throw ConfigError("config key '" + key + "' must be positive and finite");
  return value;
}

std::string canonical(const ExperimentConfig& c) {
  std::ostringstream out;
  const auto list = [&](const char* name, const std::vector<double>& v) {
    out << name << "=[";
    for (double x : v) out << format_double(x) << ';';
    out << "]|";
  };
  out << "scenario=" << to_string(c.scenario) << '|' << c.target.describe() << '|'
      << c.field.describe() << "|lyapunov=" << c.lyapunov.kind << ',' << format_double(c.lyapunov.s)
      << ',' << format_double(c.lyapunov.beta) << "|h=" << (c.h ? format_double(*c.h) : "") << "|seed=" << c.seed
      << "|n_samples=" << (c.n_samples ? std::to_string(*c.n_samples) : "") << "|n_steps=" << (c.n_steps ? std::to_string(*c.n_steps) : "")
      << "|epsilon=" << format_double(c.epsilon)
      << "|delta=" << (c.delta ? format_double(*c.delta) : "") << '|';
  list("h_values", c.h_values);
  list("grid", c.grid);
  list("start", c.start);
  list("L_values", c.L_values);
  list("b_values", c.b_values);
  return out.str();
}

}  // namespace

const std::vector<Scenario>& all_scenarios() {
  static const std::vector<Scenario> all = [] {
    std::vector<Scenario> v;
    for (const auto& s : kScenarios) v.push_back(s.scenario);
    return v;
  }();
  return all;
}

std::string to_string(Scenario scenario) {
  for (const auto& s : kScenarios)
    if (s.scenario == scenario) return s.name;
  return "unknown";
}

Scenario parse_scenario(const std::string& name) {
  for (const auto& s : kScenarios)
    if (name == s.name) return s.scenario;
  throw ConfigError("config key 'scenario': unknown scenario '" + name + "'");
}

std::string summary(Scenario scenario) {
  for (const auto& s : kScenarios)
    if (s.scenario == scenario) return s.summary;
  return "";
}

TargetDensity TargetSpec::build() const {
  if (family == "exponential") return make_exponential_tail(a);
  if (family == "subexponential") return make_subexponential_tail(a, beta);
  if (family == "polynomial") return make_polynomial_tail(p);
  if (family == "normal") return make_standard_normal();
  if (family == "ridge") return make_ridge_2d();
  if (family == "rectangle") return make_rectangle();
  throw ConfigError("config key 'target.family': unknown family '" + family + "'");
}

std::string TargetSpec::describe() const {
  return "target=" + family + "(a=" + format_double(a) + ",beta=" + format_double(beta) +
         ",p=" + format_double(p) + ")";
}

CovarianceField FieldSpec::build(const TargetDensity& target) const {
  const int dim = target.dim();
  if (family == "constant") return constant_field(sigma * Matrix::Identity(dim, dim));
  if (family == "power") return power_field(b, dim);
  if (family == "quadratic") {
    if (dim != 1) throw ConfigError("config key 'field.family': quadratic needs a 1D target");
    return quadratic_field(offset);
  }
  if (family == "tempered_langevin") return tempered_langevin_field(target, cap);
  throw ConfigError("config key 'field.family': unknown family '" + family + "'");
}

std::string FieldSpec::describe() const {
  return "field=" + family + "(sigma=" + format_double(sigma) + ",b=" + format_double(b) +
         ",offset=" + format_double(offset) + ",cap=" + format_double(cap) + ")";
}

LyapunovFunction LyapunovSpec::build() const {
  if (kind == "exp_abs") return LyapunovFunction(lyapunov::ExpAbs{s});
  if (kind == "exp_abs_pow") return LyapunovFunction(lyapunov::ExpAbsPow{s, beta});
  if (kind == "abs_pow") return LyapunovFunction(lyapunov::AbsPow{s});
  if (kind == "rectangle") return LyapunovFunction(lyapunov::RectangleV{});
  throw ConfigError("config key 'lyapunov.kind': unknown kind '" + kind + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root || root.IsNull()) throw ConfigError("config is empty");
  check_keys(root, kTopKeys, "");
  if (!root["scenario"]) throw ConfigError("config key 'scenario' is required");

  ExperimentConfig c;
  c.scenario = parse_scenario(get<std::string>(root, "scenario", "scenario", ""));

  if (const YAML::Node t = root["target"]) {
    check_keys(t, {"family", "a", "beta", "p"}, "target");
    c.target.family = get<std::string>(t, "family", "target.family", c.target.family);
    c.target.a = get<double>(t, "a", "target.a", c.target.a);
    c.target.beta = get<double>(t, "beta", "target.beta", c.target.beta);
    c.target.p = get<double>(t, "p", "target.p", c.target.p);
  }
  if (const YAML::Node f = root["field"]) {
    check_keys(f, {"family", "sigma", "b", "offset", "cap"}, "field");
    c.field.family = get<std::string>(f, "family", "field.family", c.field.family);
    c.field.sigma = get<double>(f, "sigma", "field.sigma", c.field.sigma);
    c.field.b = get<double>(f, "b", "field.b", c.field.b);
    c.field.offset = get<double>(f, "offset", "field.offset", c.field.offset);
    c.field.cap = get<double>(f, "cap", "field.cap", c.field.cap);
  }
  if (const YAML::Node v = root["lyapunov"]) {
    check_keys(v, {"kind", "s", "beta"}, "lyapunov");
    c.lyapunov.kind = get<std::string>(v, "kind", "lyapunov.kind", c.lyapunov.kind);
    c.lyapunov.s = get<double>(v, "s", "lyapunov.s", c.lyapunov.s);
    c.lyapunov.beta = get<double>(v, "beta", "lyapunov.beta", c.lyapunov.beta);
  }

  if (root["h"]) c.h = positive(get<double>(root, "h", "h", 0.0), "h");
  c.h_values = get<std::vector<double>>(root, "h_values", "h_values", {});
  for (double h : c.h_values) positive(h, "h_values");
  if (root["seed"]) {
    const auto seed = get<long long>(root, "seed", "seed", 0);
    if (seed < 0) throw ConfigError("config key 'seed' must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  c.grid = get<std::vector<double>>(root, "grid", "grid", {});
  c.start = get<std::vector<double>>(root, "start", "start", {});
  if (root["n_samples"]) {
    const auto n = get<long long>(root, "n_samples", "n_samples", 0);
    if (n < 1000) throw ConfigError("config key 'n_samples' must be >= 1000");
    c.n_samples = static_cast<std::size_t>(n);
  }
  if (root["n_steps"]) {
    const auto n = get<long long>(root, "n_steps", "n_steps", 0);
    if (n < 1) throw ConfigError("config key 'n_steps' must be >= 1");
    c.n_steps = static_cast<std::size_t>(n);
  }
  c.epsilon = get<double>(root, "epsilon", "epsilon", c.epsilon);
  if (!(c.epsilon > 0 && c.epsilon < 1)) throw ConfigError("config key 'epsilon' must lie in (0, 1)");
  c.L_values = get<std::vector<double>>(root, "L_values", "L_values", {});
  for (double L : c.L_values) positive(L, "L_values");
  if (root["delta"]) c.delta = positive(get<double>(root, "delta", "delta", 0.0), "delta");
  c.b_values = get<std::vector<double>>(root, "b_values", "b_values", {});
  for (double b : c.b_values)
    if (!(b >= 0)) throw ConfigError("config key 'b_values' entries must be >= 0");
  c.output_dir = get<std::string>(root, "output_dir", "output_dir", c.output_dir.string());

  if (c.scenario == Scenario::Custom && !c.n_steps)
    throw ConfigError("config key 'n_steps' is required for the custom scenario");

  // Resolve the specs now so that errors surface before any file is written.
  try {
    const TargetDensity target = c.target.build();
    if (c.scenario == Scenario::Custom || c.scenario == Scenario::OracleScan) {
      (void)c.field.build(target);
      if (!c.start.empty() && static_cast<int>(c.start.size()) != target.dim())
        throw ConfigError("config key 'start' does not match the target dimension");
    }
    (void)c.lyapunov.build();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config specs could not be resolved: ") + e.what());
  }

  c.digest = pdrwm::digest(canonical(c));
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return config.output_dir;
}

}  // namespace pdrwm::experiment
