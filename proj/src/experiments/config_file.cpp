#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "tdd/experiments.hpp"

namespace tdd {

namespace {

const std::set<std::string> kKnownKeys = {
    "M",         "K",      "T",     "tau_r",  "tau_f",  "rho_f_db",    "rho_r_db",
    "weights",   "comp_delay", "seed", "trials", "scheme", "sweep", "upper_bound"};

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid config: bad value for '" + key + "'");
  }
}

std::vector<double> number_list(const YAML::Node& node, const std::string& key) {
  if (node.IsScalar()) return {scalar<double>(node, key)};
  if (!node.IsSequence() || node.size() == 0)
    throw ConfigError("invalid config: '" + key + "' must be a number or a non-empty list");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(scalar<double>(item, key));
  return out;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + exact(v[i]);
  return s + "]";
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("invalid config: cannot parse: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("invalid config: top level must be a mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kKnownKeys.count(key)) throw ConfigError("invalid config: unknown key '" + key + "'");
  }

  ScenarioSpec spec;
  ScenarioParams& p = spec.params;
  if (root["M"]) p.M = scalar<int>(root["M"], "M");
  if (root["K"]) p.K = scalar<int>(root["K"], "K");
  if (root["T"]) p.T = scalar<int>(root["T"], "T");
  p.tau_r = p.K;
  if (const auto n = root["tau_r"]) {
    if (n.IsScalar() && n.Scalar() == "opt") {
      p.tau_r.reset();
    } else {
      p.tau_r = scalar<int>(n, "tau_r");
    }
  }
  if (root["tau_f"]) p.tau_f = scalar<int>(root["tau_f"], "tau_f");
  if (root["comp_delay"]) p.comp_delay = scalar<int>(root["comp_delay"], "comp_delay");
  if (root["rho_f_db"]) p.rho_f_db = number_list(root["rho_f_db"], "rho_f_db");
  if (const auto n = root["rho_r_db"]) {
    const std::string s = n.IsScalar() ? n.Scalar() : std::string();
    if (s.rfind("offset:", 0) == 0) {
      try {
        std::size_t used = 0;
        p.rho_r_offset_db = std::stod(s.substr(7), &used);
        if (used != s.size() - 7) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ConfigError("invalid config: bad rho_r_db offset '" + s + "'");
      }
    } else {
      p.rho_r_offset_db.reset();
      p.rho_r_db = number_list(n, "rho_r_db");
    }
  }
  if (root["weights"]) p.weights = number_list(root["weights"], "weights");
  if (root["seed"]) spec.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (root["trials"]) spec.trials = scalar<std::size_t>(root["trials"], "trials");
  if (root["upper_bound"]) spec.upper_bound = scalar<bool>(root["upper_bound"], "upper_bound");
  if (const auto n = root["scheme"]) {
    spec.schemes.clear();
    if (n.IsSequence()) {
      for (const auto& s : n) spec.schemes.push_back(Scheme::parse(scalar<std::string>(s, "scheme")));
    } else {
      spec.schemes.push_back(Scheme::parse(scalar<std::string>(n, "scheme")));
    }
    // A bare scheme name takes the file's forward pilot count.
    if (root["tau_f"] && !n.IsSequence() && n.Scalar().find(':') == std::string::npos)
      spec.schemes[0].forward_pilots = p.tau_f;
  }
  if (const auto n = root["sweep"]) {
    if (!n.IsMap() || !n["axis"] || !n["values"])
      throw ConfigError("invalid config: sweep needs 'axis' and 'values'");
    spec.axis = parse_sweep_axis(scalar<std::string>(n["axis"], "sweep.axis"));
    spec.sweep_values = number_list(n["values"], "sweep.values");
  }
  validate_spec(spec);
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("invalid config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const ScenarioSpec& spec) {
  const ScenarioParams& p = spec.params;
  std::ostringstream out;
  out << "M: " << p.M << "\nK: " << p.K << "\nT: " << p.T << "\n";
  out << "tau_r: " << (p.tau_r ? std::to_string(*p.tau_r) : std::string("opt")) << "\n";
  out << "tau_f: " << p.tau_f << "\ncomp_delay: " << p.comp_delay << "\n";
  out << "rho_f_db: " << list(p.rho_f_db) << "\n";
  if (p.rho_r_offset_db) {
    out << "rho_r_db: \"offset:" << exact(*p.rho_r_offset_db) << "\"\n";
  } else {
    out << "rho_r_db: " << list(p.rho_r_db) << "\n";
  }
  if (!p.weights.empty()) out << "weights: " << list(p.weights) << "\n";
  out << "seed: " << spec.seed << "\ntrials: " << spec.trials << "\n";
  out << "upper_bound: " << (spec.upper_bound ? "true" : "false") << "\n";
  out << "scheme: [";
  for (std::size_t i = 0; i < spec.schemes.size(); ++i) out << (i ? ", " : "") << spec.schemes[i].id();
  out << "]\n";
  if (spec.axis != SweepAxis::None)
    out << "sweep:\n  axis: " << to_string(spec.axis) << "\n  values: " << list(spec.sweep_values) << "\n";
  return out.str();
}

}  // namespace tdd
