#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tdd/experiments.hpp"
#include "tdd/rng.hpp"

namespace tdd {

namespace {

std::vector<double> broadcast(const std::vector<double>& v, int K, const char* what) {
  if (v.size() == 1) return std::vector<double>(K, v[0]);
  if (static_cast<int>(v.size()) != K)
    throw ConfigError(std::string("invalid config: ") + what + " needs 1 or K entries");
  return v;
}

bool is_integer(double v) { return std::isfinite(v) && v == std::round(v); }

ScenarioParams at_point(ScenarioParams p, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::None:
      break;
    case SweepAxis::SnrFDb:
      if (p.rho_f_db.size() > 1)
        throw ConfigError("invalid config: snr_f_db sweep needs a scalar rho_f_db");
      p.rho_f_db = {value};
      break;
    case SweepAxis::K:
      if (!is_integer(value)) throw ConfigError("invalid config: K sweep values must be integers");
      if (p.rho_f_db.size() > 1 || p.rho_r_db.size() > 1 || p.weights.size() > 1)
        throw ConfigError("invalid config: K sweep needs scalar SNRs and weights");
      p.K = static_cast<int>(value);
      // Fixed training keeps pilots orthogonal by growing with K.
      if (p.tau_r && *p.tau_r < p.K) p.tau_r = p.K;
      break;
    case SweepAxis::M:
      if (!is_integer(value)) throw ConfigError("invalid config: M sweep values must be integers");
      p.M = static_cast<int>(value);
      break;
    case SweepAxis::TauR:
      if (!is_integer(value)) throw ConfigError("invalid config: tau_r sweep values must be integers");
      p.tau_r = static_cast<int>(value);
      break;
  }
  return p;
}

struct PointResult {
  RateReport report;
  std::optional<double> bound;
};

PointResult evaluate_point(const ScenarioParams& params, const Scheme& scheme,
                           const MonteCarloPlan& plan, const RngStream& rng, bool upper_bound) {
  SystemConfig cfg = build_config(params);
  RateReport rep;
  if (params.tau_r) {
    rep = optimize_selection_size(cfg, scheme, plan, rng).second;
  } else {
    auto [tau, r] = optimize_training_length(cfg, scheme, plan, rng);
    cfg.tau_r = tau;
    rep = std::move(r);
  }
  PointResult out{std::move(rep), std::nullopt};
  if (upper_bound) {
    cfg.tau_f = 0;
    out.bound = best_scheme_bound(cfg, scheme, plan, rng).second.net;
  }
  return out;
}

ResultRow make_row(const std::string& label, std::optional<double> sweep, const RateReport& r,
                   std::optional<double> bound, std::uint64_t seed, std::size_t trials) {
  ResultRow row;
  row.scheme = label;
  row.sweep = sweep;
  row.net_rate = r.net;
  row.weighted_sum_rate = r.weighted_sum;
  row.upper_bound = bound;
  row.tau_r = r.tau_r_used;
  row.n_selected = r.N_used;
  row.seed = seed;
  row.trials = trials;
  row.half_width = r.half_width;
  return row;
}

}  // namespace

SystemConfig build_config(const ScenarioParams& params) {
  if (params.K < 1) throw ConfigError("invalid config: K >= 1");
  SystemConfig cfg;
  cfg.M = params.M;
  cfg.K = params.K;
  cfg.T = params.T;
  cfg.tau_r = params.tau_r.value_or(params.K);
  cfg.tau_f = params.tau_f;
  cfg.comp_delay = params.comp_delay;
  const auto f_db = broadcast(params.rho_f_db, params.K, "rho_f_db");
  std::vector<double> r_db;
  if (params.rho_r_offset_db) {
    for (double f : f_db) r_db.push_back(f + *params.rho_r_offset_db);
  } else {
    r_db = broadcast(params.rho_r_db, params.K, "rho_r_db");
  }
  for (int k = 0; k < params.K; ++k) {
    cfg.rho_f.push_back(db_to_linear(f_db[k]));
    cfg.rho_r.push_back(db_to_linear(r_db[k]));
  }
  cfg.w = params.weights.empty() ? std::vector<double>(params.K, 1.0)
                                 : broadcast(params.weights, params.K, "weights");
  return validate_config(cfg);
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None: return "none";
    case SweepAxis::SnrFDb: return "snr_f_db";
    case SweepAxis::K: return "K";
    case SweepAxis::M: return "M";
    case SweepAxis::TauR: return "tau_r";
  }
  return "none";
}

SweepAxis parse_sweep_axis(const std::string& text) {
  for (SweepAxis a : {SweepAxis::None, SweepAxis::SnrFDb, SweepAxis::K, SweepAxis::M, SweepAxis::TauR})
    if (text == to_string(a)) return a;
  throw ConfigError("invalid config: unknown sweep axis '" + text + "'");
}

MonteCarloPlan plan_for_trials(std::size_t trials) {
  if (trials < 1) throw ConfigError("invalid config: trials >= 1");
  MonteCarloPlan plan;
  plan.stat_trials = trials;
  plan.outer_trials = std::max<std::size_t>(20, trials / 20);
  plan.bound_trials = std::max<std::size_t>(20, trials / 10);
  plan.posterior_samples = std::clamp<std::size_t>(trials / 5, 200, 2000);
  return plan;
}

void validate_spec(const ScenarioSpec& spec) {
  if (spec.schemes.empty()) throw ConfigError("invalid config: at least one scheme");
  if (spec.trials < 1) throw ConfigError("invalid config: trials >= 1");
  if (spec.axis != SweepAxis::None && spec.sweep_values.empty())
    throw ConfigError("invalid config: sweep needs at least one value");
  if (spec.axis == SweepAxis::None) {
    build_config(spec.params);
    return;
  }
  for (double v : spec.sweep_values) build_config(at_point(spec.params, spec.axis, v));
}

std::vector<ResultRow> run_scenario(const ScenarioSpec& spec) {
  validate_spec(spec);
  const MonteCarloPlan plan = plan_for_trials(spec.trials);
  // One stream for every point: neighbouring sweep points share their draws.
  const RngStream rng(spec.seed, 0);

  std::vector<std::optional<double>> points;
  if (spec.axis == SweepAxis::None) {
    points.push_back(std::nullopt);
  } else {
    points.assign(spec.sweep_values.begin(), spec.sweep_values.end());
  }

  std::vector<ResultRow> rows;
  for (const Scheme& scheme : spec.schemes) {
    for (const auto& point : points) {
      const ScenarioParams p = point ? at_point(spec.params, spec.axis, *point) : spec.params;
      try {
        const PointResult res = evaluate_point(p, scheme, plan, rng, spec.upper_bound);
        rows.push_back(make_row(scheme.label(), point, res.report, res.bound, spec.seed, spec.trials));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        std::string where = scheme.id();
        if (point) where += " at " + to_string(spec.axis) + "=" + std::to_string(*point);
        throw std::runtime_error(where + ": " + e.what());
      }
    }
  }
  return rows;
}

std::vector<std::string> table1_labels() {
  return {"ZF-FP(0)",     "ZF-UB",     "ZF-Sch-FP(0)",  "ZF-Sch-FP(1)",
          "ZF-Sch-FP(2)", "ZF-Sch-UB", "SVH-FP(1)",     "SVH-FP(2)",
          "SVH-UB",       "Mod-SVH-FP(1)", "Mod-SVH-FP(2)", "Mod-SVH-UB"};
}

std::vector<ResultRow> reproduce_table1(std::uint64_t seed, std::size_t trials) {
  const MonteCarloPlan plan = plan_for_trials(trials);
  const RngStream rng(seed, 0);
  const double snrs[] = {5, 10, 15, 20, 25, 30};

  struct Entry {
    std::string label;
    Scheme scheme;
    bool bound;
  };
  const Scheme zf{PrecoderKind::Zf, 0};
  const Scheme zf_sch{PrecoderKind::ZfSch, 0};
  const Scheme svh{PrecoderKind::Svh, 0};
  const Scheme mod{PrecoderKind::ModSvh, 0};
  auto fp = [](Scheme s, int n) {
    s.forward_pilots = n;
    return s;
  };
  const std::vector<Entry> entries = {
      {"ZF-FP(0)", zf, false},          {"ZF-UB", zf, true},
      {"ZF-Sch-FP(0)", zf_sch, false},  {"ZF-Sch-FP(1)", fp(zf_sch, 1), false},
      {"ZF-Sch-FP(2)", fp(zf_sch, 2), false}, {"ZF-Sch-UB", zf_sch, true},
      {"SVH-FP(1)", fp(svh, 1), false}, {"SVH-FP(2)", fp(svh, 2), false},
      {"SVH-UB", svh, true},            {"Mod-SVH-FP(1)", fp(mod, 1), false},
      {"Mod-SVH-FP(2)", fp(mod, 2), false}, {"Mod-SVH-UB", mod, true},
  };

  std::vector<ResultRow> rows;
  for (const Entry& e : entries) {
    for (double snr : snrs) {
      ScenarioParams p;
      p.M = 8;
      p.K = 8;
      p.T = 30;
      p.tau_r = 8;
      p.rho_f_db = {snr};
      p.rho_r_offset_db = -10.0;
      const SystemConfig cfg = build_config(p);
      const RateReport r = e.bound ? best_scheme_bound(cfg, e.scheme, plan, rng).second
                                   : optimize_selection_size(cfg, e.scheme, plan, rng).second;
      rows.push_back(make_row(e.label, snr, r, std::nullopt, seed, trials));
    }
  }
  return rows;
}

std::vector<ResultRow> training_sweep(const ScenarioParams& base, const Scheme& scheme,
                                      const std::vector<double>& snr_f_db, std::uint64_t seed,
                                      std::size_t trials) {
  ScenarioSpec spec;
  spec.params = base;
  spec.params.tau_r.reset();
  if (!spec.params.rho_r_offset_db) spec.params.rho_r_offset_db = -10.0;
  spec.schemes = {scheme};
  spec.axis = SweepAxis::SnrFDb;
  spec.sweep_values = snr_f_db;
  spec.seed = seed;
  spec.trials = trials;
  return run_scenario(spec);
}

ScenarioParams heterogeneous_preset(int M) {
  ScenarioParams p;
  p.M = M;
  p.K = 12;
  p.T = 30;
  p.tau_r.reset();
  p.rho_f_db = {0, 0, 0, 5, 5, 5, 5, 5, 5, 10, 10, 10};
  p.rho_r_offset_db = -10.0;
  return p;
}

}  // namespace tdd
