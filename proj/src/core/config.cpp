#include "tdd/config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tdd {

double SystemConfig::err_var(int k) const {
  return 1.0 / (1.0 + rho_r.at(k) * tau_r);
}

// 1 - err_var keeps est_var + err_var == 1 exactly in floating point.
double SystemConfig::est_var(int k) const { return 1.0 - err_var(k); }

std::vector<double> SystemConfig::est_vars() const {
  std::vector<double> v(K);
  for (int k = 0; k < K; ++k) v[k] = est_var(k);
  return v;
}

std::vector<double> SystemConfig::err_vars() const {
  std::vector<double> v(K);
  for (int k = 0; k < K; ++k) v[k] = err_var(k);
  return v;
}

bool SystemConfig::is_homogeneous() const {
  auto all_equal = [](const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
  };
  return all_equal(rho_f) && all_equal(rho_r) &&
         std::all_of(w.begin(), w.end(), [](double x) { return x == 1.0; });
}

double SystemConfig::weight_sum() const { return std::accumulate(w.begin(), w.end(), 0.0); }

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid config: " + what);
}

bool all_positive_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; });
}

}  // namespace

SystemConfig validate_config(SystemConfig cfg) {
  require(cfg.M >= 1, "M >= 1");
  require(cfg.K >= 1, "K >= 1");
  require(cfg.T >= 1, "T >= 1");
  require(cfg.tau_f >= 0, "tau_f >= 0");
  require(cfg.comp_delay >= 0, "comp_delay >= 0");
  require(cfg.K <= cfg.tau_r, "K <= tau_r (orthogonal reverse pilots)");
  require(cfg.tau_r + cfg.tau_f + cfg.comp_delay <= cfg.T - 1,
          "tau_r + tau_f + comp_delay <= T - 1 (at least one data symbol)");
  require(static_cast<int>(cfg.rho_f.size()) == cfg.K, "rho_f has K entries");
  require(static_cast<int>(cfg.rho_r.size()) == cfg.K, "rho_r has K entries");
  require(static_cast<int>(cfg.w.size()) == cfg.K, "weights have K entries");
  require(all_positive_finite(cfg.rho_f), "rho_f > 0");
  require(all_positive_finite(cfg.rho_r), "rho_r > 0");
  require(all_positive_finite(cfg.w), "weights > 0");
  return cfg;
}

SystemConfig make_homogeneous(int M, int K, int T, int tau_r, double rho_f, double rho_r,
                              int tau_f) {
  SystemConfig cfg;
  cfg.M = M;
  cfg.K = K;
  cfg.T = T;
  cfg.tau_r = tau_r;
  cfg.tau_f = tau_f;
  cfg.rho_f.assign(K, rho_f);
  cfg.rho_r.assign(K, rho_r);
  cfg.w.assign(K, 1.0);
  return cfg;
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace tdd
