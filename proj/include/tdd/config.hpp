#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tdd {

/// Raised when a SystemConfig (or a scenario built from one) violates a constraint.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Long-term parameters of one TDD downlink cell.
///
/// SNRs are linear power ratios. Forward/reverse SNRs and weights carry one
/// entry per user. A coherence interval of T symbols is split into tau_r
/// reverse pilots, comp_delay computation symbols, tau_f forward pilots and
/// the remaining data symbols.
struct SystemConfig {
  int M = 1;  // base-station antennas
  int K = 1;  // users
  int T = 2;  // coherence interval (symbols)
  int tau_r = 1;
  int tau_f = 0;
  std::vector<double> rho_f;
  std::vector<double> rho_r;
  std::vector<double> w;
  int comp_delay = 1;

  /// Variance of each entry in row k of the LMMSE estimate.
  [[nodiscard]] double est_var(int k) const;
  /// Variance of each entry in row k of the estimation error.
  [[nodiscard]] double err_var(int k) const;
  [[nodiscard]] std::vector<double> est_vars() const;
  [[nodiscard]] std::vector<double> err_vars() const;

  /// Symbols left for data after pilots and computation.
  [[nodiscard]] int data_symbols() const { return T - tau_r - tau_f - comp_delay; }

  /// Equal SNRs across users and unit weights.
  [[nodiscard]] bool is_homogeneous() const;

  [[nodiscard]] double weight_sum() const;

  bool operator==(const SystemConfig&) const = default;
};

/// Returns cfg unchanged if every invariant holds, otherwise throws ConfigError
/// naming the first violated constraint.
SystemConfig validate_config(SystemConfig cfg);

/// Homogeneous config with the same SNRs for every user and unit weights.
SystemConfig make_homogeneous(int M, int K, int T, int tau_r, double rho_f,
                              double rho_r, int tau_f = 0);

double db_to_linear(double x_db);
double linear_to_db(double x);

}  // namespace tdd
