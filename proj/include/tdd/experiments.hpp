#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tdd/config.hpp"
#include "tdd/schemes.hpp"

namespace tdd {

/// Scenario parameters as written in a config file: SNRs in dB, scalars
/// broadcast to every user. An empty tau_r means "optimize the training length".
struct ScenarioParams {
  int M = 16;
  int K = 8;
  int T = 30;
  std::optional<int> tau_r;
  int tau_f = 0;
  std::vector<double> rho_f_db{0.0};
  std::vector<double> rho_r_db;             // used when no offset is set
  std::optional<double> rho_r_offset_db{-10.0};  // rho_r = rho_f + offset (dB)
  std::vector<double> weights;              // empty: unit weights
  int comp_delay = 1;

  bool operator==(const ScenarioParams&) const = default;
};

/// Expands scalars, converts dB and validates. tau_r defaults to K when unset.
SystemConfig build_config(const ScenarioParams& params);

enum class SweepAxis { None, SnrFDb, K, M, TauR };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& text);

struct ScenarioSpec {
  ScenarioParams params;
  std::vector<Scheme> schemes{Scheme{}};
  SweepAxis axis = SweepAxis::None;
  std::vector<double> sweep_values;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  bool upper_bound = false;
};

/// Monte Carlo sizes derived from the headline trial count.
MonteCarloPlan plan_for_trials(std::size_t trials);

struct ResultRow {
  std::string scheme;
  std::optional<double> sweep;
  double net_rate = 0.0;
  double weighted_sum_rate = 0.0;
  std::optional<double> upper_bound;
  int tau_r = 0;
  int n_selected = 0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double half_width = 0.0;

  bool operator==(const ResultRow&) const = default;
};

/// Throws ConfigError when the spec is inconsistent (empty sweep, values that
/// break config invariants, unknown axis for the given parameters).
void validate_spec(const ScenarioSpec& spec);

/// One row per (scheme, sweep point). Optimizes N for selecting schemes and
/// tau_r when params.tau_r is unset.
std::vector<ResultRow> run_scenario(const ScenarioSpec& spec);

/// All twelve scheme rows at forward SNRs 5..30 dB (M = K = 8, tau_r = 8,
/// T = 30, reverse 10 dB below forward).
std::vector<ResultRow> reproduce_table1(std::uint64_t seed, std::size_t trials);

/// Labels of the scheme comparison rows in display order.
std::vector<std::string> table1_labels();

/// Optimal tau_r and net rate per forward SNR (reverse = forward + offset).
std::vector<ResultRow> training_sweep(const ScenarioParams& base, const Scheme& scheme,
                                      const std::vector<double>& snr_f_db, std::uint64_t seed,
                                      std::size_t trials);

/// 12 users with forward SNRs {0,0,0,5,5,5,5,5,5,10,10,10} dB, reverse 10 dB
/// lower, unit weights, T = 30, training length optimized.
ScenarioParams heterogeneous_preset(int M);

/// CSV with header scheme,sweep,net_rate,weighted_sum_rate,upper_bound,tau_r,
/// n_selected,seed,trials,half_width. Reals use 6 significant digits; missing
/// optional values are empty fields.
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_csv(std::istream& in);
std::vector<ResultRow> read_csv_file(const std::string& path);

/// YAML (or JSON) scenario file. Recognized keys: M, K, T, tau_r (integer or
/// "opt"), tau_f, rho_f_db, rho_r_db (scalar, list or "offset:<d>"), weights,
/// comp_delay, seed, trials, scheme (string or list), sweep {axis, values},
/// upper_bound.
ScenarioSpec load_scenario(const std::string& path);
ScenarioSpec parse_scenario(const std::string& text);
/// Serializes a spec so that parse_scenario returns an equal spec.
std::string dump_scenario(const ScenarioSpec& spec);

}  // namespace tdd
