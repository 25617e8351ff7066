#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "tdd/config.hpp"
#include "tdd/gzf.hpp"
#include "tdd/link.hpp"
#include "tdd/rates.hpp"

namespace tdd {

enum class PrecoderKind {
  Zf,      // Scheme-0: p = 1, all users
  GzfOpt,  // Scheme-1: optimized p, all users
  GzfSch,  // Scheme-2: optimized p, weighted-norm selection
  ZfSch,   // p = 1, top-norm selection
  Svh,     // sum-rate fixed point on the estimate treated as exact
  ModSvh,  // fixed point on the estimate-averaged sum rate
};

/// A precoding method plus the number of forward pilots, e.g. "zf-sch:fp1".
struct Scheme {
  PrecoderKind kind = PrecoderKind::Zf;
  int forward_pilots = 0;

  [[nodiscard]] bool selects_users() const;
  [[nodiscard]] bool zero_forcing() const;
  /// "ZF-Sch-FP(1)" style label.
  [[nodiscard]] std::string label() const;
  /// "zf-sch:fp1" style identifier accepted by parse().
  [[nodiscard]] std::string id() const;
  static Scheme parse(const std::string& text);

  bool operator==(const Scheme&) const = default;
};

std::string to_string(PrecoderKind kind);

/// Monte Carlo sizes. Defaults meet the accuracy targets at desk scale.
struct MonteCarloPlan {
  std::size_t stat_trials = 10000;      // chi / eta / gamma statistics
  std::size_t outer_trials = 500;       // forward-pilot rate
  std::size_t posterior_samples = 2000; // joint draws the users condition on
  std::size_t bound_trials = 1000;      // genie bound average
  int svh_L = 50;
  int svh_iterations = 5;
  int restarts = 100;                   // multi-restart bound
  int batches = 10;                     // half-width batches for reverse-only rates
};

/// Precoder for a scheme at selection size N (ignored by non-selecting schemes).
/// `p` holds the parameters used by the GZF schemes (ones or the optimum).
PrecoderFn make_precoder(const Scheme& scheme, const SystemConfig& cfg, int N,
                         const MonteCarloPlan& plan);

/// Precoder parameters a scheme uses: ones for plain ZF, the asymptotic optimum otherwise.
std::vector<double> scheme_parameters(const Scheme& scheme, const SystemConfig& cfg);

/// Net rate of a scheme at fixed (cfg.tau_r, N).
RateReport evaluate_scheme(const SystemConfig& cfg, const Scheme& scheme, int N,
                           const MonteCarloPlan& plan, const RngStream& rng);

/// Genie upper bound of the scheme at fixed N, with reverse-pilot-only overhead.
RateReport evaluate_scheme_bound(const SystemConfig& cfg, const Scheme& scheme, int N,
                                 const MonteCarloPlan& plan, const RngStream& rng);

/// Brute force over N = 1..K (or N = K for non-selecting schemes); ties keep the larger N.
std::pair<int, RateReport> optimize_selection_size(const SystemConfig& cfg, const Scheme& scheme,
                                                   const MonteCarloPlan& plan,
                                                   const RngStream& rng);

/// Largest bound over N (the bound on the best selection size).
std::pair<int, RateReport> best_scheme_bound(const SystemConfig& cfg, const Scheme& scheme,
                                             const MonteCarloPlan& plan, const RngStream& rng);

/// Brute force over tau_r in [K, T - 1 - tau_f - comp_delay], optimizing N at
/// each point. The same random streams are reused for every candidate. Ties
/// keep the shorter training.
std::pair<int, RateReport> optimize_training_length(const SystemConfig& cfg, const Scheme& scheme,
                                                    const MonteCarloPlan& plan,
                                                    const RngStream& rng);

/// Multi-restart bound: per estimate draw, the best Mod-SVH local optimum over
/// `plan.restarts` starts, scored on fresh error samples, averaged over
/// `plan.bound_trials` draws and discounted by the reverse-pilot overhead.
RateReport restart_upper_bound(const SystemConfig& cfg, const MonteCarloPlan& plan,
                               const RngStream& rng);

}  // namespace tdd
