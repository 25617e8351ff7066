#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tdd/config.hpp"
#include "tdd/forward_pilot.hpp"
#include "tdd/link.hpp"
#include "tdd/rng.hpp"
#include "tdd/selection.hpp"

namespace tdd {

struct ChiStats {
  double mean = 0.0;
  double variance = 0.0;
  std::size_t trials = 0;
};

struct EtaStats {
  double mean = 0.0;
  double variance = 0.0;
  int M = 0, K = 0, N = 0;
};

struct RateReport {
  std::vector<double> per_user_rate;  // unweighted bits/symbol, selection probability included
  double weighted_sum = 0.0;          // R_sigma
  double net = 0.0;
  int tau_r_used = 0;
  int tau_f_used = 0;
  int N_used = 0;
  std::string scheme;
  double half_width = 0.0;  // 95% Monte Carlo half-width of `net`
};

/// chi of one Monte Carlo draw and the users it served.
struct ChiSample {
  double chi = 0.0;
  std::vector<int> users;
};

/// Per-draw chi values under a selection rule and precoder parameters p.
/// Users with p_k == 0 are dropped from every selection.
std::vector<ChiSample> sample_chi(const SystemConfig& cfg, const SelectionRule& rule,
                                  const std::vector<double>& p, int N, std::size_t trials,
                                  const RngStream& rng);

ChiStats summarize_chi(const std::vector<ChiSample>& samples, std::size_t begin, std::size_t end);
SelectionStats summarize_selection(const std::vector<ChiSample>& samples, int K,
                                   std::size_t begin, std::size_t end);

ChiStats estimate_chi_stats(const SystemConfig& cfg, const SelectionRule& rule,
                            const std::vector<double>& p, int N, std::size_t trials,
                            const RngStream& rng);

/// eta = (Tr[(U U^dagger)^{-1}])^{-1/2}, U the N largest-norm rows of a K x M CN(0,1) matrix.
EtaStats estimate_eta_stats(int M, int K, int N, std::size_t trials, const RngStream& rng);

/// R_sigma = sum_k gamma_k w_k log2(1 + rho_f p E^2[chi] / (1 + rho_f (err_var + p var{chi}))).
RateReport rate_reverse_only(const SystemConfig& cfg, const std::vector<double>& p,
                             const ChiStats& chi, const std::vector<double>& gamma);

/// Homogeneous top-N selection rate from eta statistics. Throws ConfigError
/// unless SNRs are equal and weights are one.
RateReport rate_homogeneous(const SystemConfig& cfg, int N, const EtaStats& eta);

/// ((T - tau_r - tau_f - comp_delay)/T) R_sigma - 1{N < K} sum(w)/T, floored at 0.
double net_rate(const SystemConfig& cfg, double R_sigma, int tau_r, int tau_f, int N);

struct GenieBound {
  std::vector<double> per_user;  // unweighted, zero for unselected users
  double sum = 0.0;              // weighted
};

/// Rate with the effective channel known at the users:
/// sum_j w_j log2(1 + rho_j |h_j a_j|^2 / (1 + sum_{l != j} rho_j |h_j a_l|^2)).
GenieBound genie_upper_bound(const ComplexMatrix& H, const PrecodedLink& link,
                             const SystemConfig& cfg);

/// Achievable rate with tau_f forward pilots, each user conditioning on its own
/// pilot reception. Outer Monte Carlo over channels and pilot noise.
RateReport rate_forward_pilots(const SystemConfig& cfg, const PrecoderFn& precoder, int tau_f,
                               std::size_t trials_outer, std::size_t posterior_samples,
                               const RngStream& rng);

/// Average of genie_upper_bound over draws with the precoder applied to each estimate.
RateReport scheme_upper_bound(const SystemConfig& cfg, const PrecoderFn& precoder,
                              std::size_t trials, const RngStream& rng);

}  // namespace tdd
