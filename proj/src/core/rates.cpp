#include "tdd/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tdd/gzf.hpp"
#include "tdd/parallel.hpp"

namespace tdd {

namespace {

constexpr double kZ95 = 1.959963984540054;

double half_width_of(const std::vector<double>& values) {
  const auto n = values.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return kZ95 * std::sqrt(ss / (n - 1) / n);
}

Eigen::MatrixXcd rows_of(const Eigen::MatrixXcd& H, const std::vector<int>& idx) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(idx.size()), H.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = H.row(idx[i]);
  return out;
}

}  // namespace

std::vector<ChiSample> sample_chi(const SystemConfig& cfg, const SelectionRule& rule,
                                  const std::vector<double>& p, int N, std::size_t trials,
                                  const RngStream& rng) {
  if (trials < 1) throw std::invalid_argument("trials >= 1 required");
  std::vector<ChiSample> out(trials);
  parallel_for(trials, [&](std::size_t t) {
    RngStream stream = rng.fork(t);
    const EstimateDraw d = draw_estimate_direct(cfg, stream);
    Selection sel = apply_rule(rule, d.estimate.H_hat, cfg, N);
    std::erase_if(sel.indices, [&](int k) { return !(p[k] > 0.0); });
    std::vector<double> p_s;
    for (int k : sel.indices) p_s.push_back(p[k]);
    Eigen::MatrixXcd H_DS = rows_of(d.estimate.H_hat, sel.indices);
    for (Eigen::Index i = 0; i < H_DS.rows(); ++i) H_DS.row(i) /= std::sqrt(p_s[i]);
    out[t].chi = compute_chi(H_DS);
    out[t].users = std::move(sel.indices);
  });
  return out;
}

ChiStats summarize_chi(const std::vector<ChiSample>& samples, std::size_t begin,
                       std::size_t end) {
  ChiStats s;
  s.trials = end - begin;
  if (s.trials == 0) return s;
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) sum += samples[i].chi;
  s.mean = sum / s.trials;
  double ss = 0.0;
  for (std::size_t i = begin; i < end; ++i) ss += (samples[i].chi - s.mean) * (samples[i].chi - s.mean);
  s.variance = s.trials > 1 ? ss / (s.trials - 1) : 0.0;
  return s;
}

SelectionStats summarize_selection(const std::vector<ChiSample>& samples, int K,
                                   std::size_t begin, std::size_t end) {
  SelectionStats s;
  s.trials = end - begin;
  s.gamma.assign(K, 0.0);
  for (std::size_t i = begin; i < end; ++i)
    for (int k : samples[i].users) s.gamma[k] += 1.0;
  if (s.trials > 0)
    for (double& g : s.gamma) g /= static_cast<double>(s.trials);
  return s;
}

ChiStats estimate_chi_stats(const SystemConfig& cfg, const SelectionRule& rule,
                            const std::vector<double>& p, int N, std::size_t trials,
                            const RngStream& rng) {
  const auto samples = sample_chi(cfg, rule, p, N, trials, rng);
  return summarize_chi(samples, 0, samples.size());
}

EtaStats estimate_eta_stats(int M, int K, int N, std::size_t trials, const RngStream& rng) {
  if (N < 1 || N > K || N > M) throw std::invalid_argument("eta needs 1 <= N <= min(K, M)");
  if (trials < 1) throw std::invalid_argument("trials >= 1 required");
  std::vector<double> eta(trials);
  parallel_for(trials, [&](std::size_t t) {
    RngStream stream = rng.fork(t);
    const Eigen::MatrixXcd Z = stream.cn_matrix(K, M);
    const Selection sel = select_top_norm(Z, N);
    eta[t] = compute_chi(rows_of(Z, sel.indices));
  });
  EtaStats s;
  s.M = M;
  s.K = K;
  s.N = N;
  s.mean = std::accumulate(eta.begin(), eta.end(), 0.0) / trials;
  double ss = 0.0;
  for (double e : eta) ss += (e - s.mean) * (e - s.mean);
  s.variance = trials > 1 ? ss / (trials - 1) : 0.0;
  return s;
}

RateReport rate_reverse_only(const SystemConfig& cfg, const std::vector<double>& p,
                             const ChiStats& chi, const std::vector<double>& gamma) {
  RateReport r;
  r.per_user_rate.assign(cfg.K, 0.0);
  r.tau_r_used = cfg.tau_r;
  r.tau_f_used = 0;
  const double m2 = chi.mean * chi.mean;
  for (int k = 0; k < cfg.K; ++k) {
    if (!(p[k] > 0.0) || gamma[k] == 0.0) continue;
    const double rho = cfg.rho_f[k];
    const double sinr = rho * p[k] * m2 / (1.0 + rho * (cfg.err_var(k) + p[k] * chi.variance));
    r.per_user_rate[k] = gamma[k] * std::log2(1.0 + sinr);
    r.weighted_sum += cfg.w[k] * r.per_user_rate[k];
  }
  r.N_used = static_cast<int>(std::lround(std::accumulate(gamma.begin(), gamma.end(), 0.0)));
  // Only a random selection costs signaling; users that are never served do not.
  const bool random_selection =
      std::any_of(gamma.begin(), gamma.end(), [](double g) { return g > 0.0 && g < 1.0; });
  r.net = net_rate(cfg, r.weighted_sum, cfg.tau_r, 0, random_selection ? r.N_used : cfg.K);
  return r;
}

RateReport rate_homogeneous(const SystemConfig& cfg, int N, const EtaStats& eta) {
  if (!cfg.is_homogeneous())
    throw ConfigError("rate_homogeneous needs equal SNRs and unit weights");
  const double rho_f = cfg.rho_f[0];
  const double est = cfg.est_var(0);
  const double err = cfg.err_var(0);
  const double sinr =
      rho_f * est * eta.mean * eta.mean / (1.0 + rho_f * (err + est * eta.variance));
  RateReport r;
  r.per_user_rate.assign(cfg.K, static_cast<double>(N) / cfg.K * std::log2(1.0 + sinr));
  r.weighted_sum = N * std::log2(1.0 + sinr);
  r.tau_r_used = cfg.tau_r;
  r.N_used = N;
  r.net = net_rate(cfg, r.weighted_sum, cfg.tau_r, 0, N);
  return r;
}

double net_rate(const SystemConfig& cfg, double R_sigma, int tau_r, int tau_f, int N) {
  const double data = static_cast<double>(cfg.T - tau_r - tau_f - cfg.comp_delay);
  if (data <= 0.0) return 0.0;
  double net = data / cfg.T * R_sigma;
  if (N < cfg.K) net -= cfg.weight_sum() / cfg.T;
  return std::max(0.0, net);
}

GenieBound genie_upper_bound(const ComplexMatrix& H, const PrecodedLink& link,
                             const SystemConfig& cfg) {
  GenieBound out;
  out.per_user.assign(cfg.K, 0.0);
  for (std::size_t n = 0; n < link.users.size(); ++n) {
    const int k = link.users[n];
    const Eigen::RowVectorXcd g = effective_row(H, link, cfg, k);
    const double own = std::norm(g(static_cast<Eigen::Index>(n)));
    const double interference = std::max(0.0, g.squaredNorm() - own);
    out.per_user[k] = std::log2(1.0 + own / (1.0 + interference));
    out.sum += cfg.w[k] * out.per_user[k];
  }
  return out;
}

RateReport rate_forward_pilots(const SystemConfig& cfg, const PrecoderFn& precoder, int tau_f,
                               std::size_t trials_outer, std::size_t posterior_samples,
                               const RngStream& rng) {
  if (trials_outer < 1) throw std::invalid_argument("trials_outer >= 1 required");
  const PosteriorBank bank = build_posterior_bank(cfg, precoder, tau_f, posterior_samples, rng.fork(0));
  const RngStream outer = rng.fork(1);

  std::vector<std::vector<double>> per_trial(trials_outer);
  std::vector<int> columns(trials_outer, 0);
  parallel_for(trials_outer, [&](std::size_t t) {
    for (int attempt = 0;; ++attempt) {
      RngStream stream = outer.fork(t).fork(static_cast<std::uint64_t>(attempt));
      const EstimateDraw ed = draw_estimate_direct(cfg, stream);
      const PrecodedLink link = precoder(ed.estimate, cfg, stream);
      const PilotPattern pattern = build_pilot_pattern(tau_f, static_cast<int>(link.A.cols()));
      const PilotObservation obs = receive_pilots(ed.channel.H, link, pattern, cfg, stream);
      try {
        std::vector<double> rates(cfg.K, 0.0);
        for (int k : link.users) {
          const PosteriorGainStats s = posterior_gain_stats(bank.users[k], obs.x.row(k));
          rates[k] = std::log2(1.0 + std::norm(s.mean_gain) / (1.0 + s.interference + s.var_gain));
        }
        per_trial[t] = std::move(rates);
        columns[t] = static_cast<int>(link.A.cols());
        return;
      } catch (const DegeneratePosteriorError&) {
        if (attempt >= 3) throw;
      }
    }
  });

  RateReport r;
  r.per_user_rate.assign(cfg.K, 0.0);
  r.tau_r_used = cfg.tau_r;
  r.tau_f_used = tau_f;
  r.N_used = *std::max_element(columns.begin(), columns.end());
  std::vector<double> weighted(trials_outer, 0.0);
  for (std::size_t t = 0; t < trials_outer; ++t)
    for (int k = 0; k < cfg.K; ++k) {
      r.per_user_rate[k] += per_trial[t][k] / trials_outer;
      weighted[t] += cfg.w[k] * per_trial[t][k];
    }
  for (int k = 0; k < cfg.K; ++k) r.weighted_sum += cfg.w[k] * r.per_user_rate[k];
  r.net = net_rate(cfg, r.weighted_sum, cfg.tau_r, tau_f, r.N_used);
  r.half_width = half_width_of(weighted) * std::max(0, cfg.T - cfg.tau_r - tau_f - cfg.comp_delay) / cfg.T;
  return r;
}

RateReport scheme_upper_bound(const SystemConfig& cfg, const PrecoderFn& precoder,
                              std::size_t trials, const RngStream& rng) {
  if (trials < 1) throw std::invalid_argument("trials >= 1 required");
  std::vector<GenieBound> bounds(trials);
  std::vector<int> columns(trials, 0);
  parallel_for(trials, [&](std::size_t t) {
    RngStream stream = rng.fork(t);
    const EstimateDraw ed = draw_estimate_direct(cfg, stream);
    const PrecodedLink link = precoder(ed.estimate, cfg, stream);
    bounds[t] = genie_upper_bound(ed.channel.H, link, cfg);
    columns[t] = static_cast<int>(link.A.cols());
  });
  RateReport r;
  r.per_user_rate.assign(cfg.K, 0.0);
  r.tau_r_used = cfg.tau_r;
  r.tau_f_used = 0;
  r.N_used = *std::max_element(columns.begin(), columns.end());
  std::vector<double> sums(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    for (int k = 0; k < cfg.K; ++k) r.per_user_rate[k] += bounds[t].per_user[k] / trials;
    sums[t] = bounds[t].sum;
  }
  for (int k = 0; k < cfg.K; ++k) r.weighted_sum += cfg.w[k] * r.per_user_rate[k];
  r.net = net_rate(cfg, r.weighted_sum, cfg.tau_r, 0, r.N_used);
  r.half_width = half_width_of(sums) * std::max(0, cfg.T - cfg.tau_r - cfg.comp_delay) / cfg.T;
  return r;
}

}  // namespace tdd
