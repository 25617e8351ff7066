#include "tdd/forward_pilot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tdd/parallel.hpp"

namespace tdd {

PilotPattern build_pilot_pattern(int tau_f, int N) {
  if (tau_f < 0) throw std::invalid_argument("tau_f >= 0 required");
  if (N < 1) throw std::invalid_argument("pilot pattern needs N >= 1");
  PilotPattern out{tau_f, Eigen::MatrixXd::Zero(N, tau_f)};
  const double amp = std::sqrt(static_cast<double>(tau_f));
  for (int n = 0; n < N; ++n)
    if (tau_f > 0) out.Q(n, n % tau_f) = amp;
  return out;
}

PilotObservation receive_pilots(const ComplexMatrix& H, const PrecodedLink& link,
                                const PilotPattern& pattern, const SystemConfig& cfg,
                                RngStream& rng) {
  const auto K = H.rows();
  PilotObservation out{ComplexMatrix(K, pattern.tau_f)};
  for (Eigen::Index k = 0; k < K; ++k) {
    const Eigen::RowVectorXcd g = effective_row(H, link, cfg, static_cast<int>(k));
    out.x.row(k) = g * pattern.Q.cast<std::complex<double>>();
    for (int t = 0; t < pattern.tau_f; ++t) out.x(k, t) += rng.cn();
  }
  return out;
}

std::vector<double> likelihood_weights(const ComplexMatrix& predicted,
                                       const Eigen::RowVectorXcd& observed, double noise_var,
                                       NoiseLaw law) {
  if (!(noise_var > 0.0)) throw std::invalid_argument("noise variance must be positive");
  const auto S = predicted.rows();
  if (S < 1) throw DegeneratePosteriorError("posterior needs at least one sample");
  const double scale = law == NoiseLaw::ComplexCircular ? 1.0 / noise_var : 0.5 / noise_var;

  std::vector<double> logw(S);
  double top = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < S; ++i) {
    logw[i] = -scale * (observed - predicted.row(i)).squaredNorm();
    top = std::max(top, logw[i]);
  }
  if (!std::isfinite(top)) throw DegeneratePosteriorError("all importance weights vanished");
  double total = 0.0;
  for (double& lw : logw) {
    lw = std::exp(lw - top);
    total += lw;
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw DegeneratePosteriorError("all importance weights vanished");
  for (double& lw : logw) lw /= total;
  return logw;
}

std::complex<double> conditional_mean_mc(const Eigen::VectorXcd& values,
                                         const ComplexMatrix& predicted,
                                         const Eigen::RowVectorXcd& observed, double noise_var,
                                         NoiseLaw law) {
  if (values.size() != predicted.rows())
    throw std::invalid_argument("one prediction per sample value required");
  const auto w = likelihood_weights(predicted, observed, noise_var, law);
  std::complex<double> acc = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) acc += w[i] * values(i);
  return acc;
}

namespace {

struct DrawRecord {
  std::vector<int> users;
  std::vector<GainSample> gains;
  std::vector<Eigen::RowVectorXcd> predicted;
};

DrawRecord record_draw(const ComplexMatrix& H, const PrecodedLink& link, const SystemConfig& cfg,
                       int tau_f) {
  const int N = static_cast<int>(link.A.cols());
  const Eigen::MatrixXcd Q = build_pilot_pattern(tau_f, N).Q.cast<std::complex<double>>();
  DrawRecord rec;
  for (int n = 0; n < N; ++n) {
    const int k = link.users[n];
    const Eigen::RowVectorXcd g = effective_row(H, link, cfg, k);
    GainSample s;
    s.own = g(n);
    s.own_power = std::norm(s.own);
    s.interference = std::max(0.0, g.squaredNorm() - s.own_power);
    rec.users.push_back(k);
    rec.gains.push_back(s);
    rec.predicted.push_back(g * Q);
  }
  return rec;
}

PosteriorBank collect(const std::vector<DrawRecord>& records, int K, int tau_f) {
  PosteriorBank bank;
  bank.tau_f = tau_f;
  bank.draws = records.size();
  bank.users.resize(K);
  std::vector<std::size_t> counts(K, 0);
  for (const auto& rec : records)
    for (int k : rec.users) ++counts[k];
  for (int k = 0; k < K; ++k) {
    bank.users[k].samples.reserve(counts[k]);
    bank.users[k].predicted.resize(static_cast<Eigen::Index>(counts[k]), tau_f);
  }
  std::vector<Eigen::Index> fill(K, 0);
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < rec.users.size(); ++i) {
      const int k = rec.users[i];
      bank.users[k].samples.push_back(rec.gains[i]);
      bank.users[k].predicted.row(fill[k]++) = rec.predicted[i];
    }
  }
  return bank;
}

}  // namespace

PosteriorBank build_posterior_bank(const SystemConfig& cfg, const PrecoderFn& precoder,
                                   int tau_f, std::size_t draws, const RngStream& rng) {
  std::vector<DrawRecord> records(draws);
  parallel_for(draws, [&](std::size_t d) {
    RngStream stream = rng.fork(d);
    const EstimateDraw ed = draw_estimate_direct(cfg, stream);
    const PrecodedLink link = precoder(ed.estimate, cfg, stream);
    records[d] = record_draw(ed.channel.H, link, cfg, tau_f);
  });
  return collect(records, cfg.K, tau_f);
}

PosteriorBank build_conditional_bank(const ChannelEstimate& est, const PrecodedLink& link,
                                     const SystemConfig& cfg, int tau_f, std::size_t draws,
                                     const RngStream& rng) {
  Eigen::VectorXd sd(cfg.K);
  for (int k = 0; k < cfg.K; ++k) sd(k) = std::sqrt(est.err_var.at(k));
  std::vector<DrawRecord> records(draws);
  parallel_for(draws, [&](std::size_t d) {
    RngStream stream = rng.fork(d);
    const ComplexMatrix H = est.H_hat + sd.asDiagonal() * stream.cn_matrix(cfg.K, cfg.M);
    records[d] = record_draw(H, link, cfg, tau_f);
  });
  return collect(records, cfg.K, tau_f);
}

PosteriorGainStats posterior_gain_stats(const UserPosteriorBank& bank,
                                        const Eigen::RowVectorXcd& observed, double noise_var) {
  const auto S = static_cast<Eigen::Index>(bank.samples.size());
  if (S == 0) throw DegeneratePosteriorError("user never selected in the posterior bank");
  std::vector<double> w;
  if (bank.predicted.cols() == 0) {
    w.assign(S, 1.0 / static_cast<double>(S));
  } else {
    w = likelihood_weights(bank.predicted, observed, noise_var);
  }
  PosteriorGainStats out;
  double second = 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < S; ++i) {
    const GainSample& s = bank.samples[i];
    out.mean_gain += w[i] * s.own;
    second += w[i] * s.own_power;
    out.interference += w[i] * s.interference;
    sum_sq += w[i] * w[i];
  }
  out.var_gain = std::max(0.0, second - std::norm(out.mean_gain));
  out.effective_samples = 1.0 / sum_sq;
  return out;
}

}  // namespace tdd
