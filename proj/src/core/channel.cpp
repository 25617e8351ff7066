#include "tdd/channel.hpp"

#include <cmath>
#include <numbers>

namespace tdd {

ComplexMatrix reverse_pilot_matrix(int tau_r, int K, PilotBasis basis) {
  if (K > tau_r) throw ConfigError("reverse pilots need K <= tau_r");
  ComplexMatrix psi(tau_r, K);
  if (basis == PilotBasis::Identity) {
    psi.setIdentity();
    return psi;
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(tau_r));
  for (int t = 0; t < tau_r; ++t)
    for (int k = 0; k < K; ++k)
      psi(t, k) = std::polar(scale, -2.0 * std::numbers::pi * t * k / tau_r);
  return psi;
}

ChannelDraw draw_channel(int M, int K, RngStream& rng) { return {rng.cn_matrix(K, M)}; }

ComplexMatrix reverse_train_with_noise(const ChannelDraw& draw, const SystemConfig& cfg,
                                       const ComplexMatrix& noise, PilotBasis basis) {
  const ComplexMatrix psi = reverse_pilot_matrix(cfg.tau_r, cfg.K, basis);
  Eigen::VectorXd amp(cfg.K);
  for (int k = 0; k < cfg.K; ++k) amp(k) = std::sqrt(cfg.rho_r[k]);
  const ComplexMatrix HtEr = draw.H.transpose() * amp.asDiagonal();
  return std::sqrt(static_cast<double>(cfg.tau_r)) * HtEr * psi.adjoint() + noise;
}

ComplexMatrix reverse_train(const ChannelDraw& draw, const SystemConfig& cfg, RngStream& rng,
                            PilotBasis basis) {
  return reverse_train_with_noise(draw, cfg, rng.cn_matrix(cfg.M, cfg.tau_r), basis);
}

ChannelEstimate lmmse_estimate(const ComplexMatrix& Y, const SystemConfig& cfg,
                               PilotBasis basis) {
  const ComplexMatrix psi = reverse_pilot_matrix(cfg.tau_r, cfg.K, basis);
  Eigen::VectorXd gain(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    const double snr = cfg.rho_r[k] * cfg.tau_r;
    gain(k) = std::sqrt(snr) / (1.0 + snr);
  }
  ChannelEstimate est;
  est.H_hat = gain.asDiagonal() * (Y * psi).transpose();
  est.est_var = cfg.est_vars();
  est.err_var = cfg.err_vars();
  return est;
}

EstimateDraw draw_estimate_direct(const SystemConfig& cfg, RngStream& rng) {
  const ComplexMatrix z_hat = rng.cn_matrix(cfg.K, cfg.M);
  const ComplexMatrix z_err = rng.cn_matrix(cfg.K, cfg.M);
  EstimateDraw out;
  out.estimate.est_var = cfg.est_vars();
  out.estimate.err_var = cfg.err_vars();
  Eigen::VectorXd s_hat(cfg.K), s_err(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    s_hat(k) = std::sqrt(out.estimate.est_var[k]);
    s_err(k) = std::sqrt(out.estimate.err_var[k]);
  }
  out.estimate.H_hat = s_hat.asDiagonal() * z_hat;
  out.channel.H = out.estimate.H_hat + s_err.asDiagonal() * z_err;
  return out;
}

}  // namespace tdd
