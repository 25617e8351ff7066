#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tdd/link.hpp"

namespace tdd {

/// Raised when every importance weight vanishes; more samples are needed.
class DegeneratePosteriorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Forward pilot vectors q^(1..tau_f), stored as the columns of an N x tau_f matrix.
///
/// tau_f = 1 sends the all-ones vector. For tau_f >= 2, pilot t is
/// sqrt(tau_f) times the indicator of the columns n with n mod tau_f == t.
struct PilotPattern {
  int tau_f = 0;
  Eigen::MatrixXd Q;
};

PilotPattern build_pilot_pattern(int tau_f, int N);

/// Pilot receptions x_k^p of all K users, one row per user (K x tau_f).
struct PilotObservation {
  ComplexMatrix x;
};

/// x_k^p(t) = sqrt(rho_f[k]) h_k^T A q^(t) + CN(0, 1).
PilotObservation receive_pilots(const ComplexMatrix& H, const PrecodedLink& link,
                                const PilotPattern& pattern, const SystemConfig& cfg,
                                RngStream& rng);

enum class NoiseLaw {
  ComplexCircular,  // CN(0, var): density ~ exp(-|d|^2 / var)
  Real,             // N(0, var):  density ~ exp(-d^2 / (2 var))
};

/// Self-normalized weights f_Z(observed - predicted_i) / sum_j f_Z(...),
/// computed in log space. `predicted` holds one prediction per row.
std::vector<double> likelihood_weights(const ComplexMatrix& predicted,
                                       const Eigen::RowVectorXcd& observed, double noise_var,
                                       NoiseLaw law = NoiseLaw::ComplexCircular);

/// Estimate of E[value | observation] from joint samples (value_i, predicted_i)
/// of a model observation = predicted + Z with Z independent of everything else.
std::complex<double> conditional_mean_mc(const Eigen::VectorXcd& values,
                                         const ComplexMatrix& predicted,
                                         const Eigen::RowVectorXcd& observed, double noise_var,
                                         NoiseLaw law = NoiseLaw::ComplexCircular);

/// Effective-channel quantities of one user in one joint draw.
struct GainSample {
  std::complex<double> own;  // g_kk
  double own_power = 0.0;    // |g_kk|^2
  double interference = 0.0; // sum_{i != k} |g_ki|^2
};

/// Draws from the joint law of (G row, noiseless pilot reception) for one user,
/// restricted to draws where the user is selected.
struct UserPosteriorBank {
  std::vector<GainSample> samples;
  ComplexMatrix predicted;  // samples.size() x tau_f
};

struct PosteriorBank {
  int tau_f = 0;
  std::size_t draws = 0;
  std::vector<UserPosteriorBank> users;
};

struct PosteriorGainStats {
  std::complex<double> mean_gain;  // E[g_kk | x]
  double var_gain = 0.0;           // var{g_kk | x}
  double interference = 0.0;       // sum_{i != k} E[|g_ki|^2 | x]
  double effective_samples = 0.0;  // 1 / sum w_i^2
};

/// Simulates `draws` independent coherence intervals (channel, estimate, precoder)
/// and records every user's effective gains and noiseless pilot receptions.
/// A user only knows the long-term statistics and its own pilots, so these
/// joint samples are what its posterior averages over.
/// The pilot pattern follows each draw's column count.
PosteriorBank build_posterior_bank(const SystemConfig& cfg, const PrecoderFn& precoder,
                                   int tau_f, std::size_t draws, const RngStream& rng);

/// Bank for a base station whose estimate the users also know: the precoder
/// and H_hat are fixed and only the estimation error is drawn (row k gets
/// variance est.err_var[k]).
PosteriorBank build_conditional_bank(const ChannelEstimate& est, const PrecodedLink& link,
                                     const SystemConfig& cfg, int tau_f, std::size_t draws,
                                     const RngStream& rng);

/// Posterior moments of user k's effective gains given its pilot reception.
/// With tau_f = 0 these are the unconditional moments over the bank.
PosteriorGainStats posterior_gain_stats(const UserPosteriorBank& bank,
                                        const Eigen::RowVectorXcd& observed,
                                        double noise_var = 1.0);

}  // namespace tdd
