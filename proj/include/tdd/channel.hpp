#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tdd/config.hpp"
#include "tdd/rng.hpp"

namespace tdd {

/// Channel matrices are K x M: row k is the forward channel h_k^T of user k.
using ComplexMatrix = Eigen::MatrixXcd;

struct ChannelDraw {
  ComplexMatrix H;
};

/// LMMSE estimate of H with the per-row estimate and error variances.
struct ChannelEstimate {
  ComplexMatrix H_hat;
  std::vector<double> est_var;
  std::vector<double> err_var;
};

/// A true channel together with its estimate (H = H_hat + error).
struct EstimateDraw {
  ChannelDraw channel;
  ChannelEstimate estimate;
};

enum class PilotBasis { Identity, Dft };

/// tau_r x K reverse pilot matrix Psi with orthonormal columns.
ComplexMatrix reverse_pilot_matrix(int tau_r, int K, PilotBasis basis = PilotBasis::Identity);

/// K x M matrix of i.i.d. CN(0, 1) entries.
ChannelDraw draw_channel(int M, int K, RngStream& rng);

/// Received reverse training block Y = sqrt(tau_r) H^T E^r Psi^dagger + V (M x tau_r).
ComplexMatrix reverse_train(const ChannelDraw& draw, const SystemConfig& cfg, RngStream& rng,
                            PilotBasis basis = PilotBasis::Identity);

/// Same as reverse_train with the noise block supplied by the caller.
ComplexMatrix reverse_train_with_noise(const ChannelDraw& draw, const SystemConfig& cfg,
                                       const ComplexMatrix& noise,
                                       PilotBasis basis = PilotBasis::Identity);

/// H_hat = diag(sqrt(rho_k tau)/(1 + rho_k tau)) Psi^T Y^T.
ChannelEstimate lmmse_estimate(const ComplexMatrix& Y, const SystemConfig& cfg,
                               PilotBasis basis = PilotBasis::Identity);

/// Draws H_hat and the error independently from their marginal laws and
/// returns H = H_hat + error. Distributionally identical to
/// draw_channel -> reverse_train -> lmmse_estimate, at a fraction of the cost.
///
/// The estimate rows are sqrt(est_var[k]) times a fixed CN(0,1) draw, so for a
/// given stream the normalized estimate does not depend on tau_r or the SNRs.
EstimateDraw draw_estimate_direct(const SystemConfig& cfg, RngStream& rng);

}  // namespace tdd
