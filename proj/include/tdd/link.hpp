#pragma once

#include <functional>
#include <vector>

#include "tdd/channel.hpp"
#include "tdd/config.hpp"
#include "tdd/rng.hpp"

namespace tdd {

/// A trace-normalized M x N precoder and the user served by each column.
struct PrecodedLink {
  ComplexMatrix A;
  std::vector<int> users;

  /// Column serving user k, or -1 when k is not selected.
  [[nodiscard]] int column_of(int k) const;
};

/// Maps a channel estimate to a precoded link. May consume randomness
/// (Mod-SVH error samples).
using PrecoderFn =
    std::function<PrecodedLink(const ChannelEstimate&, const SystemConfig&, RngStream&)>;

/// Effective forward channel row of user k: sqrt(rho_f[k]) h_k^T A (length N).
Eigen::RowVectorXcd effective_row(const ComplexMatrix& H, const PrecodedLink& link,
                                  const SystemConfig& cfg, int k);

}  // namespace tdd
