#include "tdd/link.hpp"

#include <algorithm>
#include <cmath>

namespace tdd {

int PrecodedLink::column_of(int k) const {
  const auto it = std::find(users.begin(), users.end(), k);
  return it == users.end() ? -1 : static_cast<int>(it - users.begin());
}

Eigen::RowVectorXcd effective_row(const ComplexMatrix& H, const PrecodedLink& link,
                                  const SystemConfig& cfg, int k) {
  return std::sqrt(cfg.rho_f[k]) * (H.row(k) * link.A);
}

}  // namespace tdd
