#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tdd/channel.hpp"
#include "tdd/config.hpp"
#include "tdd/rng.hpp"

namespace tdd::oracle {

// J(p) written out from scratch for the grid search (M rho / (1 + rho err) gains,
// 1/est costs).
inline double objective(const SystemConfig& cfg, const std::vector<double>& p) {
  double ap = 0.0;
  for (int k = 0; k < cfg.K; ++k) ap += p[k] * (1.0 + cfg.rho_r[k] * cfg.tau_r) / (cfg.rho_r[k] * cfg.tau_r);
  double j = 0.0;
  for (int k = 0; k < cfg.K; ++k) {
    const double err = 1.0 / (1.0 + cfg.rho_r[k] * cfg.tau_r);
    const double b = cfg.M * cfg.rho_f[k] / (1.0 + cfg.rho_f[k] * err);
    j += cfg.w[k] * std::log2(1.0 + b * p[k] / ap);
  }
  return j;
}

// Point on the constraint line sum a_k p_k = 1 from barycentric weights t.
inline std::vector<double> on_line(const SystemConfig& cfg, const std::vector<double>& t) {
  std::vector<double> p(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    const double a = (1.0 + cfg.rho_r[k] * cfg.tau_r) / (cfg.rho_r[k] * cfg.tau_r);
    p[k] = t[k] / a;
  }
  return p;
}

// Max of J over the simplex of barycentric weights, K = 2 or 3. A coarse grid
// is refined three times around the incumbent.
inline double grid_search_max(const SystemConfig& cfg) {
  if (cfg.K != 2 && cfg.K != 3) throw std::invalid_argument("grid search supports K = 2, 3");
  double best = -1.0;
  double c0 = 0.5, c1 = 0.5;  // incumbent (t0, t1)
  double lo0 = 0.0, hi0 = 1.0, lo1 = 0.0, hi1 = 1.0;
  const int n = cfg.K == 2 ? 20000 : 400;
  for (int round = 0; round < 4; ++round) {
    double b0 = c0, b1 = c1;
    for (int i = 0; i <= n; ++i) {
      const double t0 = lo0 + (hi0 - lo0) * i / n;
      if (t0 < 0.0 || t0 > 1.0) continue;
      if (cfg.K == 2) {
        const double j = objective(cfg, on_line(cfg, {t0, 1.0 - t0}));
        if (j > best) best = j, b0 = t0;
        continue;
      }
      for (int l = 0; l <= n; ++l) {
        const double t1 = lo1 + (hi1 - lo1) * l / n;
        if (t1 < 0.0 || t0 + t1 > 1.0) continue;
        const double j = objective(cfg, on_line(cfg, {t0, t1, 1.0 - t0 - t1}));
        if (j > best) best = j, b0 = t0, b1 = t1;
      }
    }
    c0 = b0;
    c1 = b1;
    const double h0 = 4.0 * (hi0 - lo0) / n, h1 = 4.0 * (hi1 - lo1) / n;
    lo0 = std::max(0.0, c0 - h0), hi0 = std::min(1.0, c0 + h0);
    lo1 = std::max(0.0, c1 - h1), hi1 = std::min(1.0, c1 + h1);
  }
  return best;
}

// E[X | X + Z = y] for X ~ N(0, sx2), Z ~ N(0, sz2).
inline double gaussian_conditional_mean(double y, double sx2, double sz2) {
  return sx2 / (sx2 + sz2) * y;
}

// Sum rate of a known channel, written directly from the definition.
inline double sum_rate(const ComplexMatrix& H, const ComplexMatrix& A, double sigma2) {
  const double noise = sigma2 * A.squaredNorm();
  double r = 0.0;
  for (Eigen::Index j = 0; j < H.rows(); ++j) {
    double interference = 0.0;
    for (Eigen::Index l = 0; l < A.cols(); ++l)
      if (l != j) interference += std::norm((H.row(j) * A.col(l)).value());
    const double own = std::norm((H.row(j) * A.col(j)).value());
    r += std::log2(1.0 + own / (noise + interference));
  }
  return r;
}

// Best sum rate over random unit-trace precoders.
inline double random_search_sum_rate(const ComplexMatrix& H, double sigma2, int tries,
                                     RngStream& rng) {
  double best = 0.0;
  for (int t = 0; t < tries; ++t) {
    ComplexMatrix A = rng.cn_matrix(H.cols(), H.rows());
    A /= A.norm();
    best = std::max(best, sum_rate(H, A, sigma2));
  }
  return best;
}

}  // namespace tdd::oracle
