#include "tdd/selection.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "tdd/parallel.hpp"

namespace tdd {

namespace {

void check_n(int N, Eigen::Index K) {
  if (N < 1 || N > K) throw std::invalid_argument("selection size must satisfy 1 <= N <= K");
}

// Ranks by (tier desc, metric desc, index asc) and keeps the first N.
Selection rank_and_take(const std::vector<double>& metric, const std::vector<int>& tier,
                        int N) {
  std::vector<int> order(metric.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (tier[a] != tier[b]) return tier[a] > tier[b];
    return metric[a] > metric[b];
  });
  order.resize(N);
  return {order};
}

}  // namespace

Selection select_top_norm(const ComplexMatrix& H_hat, int N) {
  check_n(N, H_hat.rows());
  std::vector<double> metric(H_hat.rows());
  for (Eigen::Index k = 0; k < H_hat.rows(); ++k) metric[k] = H_hat.row(k).squaredNorm();
  return rank_and_take(metric, std::vector<int>(metric.size(), 0), N);
}

Selection select_weighted_norm(const ComplexMatrix& H_hat, const std::vector<double>& p_bar,
                               const SystemConfig& cfg, int N) {
  check_n(N, H_hat.rows());
  std::vector<double> metric(H_hat.rows());
  std::vector<int> tier(H_hat.rows());
  for (Eigen::Index k = 0; k < H_hat.rows(); ++k) {
    const double z_norm2 = H_hat.row(k).squaredNorm() / cfg.est_var(static_cast<int>(k));
    metric[k] = p_bar.at(k) * z_norm2;
    tier[k] = p_bar[k] > 0.0 ? 1 : 0;
  }
  return rank_and_take(metric, tier, N);
}

Selection apply_rule(const SelectionRule& rule, const ComplexMatrix& H_hat,
                     const SystemConfig& cfg, int N) {
  switch (rule.kind) {
    case SelectionRule::Kind::TopNorm:
      return select_top_norm(H_hat, N);
    case SelectionRule::Kind::WeightedNorm:
      return select_weighted_norm(H_hat, rule.p, cfg, N);
    case SelectionRule::Kind::All:
      break;
  }
  Selection all;
  all.indices.resize(H_hat.rows());
  std::iota(all.indices.begin(), all.indices.end(), 0);
  return all;
}

SelectionStats estimate_selection_probabilities(const SelectionRule& rule,
                                                const SystemConfig& cfg, int N,
                                                std::size_t trials, const RngStream& rng) {
  if (trials < 1) throw std::invalid_argument("trials >= 1 required");
  std::vector<Selection> picks(trials);
  parallel_for(trials, [&](std::size_t t) {
    RngStream stream = rng.fork(t);
    const EstimateDraw d = draw_estimate_direct(cfg, stream);
    picks[t] = apply_rule(rule, d.estimate.H_hat, cfg, N);
  });
  SelectionStats out;
  out.trials = trials;
  out.gamma.assign(cfg.K, 0.0);
  for (const auto& s : picks)
    for (int k : s.indices) out.gamma[k] += 1.0;
  for (double& g : out.gamma) g /= static_cast<double>(trials);
  return out;
}

}  // namespace tdd
