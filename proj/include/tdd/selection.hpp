#pragma once

#include <cstddef>
#include <vector>

#include "tdd/channel.hpp"
#include "tdd/config.hpp"
#include "tdd/rng.hpp"

namespace tdd {

/// Selected users in rank order; column n of a precoder serves indices[n].
struct Selection {
  std::vector<int> indices;
  [[nodiscard]] int N() const { return static_cast<int>(indices.size()); }
};

struct SelectionStats {
  std::vector<double> gamma;  // empirical P(user k selected)
  std::size_t trials = 0;
};

/// Short-term selection rule applied to every channel estimate.
struct SelectionRule {
  enum class Kind {
    All,           // every user with a positive parameter
    TopNorm,       // N largest ||h_hat_k||^2
    WeightedNorm,  // N largest p_k ||z_k||^2, z_k the row normalized to unit variance
  };
  Kind kind = Kind::All;
  std::vector<double> p;  // WeightedNorm ranking parameters

  static SelectionRule all() { return {}; }
  static SelectionRule top_norm() { return {Kind::TopNorm, {}}; }
  static SelectionRule weighted_norm(std::vector<double> p) {
    return {Kind::WeightedNorm, std::move(p)};
  }
};

/// The N users with largest estimated channel gain; ties go to the lower index.
Selection select_top_norm(const ComplexMatrix& H_hat, int N);

/// Orders users by p_bar[k] ||z_k||^2 with z_k = h_hat_k / sqrt(est_var_k) and
/// returns the first N. Users with p_bar[k] == 0 rank after all others.
Selection select_weighted_norm(const ComplexMatrix& H_hat, const std::vector<double>& p_bar,
                               const SystemConfig& cfg, int N);

Selection apply_rule(const SelectionRule& rule, const ComplexMatrix& H_hat,
                     const SystemConfig& cfg, int N);

/// Monte Carlo selection frequencies over direct estimate draws.
SelectionStats estimate_selection_probabilities(const SelectionRule& rule,
                                                const SystemConfig& cfg, int N,
                                                std::size_t trials, const RngStream& rng);

}  // namespace tdd
