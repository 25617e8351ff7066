#pragma once

#include <stdexcept>
#include <vector>

#include "tdd/channel.hpp"
#include "tdd/config.hpp"

namespace tdd {

/// Raised when the scaled estimate Gram matrix is too ill-conditioned to invert.
class SingularChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gram matrices with condition number above this are treated as singular.
inline constexpr double kGramConditionLimit = 1e12;

/// Non-negative precoder parameters p_1..p_K.
struct PrecoderWeights {
  std::vector<double> p;
};

/// Generalized zero-forcing precoder for a selected user set.
///
/// A is M x N with Tr(A^dagger A) = 1 and H_DS A = chi I_N, where H_DS is the
/// selected estimate rows scaled by p^{-1/2}. Column n serves selection[n].
struct GzfPrecoder {
  ComplexMatrix A;
  double chi = 0.0;
  std::vector<int> selection;
};

/// Large-antenna coefficients: a_j = 1/est_var_j, b_i = M rho_f / (1 + rho_f err_var).
struct AsymptoticCoefficients {
  std::vector<double> a;
  std::vector<double> b;
  double nu_star = 0.0;
};

struct PrecoderOptimum {
  PrecoderWeights p_bar;
  AsymptoticCoefficients coefficients;  // nu_star filled in
  double nu_star = 0.0;
  int iterations = 0;
};

/// Builds A from the N x M selected estimate rows and their parameters p_S > 0.
/// `selection` only labels the columns; pass an empty vector for 0..N-1.
GzfPrecoder build_gzf(const ComplexMatrix& H_hat_S, const std::vector<double>& p_S,
                      std::vector<int> selection = {});

/// chi = (Tr[(H_DS H_DS^dagger)^{-1}])^{-1/2}.
double compute_chi(const ComplexMatrix& H_DS);

/// chi ~= sqrt(M / sum_j a_j p_j) for M >> K.
double large_m_chi(const std::vector<double>& p, const std::vector<double>& a, int M);

AsymptoticCoefficients asymptotic_coefficients(const SystemConfig& cfg);

/// J(p) = sum_i w_i log2(1 + b_i p_i / sum_j a_j p_j).
double asymptotic_objective(const std::vector<double>& p, const AsymptoticCoefficients& c,
                            const std::vector<double>& w);

/// Maximizes J over p >= 0 (all users selected). Returns the representative
/// with sum_i a_i p_i = 1: p_i = max(0, w_i/(nu a_i) - 1/b_i), with nu found by
/// bisection on the constraint.
PrecoderOptimum optimize_precoder_params(const SystemConfig& cfg);

}  // namespace tdd
