#pragma once

#include <vector>

#include "tdd/channel.hpp"
#include "tdd/rng.hpp"

namespace tdd {

/// Sum-rate precoding problem with known channel. Rows of Heff are already
/// scaled by sqrt(rho_f) so every user sees noise variance sigma2.
struct SvhProblem {
  ComplexMatrix Heff;
  double sigma2 = 1.0;
  int iterations = 5;
  int L = 50;  // error samples, Mod-SVH only
};

struct SvhResult {
  ComplexMatrix A;                 // M x K, not trace-normalized
  std::vector<double> objective;   // R after each round
  double residual = 0.0;           // ||A - update(A)||_F / ||A||_F at exit
};

/// Starting values for the diagonal matrices Delta (complex) and D (positive).
struct SvhInit {
  Eigen::VectorXcd delta;
  Eigen::VectorXd d;

  static SvhInit identity(int K);
  static SvhInit random(int K, RngStream& rng);
};

/// R(H, A) = sum_j log2(1 + |h_j a_j|^2 / (sigma2 Tr(A A^dagger) + sum_{l!=j} |h_j a_l|^2)).
double sum_rate_objective(const ComplexMatrix& H, const ComplexMatrix& A, double sigma2 = 1.0);

/// Mean of sum_rate_objective over channel samples.
double sampled_average_rate(const std::vector<ComplexMatrix>& samples, const ComplexMatrix& A,
                            double sigma2 = 1.0);

/// Fixed-point iteration A = (sigma2 Tr(D) I + H^dagger D H)^{-1} H^dagger Delta,
/// Delta_jj = (HA)_jj / c_j, D_jj = b_j / (c_j (b_j + c_j)).
SvhResult svh_precoder(const SvhProblem& problem, const SvhInit& init);
SvhResult svh_precoder(const SvhProblem& problem);
/// Random diagonal start drawn from rng.
SvhResult svh_precoder(const SvhProblem& problem, RngStream& rng);

/// Mod-SVH on explicit channel samples: A = V^{-1} T with
/// V = sum_i (H_i^dagger D_i H_i + sigma2 Tr(D_i) I), T = sum_i H_i^dagger Delta_i.
/// The objective trace is the in-sample average rate.
SvhResult mod_svh_from_samples(const std::vector<ComplexMatrix>& samples, int iterations,
                               const SvhInit& init, double sigma2 = 1.0);

/// Draws L channels H_hat + error with row k error variance err_var[k] (both in
/// the SNR-scaled domain) and runs mod_svh_from_samples.
SvhResult mod_svh_precoder(const ComplexMatrix& H_hat, const std::vector<double>& err_var,
                           int L, int iterations, RngStream& rng, const SvhInit* init = nullptr);

std::vector<ComplexMatrix> draw_error_samples(const ComplexMatrix& H_hat,
                                              const std::vector<double>& err_var, int L,
                                              RngStream& rng);

struct RestartResult {
  SvhResult best;
  double best_value = 0.0;          // fresh-batch average rate of `best`
  std::vector<double> values;       // fresh-batch value of every restart
};

/// Runs Mod-SVH from `restarts` starts (the first from identity, the rest from
/// random diagonals, each with its own error samples) and keeps the one with
/// the highest average rate on a separate, shared batch of L fresh samples.
RestartResult multi_restart_best(const ComplexMatrix& H_hat, const std::vector<double>& err_var,
                                 int restarts, int L, int iterations, const RngStream& rng);

/// Scales A so that Tr(A^dagger A) = 1 (zero matrices are returned as is).
ComplexMatrix trace_normalize(const ComplexMatrix& A);

/// Row k multiplied by sqrt(rho_f[k]).
ComplexMatrix scale_rows_by_snr(const ComplexMatrix& H, const std::vector<double>& rho_f);

}  // namespace tdd
