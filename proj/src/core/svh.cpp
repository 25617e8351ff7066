#include "tdd/svh.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tdd {

namespace {

constexpr double kConditionLimit = 1e12;

struct Diagonals {
  Eigen::VectorXcd delta;
  Eigen::VectorXd d;
};

// b_j, c_j of the sum-rate objective and the derived Delta, D for one channel.
Diagonals diagonals_from(const ComplexMatrix& H, const ComplexMatrix& A, double sigma2) {
  const ComplexMatrix G = H * A;
  const double noise = sigma2 * A.squaredNorm();
  const auto K = G.rows();
  Diagonals out{Eigen::VectorXcd(K), Eigen::VectorXd(K)};
  for (Eigen::Index j = 0; j < K; ++j) {
    const double b = std::norm(G(j, j));
    const double c = noise + G.row(j).squaredNorm() - b;
    out.delta(j) = G(j, j) / c;
    out.d(j) = b / (c * (b + c));
  }
  return out;
}

// Solves V X = rhs for Hermitian positive (semi)definite V, adding a small
// ridge when V is too ill-conditioned.
ComplexMatrix solve_regularized(ComplexMatrix V, const ComplexMatrix& rhs) {
  Eigen::LLT<ComplexMatrix> llt(V);
  if (llt.info() != Eigen::Success || llt.rcond() < 1.0 / kConditionLimit) {
    const double ridge = 1e-12 * V.trace().real() / static_cast<double>(V.rows());
    V.diagonal().array() += ridge > 0.0 ? ridge : 1e-300;
    llt.compute(V);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("SVH update matrix is singular");
  }
  return llt.solve(rhs);
}

ComplexMatrix update_single(const ComplexMatrix& H, const Diagonals& diag, double sigma2) {
  ComplexMatrix V = H.adjoint() * diag.d.asDiagonal() * H;
  V.diagonal().array() += sigma2 * diag.d.sum();
  return solve_regularized(std::move(V), H.adjoint() * diag.delta.asDiagonal());
}

ComplexMatrix update_sampled(const std::vector<ComplexMatrix>& samples,
                             const std::vector<Diagonals>& diags, double sigma2) {
  const auto M = samples.front().cols();
  const auto K = samples.front().rows();
  ComplexMatrix V = ComplexMatrix::Zero(M, M);
  ComplexMatrix T = ComplexMatrix::Zero(M, K);
  double trace_d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ComplexMatrix& Hi = samples[i];
    V.noalias() += Hi.adjoint() * diags[i].d.asDiagonal() * Hi;
    T.noalias() += Hi.adjoint() * diags[i].delta.asDiagonal();
    trace_d += diags[i].d.sum();
  }
  V.diagonal().array() += sigma2 * trace_d;
  return solve_regularized(std::move(V), T);
}

double relative_change(const ComplexMatrix& A, const ComplexMatrix& next) {
  const double n = A.norm();
  return n > 0.0 ? (A - next).norm() / n : 0.0;
}

}  // namespace

SvhInit SvhInit::identity(int K) {
  return {Eigen::VectorXcd::Ones(K), Eigen::VectorXd::Ones(K)};
}

SvhInit SvhInit::random(int K, RngStream& rng) {
  SvhInit init{Eigen::VectorXcd(K), Eigen::VectorXd(K)};
  for (int k = 0; k < K; ++k) init.delta(k) = rng.cn();
  for (int k = 0; k < K; ++k) init.d(k) = 0.05 + rng.uniform();
  return init;
}

double sum_rate_objective(const ComplexMatrix& H, const ComplexMatrix& A, double sigma2) {
  const ComplexMatrix G = H * A;
  const double noise = sigma2 * A.squaredNorm();
  double r = 0.0;
  for (Eigen::Index j = 0; j < G.rows(); ++j) {
    const double b = std::norm(G(j, j));
    const double c = noise + G.row(j).squaredNorm() - b;
    if (b > 0.0) r += std::log2(1.0 + b / c);
  }
  return r;
}

double sampled_average_rate(const std::vector<ComplexMatrix>& samples, const ComplexMatrix& A,
                            double sigma2) {
  if (samples.empty()) return 0.0;
  double s = 0.0;
  for (const auto& H : samples) s += sum_rate_objective(H, A, sigma2);
  return s / static_cast<double>(samples.size());
}

SvhResult svh_precoder(const SvhProblem& problem, const SvhInit& init) {
  if (problem.iterations < 1) throw std::invalid_argument("SVH needs iterations >= 1");
  if (!(problem.sigma2 > 0.0)) throw std::invalid_argument("SVH needs sigma2 > 0");
  const ComplexMatrix& H = problem.Heff;
  Diagonals diag{init.delta, init.d};
  SvhResult out;
  for (int it = 0; it < problem.iterations; ++it) {
    out.A = update_single(H, diag, problem.sigma2);
    out.objective.push_back(sum_rate_objective(H, out.A, problem.sigma2));
    diag = diagonals_from(H, out.A, problem.sigma2);
  }
  out.residual = relative_change(out.A, update_single(H, diag, problem.sigma2));
  return out;
}

SvhResult svh_precoder(const SvhProblem& problem) {
  return svh_precoder(problem, SvhInit::identity(static_cast<int>(problem.Heff.rows())));
}

SvhResult svh_precoder(const SvhProblem& problem, RngStream& rng) {
  return svh_precoder(problem, SvhInit::random(static_cast<int>(problem.Heff.rows()), rng));
}

SvhResult mod_svh_from_samples(const std::vector<ComplexMatrix>& samples, int iterations,
                               const SvhInit& init, double sigma2) {
  if (samples.empty()) throw std::invalid_argument("Mod-SVH needs L >= 1 samples");
  if (iterations < 1) throw std::invalid_argument("Mod-SVH needs iterations >= 1");
  std::vector<Diagonals> diags(samples.size(), Diagonals{init.delta, init.d});
  SvhResult out;
  for (int it = 0; it < iterations; ++it) {
    out.A = update_sampled(samples, diags, sigma2);
    out.objective.push_back(sampled_average_rate(samples, out.A, sigma2));
    for (std::size_t i = 0; i < samples.size(); ++i)
      diags[i] = diagonals_from(samples[i], out.A, sigma2);
  }
  out.residual = relative_change(out.A, update_sampled(samples, diags, sigma2));
  return out;
}

std::vector<ComplexMatrix> draw_error_samples(const ComplexMatrix& H_hat,
                                              const std::vector<double>& err_var, int L,
                                              RngStream& rng) {
  if (L < 1) throw std::invalid_argument("L >= 1 required");
  Eigen::VectorXd sd(H_hat.rows());
  for (Eigen::Index k = 0; k < H_hat.rows(); ++k) sd(k) = std::sqrt(err_var.at(k));
  std::vector<ComplexMatrix> samples;
  samples.reserve(L);
  for (int i = 0; i < L; ++i)
    samples.push_back(H_hat + sd.asDiagonal() * rng.cn_matrix(H_hat.rows(), H_hat.cols()));
  return samples;
}

SvhResult mod_svh_precoder(const ComplexMatrix& H_hat, const std::vector<double>& err_var,
                           int L, int iterations, RngStream& rng, const SvhInit* init) {
  const auto samples = draw_error_samples(H_hat, err_var, L, rng);
  const SvhInit start = init ? *init : SvhInit::identity(static_cast<int>(H_hat.rows()));
  return mod_svh_from_samples(samples, iterations, start);
}

RestartResult multi_restart_best(const ComplexMatrix& H_hat, const std::vector<double>& err_var,
                                 int restarts, int L, int iterations, const RngStream& rng) {
  if (restarts < 1) throw std::invalid_argument("restarts >= 1 required");
  const int K = static_cast<int>(H_hat.rows());
  RngStream eval_stream = rng.fork(std::numeric_limits<std::uint64_t>::max());
  const auto fresh = draw_error_samples(H_hat, err_var, L, eval_stream);

  RestartResult out;
  out.best_value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    RngStream stream = rng.fork(static_cast<std::uint64_t>(r));
    SvhResult res;
    if (r == 0) {
      res = mod_svh_precoder(H_hat, err_var, L, iterations, stream);
    } else {
      RngStream init_stream = stream.fork(0);
      const SvhInit init = SvhInit::random(K, init_stream);
      res = mod_svh_precoder(H_hat, err_var, L, iterations, stream, &init);
    }
    const double value = sampled_average_rate(fresh, res.A);
    out.values.push_back(value);
    if (value > out.best_value) {
      out.best_value = value;
      out.best = std::move(res);
    }
  }
  return out;
}

ComplexMatrix trace_normalize(const ComplexMatrix& A) {
  const double n = A.norm();
  return n > 0.0 ? ComplexMatrix(A / n) : A;
}

ComplexMatrix scale_rows_by_snr(const ComplexMatrix& H, const std::vector<double>& rho_f) {
  Eigen::VectorXd s(H.rows());
  for (Eigen::Index k = 0; k < H.rows(); ++k) s(k) = std::sqrt(rho_f.at(k));
  return s.asDiagonal() * H;
}

}  // namespace tdd
