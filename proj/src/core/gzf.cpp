#include "tdd/gzf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tdd {

namespace {

// Inverse of a Hermitian positive-definite Gram matrix, refusing
// ill-conditioned input.
Eigen::MatrixXcd checked_gram_inverse(const Eigen::MatrixXcd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (!(lo > 0.0) || !std::isfinite(hi) || hi / lo > kGramConditionLimit)
    throw SingularChannelError("scaled channel estimate is rank deficient (Gram condition " +
                               std::to_string(lo > 0.0 ? hi / lo : INFINITY) + ")");
  return gram.llt().solve(Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()));
}

Eigen::MatrixXcd scale_rows(const Eigen::MatrixXcd& H, const std::vector<double>& p) {
  if (static_cast<Eigen::Index>(p.size()) != H.rows())
    throw std::invalid_argument("one precoder parameter per selected row required");
  Eigen::VectorXd d(H.rows());
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    if (!(p[i] > 0.0)) throw std::invalid_argument("precoder parameters must be positive");
    d(i) = 1.0 / std::sqrt(p[i]);
  }
  return d.asDiagonal() * H;
}

}  // namespace

GzfPrecoder build_gzf(const ComplexMatrix& H_hat_S, const std::vector<double>& p_S,
                      std::vector<int> selection) {
  const auto N = H_hat_S.rows();
  if (N < 1 || N > H_hat_S.cols())
    throw std::invalid_argument("GZF needs 1 <= N <= M selected rows");
  const Eigen::MatrixXcd H_DS = scale_rows(H_hat_S, p_S);
  const Eigen::MatrixXcd gram_inv = checked_gram_inverse(H_DS * H_DS.adjoint());
  const double trace = gram_inv.trace().real();

  GzfPrecoder out;
  out.chi = 1.0 / std::sqrt(trace);
  out.A = H_DS.adjoint() * gram_inv * out.chi;
  if (selection.empty()) {
    selection.resize(N);
    std::iota(selection.begin(), selection.end(), 0);
  }
  out.selection = std::move(selection);
  return out;
}

double compute_chi(const ComplexMatrix& H_DS) {
  const Eigen::MatrixXcd gram_inv = checked_gram_inverse(H_DS * H_DS.adjoint());
  return 1.0 / std::sqrt(gram_inv.trace().real());
}

double large_m_chi(const std::vector<double>& p, const std::vector<double>& a, int M) {
  const double s = std::inner_product(p.begin(), p.end(), a.begin(), 0.0);
  if (!(s > 0.0)) throw std::invalid_argument("large_m_chi needs sum a_j p_j > 0");
  return std::sqrt(M / s);
}

AsymptoticCoefficients asymptotic_coefficients(const SystemConfig& cfg) {
  AsymptoticCoefficients c;
  c.a.resize(cfg.K);
  c.b.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    c.a[k] = 1.0 / cfg.est_var(k);
    c.b[k] = cfg.M * cfg.rho_f[k] / (1.0 + cfg.rho_f[k] * cfg.err_var(k));
  }
  return c;
}

double asymptotic_objective(const std::vector<double>& p, const AsymptoticCoefficients& c,
                            const std::vector<double>& w) {
  const double ap = std::inner_product(p.begin(), p.end(), c.a.begin(), 0.0);
  if (!(ap > 0.0)) return 0.0;
  double j = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) j += w[i] * std::log2(1.0 + c.b[i] * p[i] / ap);
  return j;
}

PrecoderOptimum optimize_precoder_params(const SystemConfig& cfg) {
  const AsymptoticCoefficients c = asymptotic_coefficients(cfg);
  const int K = cfg.K;

  // Water level u = 1/nu; p_i(u) = max(0, w_i u / a_i - 1/b_i).
  auto p_at = [&](double u, int i) { return std::max(0.0, cfg.w[i] * u / c.a[i] - 1.0 / c.b[i]); };
  auto constraint = [&](double u) {
    double s = 0.0;
    for (int i = 0; i < K; ++i) s += c.a[i] * p_at(u, i);
    return s - 1.0;
  };

  double lo = 0.0;
  double hi = 1.0;
  while (constraint(hi) < 0.0) hi *= 2.0;

  PrecoderOptimum out;
  double u = hi;
  for (int it = 0; it < 200; ++it) {
    u = 0.5 * (lo + hi);
    const double r = constraint(u);
    out.iterations = it + 1;
    if (std::abs(r) < 1e-10) break;
    (r < 0.0 ? lo : hi) = u;
  }

  out.nu_star = 1.0 / u;
  out.coefficients = c;
  out.coefficients.nu_star = out.nu_star;
  out.p_bar.p.resize(K);
  double ap = 0.0;
  for (int i = 0; i < K; ++i) {
    out.p_bar.p[i] = p_at(u, i);
    ap += c.a[i] * out.p_bar.p[i];
  }
  // Remove the residual left by the bisection tolerance.
  for (double& p : out.p_bar.p) p /= ap;
  return out;
}

}  // namespace tdd
