// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "support.hpp"
#include "tdd/experiments.hpp"
#include "tdd/forward_pilot.hpp"
#include "tdd/gzf.hpp"
#include "tdd/rates.hpp"
#include "tdd/schemes.hpp"

using namespace tdd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double uniform(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

SystemConfig random_heterogeneous(int K, RngStream& rng) {
  SystemConfig cfg;
  cfg.K = K;
  cfg.M = K + static_cast<int>(rng.uniform() * 30);
  cfg.T = 40;
  cfg.tau_r = K + static_cast<int>(rng.uniform() * 10);
  for (int k = 0; k < K; ++k) {
    cfg.rho_f.push_back(db_to_linear(uniform(rng, -10.0, 25.0)));
    cfg.rho_r.push_back(db_to_linear(uniform(rng, -20.0, 15.0)));
    cfg.w.push_back(uniform(rng, 0.5, 2.0));
  }
  return validate_config(cfg);
}

// 1 and 2 share one scheme comparison run.
std::vector<ResultRow> table1_rows;
double table1_seconds = 0.0;

const std::vector<ResultRow>& table1() {
  if (table1_rows.empty()) {
    const auto t0 = Clock::now();
    table1_rows = reproduce_table1(1, 10000);
    table1_seconds = seconds_since(t0);
  }
  return table1_rows;
}

double table_value(const std::string& label, double snr) {
  for (const auto& r : table1())
    if (r.scheme == label && r.sweep && std::abs(*r.sweep - snr) < 1e-9) return r.net_rate;
  throw std::runtime_error("missing comparison entry " + label);
}

Outcome table_spot_checks() {
  struct Point {
    const char* label;
    double snr, expected;
  };
  const std::vector<Point> points = {{"ZF-FP(0)", 20, 8.54},
                                     {"ZF-Sch-FP(0)", 10, 7.32},
                                     {"ZF-Sch-FP(1)", 25, 19.64},
                                     {"Mod-SVH-FP(1)", 20, 16.92},
                                     {"Mod-SVH-UB", 30, 35.06}};
  bool ok = true;
  std::ostringstream d;
  for (const auto& p : points) {
    const double v = table_value(p.label, p.snr);
    const double rel = (v - p.expected) / p.expected;
    ok = ok && std::abs(rel) <= 0.15;
    d << p.label << "@" << p.snr << "=" << fmt("%.2f", v) << " (" << fmt("%+.1f%%", 100 * rel) << ") ";
  }
  const double per_point = table1_seconds / static_cast<double>(table1().size());
  ok = ok && per_point < 300.0;
  d << "mean " << fmt("%.2f", per_point) << " s/point";
  return {ok, d.str()};
}

Outcome table_crossover() {
  const double a5 = table_value("ZF-Sch-FP(0)", 5), b5 = table_value("ZF-Sch-FP(1)", 5);
  const double a30 = table_value("ZF-Sch-FP(0)", 30), b30 = table_value("ZF-Sch-FP(1)", 30);
  std::ostringstream d;
  d << "5 dB: FP(0)=" << fmt("%.2f", a5) << " FP(1)=" << fmt("%.2f", b5) << "; 30 dB: FP(0)="
    << fmt("%.2f", a30) << " FP(1)=" << fmt("%.2f", b30);
  return {a5 > b5 && b30 > a30, d.str()};
}

Outcome training_limits() {
  ScenarioParams base;
  base.M = 32;
  base.K = 8;
  base.T = 30;
  base.rho_r_offset_db = -10.0;
  std::vector<double> snrs;
  for (double s = -15; s <= 35; s += 5) snrs.push_back(s);
  const auto rows = training_sweep(base, Scheme{PrecoderKind::ZfSch, 0}, snrs, 1, 10000);
  bool ok = true;
  std::ostringstream d;
  int prev = 1 << 30;
  for (const auto& r : rows) {
    const double rho_r = *r.sweep - 10.0;
    if (rho_r <= -20.0) ok = ok && (r.tau_r == 14 || r.tau_r == 15);
    if (rho_r >= 20.0) ok = ok && r.tau_r == 8;
    ok = ok && r.tau_r <= prev;
    prev = r.tau_r;
    d << fmt("%g", rho_r) << "dB:" << r.tau_r << " ";
  }
  return {ok, "rho_r -> tau_r* " + d.str()};
}

Outcome kkt_oracle() {
  RngStream rng(404);
  double worst = -1.0;
  for (int K : {2, 3})
    for (int t = 0; t < 50; ++t) {
      const SystemConfig cfg = random_heterogeneous(K, rng);
      const auto opt = optimize_precoder_params(cfg);
      const double gap = oracle::grid_search_max(cfg) - oracle::objective(cfg, opt.p_bar.p);
      worst = std::max(worst, gap);
    }
  return {worst < 1e-3, "max gap " + fmt("%.2e", worst) + " over 100 instances"};
}

Outcome precoder_identities() {
  RngStream rng(505);
  double trace_err = 0.0, zf_err = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int N = 1 + static_cast<int>(rng.uniform() * 8);
    const int M = N + static_cast<int>(rng.uniform() * 12);
    const ComplexMatrix H = rng.cn_matrix(N, M);
    std::vector<double> p(N);
    for (auto& x : p) x = db_to_linear(uniform(rng, -10.0, 10.0));
    const GzfPrecoder g = build_gzf(H, p);
    ComplexMatrix H_DS = H;
    for (int k = 0; k < N; ++k) H_DS.row(k) /= std::sqrt(p[k]);
    trace_err = std::max(trace_err, std::abs(g.A.squaredNorm() - 1.0));
    const ComplexMatrix D = H_DS * g.A - g.chi * ComplexMatrix::Identity(N, N);
    zf_err = std::max(zf_err, D.cwiseAbs().maxCoeff());
  }
  return {trace_err < 1e-9 && zf_err < 1e-9,
          "max |Tr-1| " + fmt("%.1e", trace_err) + ", max |H_DS A - chi I| " + fmt("%.1e", zf_err)};
}

Outcome estimation_statistics() {
  const auto cfg = make_homogeneous(4, 2, 30, 3, 1.0, db_to_linear(3.0));
  const double rt = cfg.rho_r[0] * cfg.tau_r;
  RngStream rng(606);
  std::vector<double> est, err;
  for (int t = 0; t < 100000; ++t) {
    const ChannelDraw ch = draw_channel(cfg.M, cfg.K, rng);
    const ChannelEstimate e = lmmse_estimate(reverse_train(ch, cfg, rng), cfg);
    const ComplexMatrix E = ch.H - e.H_hat;
    est.push_back(e.H_hat(t % 2, t % 4).real());
    est.push_back(e.H_hat(t % 2, t % 4).imag());
    err.push_back(E(t % 2, t % 4).real());
    err.push_back(E(t % 2, t % 4).imag());
  }
  // Real and imaginary parts each carry half of the complex variance.
  const double v_est = 2 * test::var_of(est), v_err = 2 * test::var_of(err);
  const double e_est = rt / (1 + rt), e_err = 1 / (1 + rt);
  const double c = test::corr_of(est, err);
  const double se = 1.0 / std::sqrt(static_cast<double>(est.size()));
  const bool ok = std::abs(v_est / e_est - 1) < 0.02 && std::abs(v_err / e_err - 1) < 0.02 &&
                  std::abs(c) < 3 * se;
  std::ostringstream d;
  d << "var(H_hat)=" << fmt("%.4f", v_est) << " (" << fmt("%.4f", e_est) << "), var(err)="
    << fmt("%.4f", v_err) << " (" << fmt("%.4f", e_err) << "), corr=" << fmt("%.2e", c)
    << " (3se=" << fmt("%.2e", 3 * se) << ")";
  return {ok, d.str()};
}

Outcome asymptotic_chi() {
  const auto cfg = make_homogeneous(256, 4, 30, 4, db_to_linear(10.0), db_to_linear(0.0));
  const std::vector<double> p(4, 1.0);
  const auto s = estimate_chi_stats(cfg, SelectionRule::all(), p, 4, 2000, RngStream(707));
  const double expected = large_m_chi(p, asymptotic_coefficients(cfg).a, cfg.M);
  const double rel = s.mean / expected - 1;
  return {std::abs(rel) < 0.02,
          "E[chi]=" + fmt("%.4f", s.mean) + " vs " + fmt("%.4f", expected) + " (" + fmt("%+.2f%%", 100 * rel) + ")"};
}

Outcome posterior_oracle() {
  RngStream rng(808);
  Eigen::VectorXcd values(10000);
  ComplexMatrix predicted(10000, 1);
  for (int i = 0; i < 10000; ++i) predicted(i, 0) = values(i) = rng.normal();
  Eigen::RowVectorXcd y(1);
  y(0) = 1.0;
  const double est = conditional_mean_mc(values, predicted, y, 1.0, NoiseLaw::Real).real();
  const double target = oracle::gaussian_conditional_mean(1.0, 1.0, 1.0);
  const double rel = est / target - 1;

  // Law of total variance for a user's own gain under one forward pilot.
  const auto cfg = make_homogeneous(4, 4, 30, 4, db_to_linear(10.0), db_to_linear(0.0));
  const PrecoderFn zf = [](const ChannelEstimate& e, const SystemConfig&, RngStream&) {
    std::vector<int> users(e.H_hat.rows());
    for (int k = 0; k < e.H_hat.rows(); ++k) users[k] = k;
    const GzfPrecoder g = build_gzf(e.H_hat, std::vector<double>(users.size(), 1.0), users);
    return PrecodedLink{g.A, g.selection};
  };
  const PosteriorBank bank = build_posterior_bank(cfg, zf, 1, 2000, RngStream(809));
  const RngStream outer(810);
  std::vector<double> post_var, mre, mim, gre, gim;
  for (int t = 0; t < 2000; ++t) {
    RngStream r = outer.fork(t);
    const EstimateDraw d = draw_estimate_direct(cfg, r);
    const PrecodedLink link = zf(d.estimate, cfg, r);
    const PilotObservation obs = receive_pilots(d.channel.H, link, build_pilot_pattern(1, 4), cfg, r);
    const auto s = posterior_gain_stats(bank.users[0], obs.x.row(0));
    post_var.push_back(s.var_gain);
    mre.push_back(s.mean_gain.real());
    mim.push_back(s.mean_gain.imag());
    const auto g = effective_row(d.channel.H, link, cfg, 0)(0);
    gre.push_back(g.real());
    gim.push_back(g.imag());
  }
  const double total = test::var_of(gre) + test::var_of(gim);
  const double split = test::mean_of(post_var) + test::var_of(mre) + test::var_of(mim);
  const double ltv = split / total - 1;
  std::ostringstream d;
  d << "E[x|y=1]=" << fmt("%.4f", est) << " (" << fmt("%+.2f%%", 100 * rel) << "), total variance "
    << fmt("%.4f", total) << " vs E[var]+var[E] " << fmt("%.4f", split) << " (" << fmt("%+.2f%%", 100 * ltv) << ")";
  return {std::abs(rel) < 0.02 && std::abs(ltv) < 0.03, d.str()};
}

Outcome bound_dominance() {
  MonteCarloPlan plan;
  plan.stat_trials = 1000;
  plan.outer_trials = 60;
  plan.posterior_samples = 300;
  plan.bound_trials = 200;
  plan.svh_L = 20;
  int checked = 0, violations = 0;
  double min_margin = 1e300;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(900 + seed);
    const int K = 2 + static_cast<int>(rng.uniform() * 3);
    SystemConfig cfg = random_heterogeneous(K, rng);
    cfg.M = std::min(cfg.M, K + 6);
    for (auto kind : {PrecoderKind::Zf, PrecoderKind::GzfOpt, PrecoderKind::GzfSch, PrecoderKind::ZfSch,
                      PrecoderKind::Svh, PrecoderKind::ModSvh}) {
      const Scheme s{kind, static_cast<int>(seed % 3)};
      const int N = s.selects_users() ? std::max(1, K - 1) : K;
      const RngStream stream(seed, 1);
      const double rate = evaluate_scheme(cfg, s, N, plan, stream).weighted_sum;
      const double bound = evaluate_scheme_bound(cfg, s, N, plan, stream).weighted_sum;
      ++checked;
      violations += bound < rate;
      min_margin = std::min(min_margin, bound - rate);
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checked) +
                               " cases, min margin " + fmt("%.3f", min_margin) + " b/s/Hz"};
}

Outcome effective_noise_uncorrelated() {
  const auto cfg = make_homogeneous(16, 4, 30, 4, db_to_linear(10.0), db_to_linear(0.0));
  const double rho = cfg.rho_f[0];
  // Mean gain from an independent long run.
  const double mean_chi =
      estimate_chi_stats(cfg, SelectionRule::all(), std::vector<double>(4, 1.0), 4, 1000000, RngStream(1001)).mean;
  RngStream rng(1002);
  const std::size_t n = 100000;
  std::complex<double> cross = 0.0;
  double ww = 0.0, ss = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const EstimateDraw d = draw_estimate_direct(cfg, rng);
    const GzfPrecoder g = build_gzf(d.estimate.H_hat, std::vector<double>(4, 1.0));
    const Eigen::VectorXcd s = rng.cn_matrix(4, 1);
    const std::complex<double> y = std::sqrt(rho) * (d.channel.H.row(0) * g.A * s).value() + rng.cn();
    const std::complex<double> w = y - std::sqrt(rho) * mean_chi * s(0);
    cross += w * std::conj(s(0));
    ww += std::norm(w);
    ss += std::norm(s(0));
  }
  const double c = std::abs(cross) / std::sqrt(ww * ss);
  const double limit = 3.0 / std::sqrt(static_cast<double>(n));
  return {c < limit, "|corr|=" + fmt("%.2e", c) + " (limit " + fmt("%.2e", limit) + ")"};
}

Outcome heterogeneous_ordering() {
  bool ok = true;
  std::ostringstream d;
  for (int M : {16, 32}) {
    ScenarioSpec spec;
    spec.params = heterogeneous_preset(M);
    spec.schemes = {Scheme{PrecoderKind::Zf, 0}, Scheme{PrecoderKind::GzfOpt, 0}, Scheme{PrecoderKind::GzfSch, 0}};
    spec.trials = 2000;
    spec.seed = 11;
    const auto rows = run_scenario(spec);
    std::map<std::string, ResultRow> by;
    for (const auto& r : rows) by[r.scheme] = r;
    const auto& s0 = by.at(spec.schemes[0].label());
    const auto& s1 = by.at(spec.schemes[1].label());
    const auto& s2 = by.at(spec.schemes[2].label());
    ok = ok && s2.net_rate >= s1.net_rate - std::max(s1.half_width, s2.half_width);
    ok = ok && s1.net_rate >= s0.net_rate - std::max(s0.half_width, s1.half_width);
    d << "M=" << M << ": S0=" << fmt("%.2f", s0.net_rate) << " S1=" << fmt("%.2f", s1.net_rate)
      << " S2=" << fmt("%.2f", s2.net_rate) << " ";
  }
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"table-spot-values", table_spot_checks},
      {"table-crossover", table_crossover},
      {"training-length-limits", training_limits},
      {"kkt-vs-grid", kkt_oracle},
      {"precoder-identities", precoder_identities},
      {"estimation-statistics", estimation_statistics},
      {"asymptotic-chi", asymptotic_chi},
      {"posterior-oracle", posterior_oracle},
      {"bound-dominance", bound_dominance},
      {"effective-noise-uncorrelated", effective_noise_uncorrelated},
      {"scheme-ordering", heterogeneous_ordering},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
