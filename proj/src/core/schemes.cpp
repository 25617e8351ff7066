#include "tdd/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "tdd/parallel.hpp"
#include "tdd/selection.hpp"
#include "tdd/svh.hpp"

namespace tdd {

namespace {

struct KindName {
  PrecoderKind kind;
  const char* id;
  const char* label;
};

constexpr KindName kKinds[] = {
    {PrecoderKind::Zf, "zf", "ZF"},
    {PrecoderKind::GzfOpt, "gzf-opt", "GZF-Opt"},
    {PrecoderKind::GzfSch, "gzf-sch", "GZF-Sch"},
    {PrecoderKind::ZfSch, "zf-sch", "ZF-Sch"},
    {PrecoderKind::Svh, "svh", "SVH"},
    {PrecoderKind::ModSvh, "mod-svh", "Mod-SVH"},
};

const KindName& entry(PrecoderKind kind) {
  for (const auto& e : kKinds)
    if (e.kind == kind) return e;
  throw std::logic_error("unknown precoder kind");
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

ComplexMatrix rows_of(const ComplexMatrix& H, const std::vector<int>& idx) {
  ComplexMatrix out(static_cast<Eigen::Index>(idx.size()), H.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = H.row(idx[i]);
  return out;
}

int positive_count(const std::vector<double>& p) {
  return static_cast<int>(std::count_if(p.begin(), p.end(), [](double v) { return v > 0.0; }));
}

SelectionRule rule_for(const Scheme& scheme, const std::vector<double>& p) {
  switch (scheme.kind) {
    case PrecoderKind::GzfSch:
      return SelectionRule::weighted_norm(p);
    case PrecoderKind::ZfSch:
      return SelectionRule::top_norm();
    default:
      return SelectionRule::all();
  }
}

// Selection size actually used by a scheme: non-selecting schemes serve everyone.
int effective_n(const Scheme& scheme, const SystemConfig& cfg, int N) {
  if (!scheme.selects_users()) return cfg.K;
  if (N < 1 || N > cfg.K) throw ConfigError("invalid config: selection size must satisfy 1 <= N <= K");
  return N;
}

// True when the served set changes from one interval to the next, which
// costs a signaling symbol per user.
bool random_selection(const Scheme& scheme, const SystemConfig& cfg, int N,
                      const std::vector<double>& p) {
  return scheme.selects_users() && N < positive_count(p) && N < cfg.K;
}

SystemConfig with_pilots(SystemConfig cfg, const Scheme& scheme) {
  cfg.tau_f = scheme.forward_pilots;
  return cfg;
}

void finish(RateReport& r, const SystemConfig& cfg, const Scheme& scheme, bool random, int tau_f,
            int N) {
  r.scheme = scheme.label();
  r.tau_r_used = cfg.tau_r;
  r.tau_f_used = tau_f;
  r.N_used = N;
  r.net = net_rate(cfg, r.weighted_sum, cfg.tau_r, tau_f, random ? N : cfg.K);
}

double z95_half_width(const std::vector<double>& values) {
  const auto n = values.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return 1.959963984540054 * std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

// Reverse-pilot-only rate of a GZF-family scheme from chi statistics.
RateReport reverse_only(const SystemConfig& cfg, const Scheme& scheme, int N,
                        const MonteCarloPlan& plan, const RngStream& rng) {
  const auto p = scheme_parameters(scheme, cfg);
  const auto samples = sample_chi(cfg, rule_for(scheme, p), p, N, plan.stat_trials, rng);
  const ChiStats chi = summarize_chi(samples, 0, samples.size());
  const SelectionStats sel = summarize_selection(samples, cfg.K, 0, samples.size());
  RateReport r = rate_reverse_only(cfg, p, chi, sel.gamma);

  const int batches = std::max(1, plan.batches);
  if (batches > 1 && samples.size() >= static_cast<std::size_t>(2 * batches)) {
    std::vector<double> nets;
    const std::size_t per = samples.size() / batches;
    for (int b = 0; b < batches; ++b) {
      const std::size_t lo = b * per;
      const std::size_t hi = b + 1 == batches ? samples.size() : lo + per;
      const ChiStats c = summarize_chi(samples, lo, hi);
      const SelectionStats s = summarize_selection(samples, cfg.K, lo, hi);
      nets.push_back(rate_reverse_only(cfg, p, c, s.gamma).net);
    }
    r.half_width = z95_half_width(nets);
  }
  const bool random = random_selection(scheme, cfg, N, p);
  finish(r, cfg, scheme, random, 0, N);
  return r;
}

}  // namespace

bool Scheme::selects_users() const {
  return kind == PrecoderKind::GzfSch || kind == PrecoderKind::ZfSch;
}

bool Scheme::zero_forcing() const {
  return kind != PrecoderKind::Svh && kind != PrecoderKind::ModSvh;
}

std::string Scheme::label() const {
  return std::string(entry(kind).label) + "-FP(" + std::to_string(forward_pilots) + ")";
}

std::string Scheme::id() const {
  return std::string(entry(kind).id) + ":fp" + std::to_string(forward_pilots);
}

std::string to_string(PrecoderKind kind) { return entry(kind).id; }

Scheme Scheme::parse(const std::string& text) {
  const std::string s = lower(text);
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  Scheme out;
  bool found = false;
  for (const auto& e : kKinds)
    if (head == e.id) {
      out.kind = e.kind;
      found = true;
    }
  if (!found) throw ConfigError("invalid config: unknown scheme '" + text + "'");
  if (colon != std::string::npos) {
    const std::string tail = s.substr(colon + 1);
    if (tail.size() < 3 || tail.rfind("fp", 0) != 0)
      throw ConfigError("invalid config: scheme suffix must be fp<n> in '" + text + "'");
    const std::string digits = tail.substr(2);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ConfigError("invalid config: bad forward pilot count in '" + text + "'");
    out.forward_pilots = std::stoi(digits);
  }
  return out;
}

std::vector<double> scheme_parameters(const Scheme& scheme, const SystemConfig& cfg) {
  if (scheme.kind == PrecoderKind::GzfOpt || scheme.kind == PrecoderKind::GzfSch)
    return optimize_precoder_params(cfg).p_bar.p;
  return std::vector<double>(cfg.K, 1.0);
}

PrecoderFn make_precoder(const Scheme& scheme, const SystemConfig& cfg, int N,
                         const MonteCarloPlan& plan) {
  const int n = effective_n(scheme, cfg, N);
  if (scheme.zero_forcing()) {
    const auto p = scheme_parameters(scheme, cfg);
    const SelectionRule rule = rule_for(scheme, p);
    return [p, rule, n](const ChannelEstimate& est, const SystemConfig& c, RngStream&) {
      Selection sel = apply_rule(rule, est.H_hat, c, n);
      std::erase_if(sel.indices, [&](int k) { return !(p[k] > 0.0); });
      std::vector<double> p_s;
      for (int k : sel.indices) p_s.push_back(p[k]);
      GzfPrecoder g = build_gzf(rows_of(est.H_hat, sel.indices), p_s, sel.indices);
      return PrecodedLink{std::move(g.A), std::move(g.selection)};
    };
  }
  const bool mod = scheme.kind == PrecoderKind::ModSvh;
  const int L = plan.svh_L;
  const int iterations = plan.svh_iterations;
  return [mod, L, iterations](const ChannelEstimate& est, const SystemConfig& c, RngStream& rng) {
    const ComplexMatrix Heff = scale_rows_by_snr(est.H_hat, c.rho_f);
    SvhResult res;
    if (mod) {
      std::vector<double> err(c.K);
      for (int k = 0; k < c.K; ++k) err[k] = c.rho_f[k] * est.err_var[k];
      res = mod_svh_precoder(Heff, err, L, iterations, rng);
    } else {
      SvhProblem problem;
      problem.Heff = Heff;
      problem.iterations = iterations;
      res = svh_precoder(problem);
    }
    PrecodedLink link;
    link.A = trace_normalize(res.A);
    link.users.resize(c.K);
    std::iota(link.users.begin(), link.users.end(), 0);
    return link;
  };
}

RateReport evaluate_scheme(const SystemConfig& cfg_in, const Scheme& scheme, int N,
                           const MonteCarloPlan& plan, const RngStream& rng) {
  const SystemConfig cfg = validate_config(with_pilots(cfg_in, scheme));
  const int n = effective_n(scheme, cfg, N);
  if (scheme.zero_forcing() && scheme.forward_pilots == 0) return reverse_only(cfg, scheme, n, plan, rng);

  const auto p = scheme_parameters(scheme, cfg);
  RateReport r = rate_forward_pilots(cfg, make_precoder(scheme, cfg, n, plan), scheme.forward_pilots,
                                     plan.outer_trials, plan.posterior_samples, rng);
  finish(r, cfg, scheme, random_selection(scheme, cfg, n, p), scheme.forward_pilots, n);
  return r;
}

RateReport evaluate_scheme_bound(const SystemConfig& cfg_in, const Scheme& scheme, int N,
                                 const MonteCarloPlan& plan, const RngStream& rng) {
  SystemConfig cfg = cfg_in;
  cfg.tau_f = 0;
  cfg = validate_config(cfg);
  const int n = effective_n(scheme, cfg, N);
  const auto p = scheme_parameters(scheme, cfg);
  RateReport r = scheme_upper_bound(cfg, make_precoder(scheme, cfg, n, plan), plan.bound_trials, rng);
  finish(r, cfg, scheme, random_selection(scheme, cfg, n, p), 0, n);
  r.scheme = std::string(entry(scheme.kind).label) + "-UB";
  return r;
}

namespace {

template <class Eval>
std::pair<int, RateReport> best_over_n(const SystemConfig& cfg, const Scheme& scheme, Eval eval) {
  if (!scheme.selects_users()) return {cfg.K, eval(cfg.K)};
  std::pair<int, RateReport> best{0, {}};
  best.second.net = -1.0;
  for (int N = cfg.K; N >= 1; --N) {
    if (N > cfg.M) continue;
    RateReport r = eval(N);
    if (r.net > best.second.net) best = {N, std::move(r)};
  }
  if (best.first == 0) throw ConfigError("invalid config: no feasible selection size (N <= M)");
  return best;
}

}  // namespace

std::pair<int, RateReport> optimize_selection_size(const SystemConfig& cfg, const Scheme& scheme,
                                                   const MonteCarloPlan& plan,
                                                   const RngStream& rng) {
  return best_over_n(cfg, scheme, [&](int N) { return evaluate_scheme(cfg, scheme, N, plan, rng); });
}

std::pair<int, RateReport> best_scheme_bound(const SystemConfig& cfg, const Scheme& scheme,
                                             const MonteCarloPlan& plan, const RngStream& rng) {
  return best_over_n(cfg, scheme,
                     [&](int N) { return evaluate_scheme_bound(cfg, scheme, N, plan, rng); });
}

std::pair<int, RateReport> optimize_training_length(const SystemConfig& cfg, const Scheme& scheme,
                                                    const MonteCarloPlan& plan,
                                                    const RngStream& rng) {
  const int tau_f = scheme.forward_pilots;
  const int hi = cfg.T - 1 - tau_f - cfg.comp_delay;
  if (hi < cfg.K) throw ConfigError("invalid config: no training length fits in T");

  // For homogeneous top-norm selection the eta statistics do not depend on
  // tau_r, so they are estimated once per N and reused across the sweep.
  const bool eta_path =
      scheme.kind == PrecoderKind::ZfSch && tau_f == 0 && cfg.is_homogeneous();
  std::map<int, EtaStats> eta_cache;
  auto eta_for = [&](int N) -> const EtaStats& {
    auto it = eta_cache.find(N);
    if (it == eta_cache.end())
      it = eta_cache.emplace(N, estimate_eta_stats(cfg.M, cfg.K, N, plan.stat_trials, rng)).first;
    return it->second;
  };

  std::pair<int, RateReport> best{0, {}};
  best.second.net = -1.0;
  for (int tau = cfg.K; tau <= hi; ++tau) {
    SystemConfig c = cfg;
    c.tau_r = tau;
    c.tau_f = tau_f;
    c = validate_config(c);
    std::pair<int, RateReport> here;
    if (eta_path) {
      here = best_over_n(c, scheme, [&](int N) {
        RateReport r = rate_homogeneous(c, N, eta_for(N));
        r.scheme = scheme.label();
        return r;
      });
    } else {
      here = optimize_selection_size(c, scheme, plan, rng);
    }
    if (here.second.net > best.second.net) best = {tau, std::move(here.second)};
  }
  return best;
}

RateReport restart_upper_bound(const SystemConfig& cfg_in, const MonteCarloPlan& plan,
                               const RngStream& rng) {
  SystemConfig cfg = cfg_in;
  cfg.tau_f = 0;
  cfg = validate_config(cfg);
  const std::size_t trials = plan.bound_trials;
  if (trials < 1) throw std::invalid_argument("trials >= 1 required");
  std::vector<double> values(trials, 0.0);
  parallel_for(trials, [&](std::size_t t) {
    RngStream stream = rng.fork(t);
    const EstimateDraw ed = draw_estimate_direct(cfg, stream);
    const ComplexMatrix Heff = scale_rows_by_snr(ed.estimate.H_hat, cfg.rho_f);
    std::vector<double> err(cfg.K);
    for (int k = 0; k < cfg.K; ++k) err[k] = cfg.rho_f[k] * ed.estimate.err_var[k];
    const RestartResult best =
        multi_restart_best(Heff, err, plan.restarts, plan.svh_L, plan.svh_iterations, stream.fork(1));
    values[t] = best.best_value;
  });
  RateReport r;
  r.per_user_rate.assign(cfg.K, 0.0);
  r.weighted_sum = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(trials);
  r.tau_r_used = cfg.tau_r;
  r.N_used = cfg.K;
  r.scheme = "C-UB-Opt";
  r.net = net_rate(cfg, r.weighted_sum, cfg.tau_r, 0, cfg.K);
  r.half_width = z95_half_width(values) * cfg.data_symbols() / cfg.T;
  return r;
}

}  // namespace tdd
