#include <catch_amalgamated.hpp>

#include "support.hpp"
#include "tdd/schemes.hpp"

using namespace tdd;
using Catch::Approx;

namespace {

MonteCarloPlan small_plan() {
  MonteCarloPlan plan;
  plan.stat_trials = 2000;
  plan.outer_trials = 100;
  plan.posterior_samples = 500;
  plan.bound_trials = 200;
  return plan;
}

}  // namespace

TEST_CASE("scheme identifiers") {
  const Scheme s = Scheme::parse("zf-sch:fp1");
  CHECK(s.kind == PrecoderKind::ZfSch);
  CHECK(s.forward_pilots == 1);
  CHECK(s.label() == "ZF-Sch-FP(1)");
  CHECK(s.id() == "zf-sch:fp1");
  CHECK(Scheme::parse("Mod-SVH:FP2").label() == "Mod-SVH-FP(2)");
  CHECK(Scheme::parse("gzf-opt") == Scheme{PrecoderKind::GzfOpt, 0});
  for (auto k : {PrecoderKind::Zf, PrecoderKind::GzfOpt, PrecoderKind::GzfSch, PrecoderKind::ZfSch,
                 PrecoderKind::Svh, PrecoderKind::ModSvh})
    for (int n : {0, 1, 3}) CHECK(Scheme::parse(Scheme{k, n}.id()) == Scheme{k, n});
  CHECK_THROWS_AS(Scheme::parse("mmse"), ConfigError);
  CHECK_THROWS_AS(Scheme::parse("zf:pilots"), ConfigError);
  CHECK_THROWS_AS(Scheme::parse("zf:fp-1"), ConfigError);
}

TEST_CASE("precoders are trace normalized and serve their users") {
  SystemConfig cfg = make_homogeneous(8, 4, 30, 4, 10.0, 1.0);
  cfg.rho_f = {1.0, 3.0, 10.0, 30.0};
  RngStream rng(1);
  const EstimateDraw d = draw_estimate_direct(cfg, rng);
  for (const char* id : {"zf", "gzf-opt", "gzf-sch", "zf-sch", "svh", "mod-svh"}) {
    const Scheme s = Scheme::parse(id);
    const PrecodedLink link = make_precoder(s, cfg, 2, small_plan())(d.estimate, cfg, rng);
    CHECK(link.A.squaredNorm() == Approx(1.0).epsilon(1e-12));
    CHECK(static_cast<int>(link.users.size()) == link.A.cols());
    CHECK(link.A.cols() == (s.selects_users() ? 2 : 4));
  }
}

TEST_CASE("weighted selection at N = K is the unselected scheme") {
  SystemConfig cfg = make_homogeneous(16, 6, 30, 6, 1.0, 1.0);
  cfg.rho_f = {1, 1, 3, 3, 10, 10};
  cfg.rho_r = {0.1, 0.1, 0.3, 0.3, 1, 1};
  const auto plan = small_plan();
  const RateReport s1 = evaluate_scheme(cfg, Scheme{PrecoderKind::GzfOpt, 0}, 6, plan, RngStream(2));
  const RateReport s2 = evaluate_scheme(cfg, Scheme{PrecoderKind::GzfSch, 0}, 6, plan, RngStream(2));
  CHECK(s2.weighted_sum == Approx(s1.weighted_sum).epsilon(1e-12));
  const auto best = optimize_selection_size(cfg, Scheme{PrecoderKind::GzfSch, 0}, plan, RngStream(2));
  CHECK(best.second.net >= s1.net - 1e-12);
}

TEST_CASE("selection size search") {
  const auto plan = small_plan();
  SECTION("one user") {
    const auto cfg = make_homogeneous(4, 1, 30, 1, 1.0, 0.1);
    CHECK(optimize_selection_size(cfg, Scheme{PrecoderKind::ZfSch, 0}, plan, RngStream(3)).first == 1);
  }
  SECTION("as many users as antennas") {
    const auto cfg = make_homogeneous(16, 16, 30, 16, 1.0, 0.1);
    const Scheme s{PrecoderKind::ZfSch, 0};
    const auto best = optimize_selection_size(cfg, s, plan, RngStream(4));
    CHECK(best.first < 16);
    double top = 0.0;
    for (int N = 1; N <= 16; ++N) top = std::max(top, evaluate_scheme(cfg, s, N, plan, RngStream(4)).net);
    CHECK(best.second.net == top);
  }
}

TEST_CASE("training length limits") {
  const auto plan = small_plan();
  const Scheme s{PrecoderKind::ZfSch, 0};
  auto low = make_homogeneous(32, 8, 30, 8, db_to_linear(-10.0), db_to_linear(-20.0));
  const int t_low = optimize_training_length(low, s, plan, RngStream(5)).first;
  CHECK((t_low == 14 || t_low == 15));
  auto high = make_homogeneous(32, 8, 30, 8, db_to_linear(40.0), db_to_linear(30.0));
  CHECK(optimize_training_length(high, s, plan, RngStream(5)).first == 8);

  // The general path (no closed form in eta) agrees on the extremes.
  const Scheme zf{PrecoderKind::Zf, 0};
  CHECK(optimize_training_length(high, zf, plan, RngStream(5)).first == 8);
}

TEST_CASE("training search returns the sweep maximum") {
  auto cfg = make_homogeneous(16, 4, 20, 4, db_to_linear(5.0), db_to_linear(-5.0));
  const auto plan = small_plan();
  const Scheme s{PrecoderKind::Zf, 0};
  const auto best = optimize_training_length(cfg, s, plan, RngStream(6));
  double top = -1.0;
  for (int tau = 4; tau <= 18; ++tau) {
    cfg.tau_r = tau;
    top = std::max(top, evaluate_scheme(cfg, s, 4, plan, RngStream(6)).net);
  }
  CHECK(best.second.net == top);
}

TEST_CASE("scheme bound dominates the achievable rate") {
  const auto cfg = make_homogeneous(6, 4, 30, 4, db_to_linear(10.0), db_to_linear(0.0));
  const auto plan = small_plan();
  for (const char* id : {"zf:fp0", "zf-sch:fp1", "svh:fp1", "mod-svh:fp2"}) {
    const Scheme s = Scheme::parse(id);
    const int N = s.selects_users() ? 3 : 4;
    const RateReport r = evaluate_scheme(cfg, s, N, plan, RngStream(7));
    const RateReport b = evaluate_scheme_bound(cfg, s, N, plan, RngStream(7));
    CHECK(b.net >= r.net);
  }
}

TEST_CASE("multi-restart bound at 15 dB") {
  auto cfg = make_homogeneous(8, 8, 30, 8, db_to_linear(15.0), db_to_linear(5.0));
  MonteCarloPlan plan;
  plan.bound_trials = 20;
  plan.restarts = 100;
  const RateReport r = restart_upper_bound(cfg, plan, RngStream(8));
  CHECK(r.net == Approx(15.28).epsilon(0.15));
}
