// Command-line front end for the TDD downlink simulator.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdd/experiments.hpp"
#include "tdd/parallel.hpp"

namespace {

constexpr const char* kSchemeHelp = R"(Schemes (id -> table label):
  zf:fp0        ZF-FP(0)       zero-forcing, all users, reverse pilots only
  gzf-opt:fp0   GZF-Opt-FP(0)  generalized ZF with optimized parameters
  gzf-sch:fp0   GZF-Sch-FP(0)  generalized ZF with weighted-norm selection
  zf-sch:fpN    ZF-Sch-FP(N)   ZF with top-norm selection, N forward pilots
  svh:fpN       SVH-FP(N)      sum-rate fixed point on the estimate
  mod-svh:fpN   Mod-SVH-FP(N)  fixed point averaged over estimation error
Upper-bound rows (*-UB) evaluate the genie bound of the same precoder;
ZF-Sch-UB takes the best selection size.)";

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out;
  bool upper_bound = false;
  int threads = 1;
};

void add_common(CLI::App* app, Common& c, bool with_bound) {
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--trials", c.trials, "Monte Carlo trials for the statistics")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "CSV output path (default: stdout)");
  app->add_option("--threads", c.threads, "Worker threads (0: all cores)");
  if (with_bound) app->add_flag("--upper-bound", c.upper_bound, "Add the scheme upper bound column");
}

void emit(const std::vector<tdd::ResultRow>& rows, const Common& c) {
  if (c.out.empty()) {
    tdd::write_csv(rows, std::cout);
  } else {
    tdd::write_csv(rows, c.out);
  }
}

void apply(tdd::ScenarioSpec& spec, const Common& c) {
  if (c.seed) spec.seed = *c.seed;
  if (c.trials) spec.trials = *c.trials;
  if (c.upper_bound) spec.upper_bound = true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TDD multiuser downlink simulator"};
  app.footer(kSchemeHelp);
  app.require_subcommand(1);

  Common run_opts, table_opts, sweep_opts, train_opts;
  std::string run_config, sweep_config, train_config;
  std::vector<std::string> run_schemes;
  std::string sweep_axis;
  std::vector<double> sweep_values;
  std::string train_scheme = "zf-sch:fp0";
  std::vector<double> train_snrs = {-15, -10, -5, 0, 5, 10, 15, 20, 25, 30, 35};

  auto* run = app.add_subcommand("run", "Evaluate the schemes of a scenario file");
  run->add_option("--config", run_config, "Scenario file (YAML or JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--scheme", run_schemes, "Override the scheme list");
  add_common(run, run_opts, true);

  auto* table = app.add_subcommand("table1", "Reproduce the M = K = 8 scheme comparison grid");
  add_common(table, table_opts, false);

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter of a scenario file");
  sweep->add_option("--config", sweep_config, "Scenario file (YAML or JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", sweep_axis, "snr_f_db, K, M or tau_r (overrides the file)");
  sweep->add_option("--values", sweep_values, "Sweep values (overrides the file)");
  add_common(sweep, sweep_opts, true);

  auto* train = app.add_subcommand("training-sweep", "Optimal reverse training length versus SNR");
  train->add_option("--config", train_config, "Base scenario (default M=32, K=8, T=30)")->check(CLI::ExistingFile);
  train->add_option("--scheme", train_scheme, "Scheme id");
  train->add_option("--snr", train_snrs, "Forward SNRs in dB");
  add_common(train, train_opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<tdd::ResultRow> rows;
    if (*run) {
      tdd::set_thread_count(run_opts.threads);
      tdd::ScenarioSpec spec = tdd::load_scenario(run_config);
      if (!run_schemes.empty()) {
        spec.schemes.clear();
        for (const auto& s : run_schemes) spec.schemes.push_back(tdd::Scheme::parse(s));
      }
      apply(spec, run_opts);
      rows = tdd::run_scenario(spec);
      emit(rows, run_opts);
    } else if (*table) {
      tdd::set_thread_count(table_opts.threads);
      rows = tdd::reproduce_table1(table_opts.seed.value_or(1), table_opts.trials.value_or(10000));
      emit(rows, table_opts);
    } else if (*sweep) {
      tdd::set_thread_count(sweep_opts.threads);
      tdd::ScenarioSpec spec = tdd::load_scenario(sweep_config);
      if (!sweep_axis.empty()) spec.axis = tdd::parse_sweep_axis(sweep_axis);
      if (!sweep_values.empty()) spec.sweep_values = sweep_values;
      if (spec.axis == tdd::SweepAxis::None)
        throw tdd::ConfigError("invalid config: sweep needs an axis (file 'sweep' key or --axis)");
      apply(spec, sweep_opts);
      rows = tdd::run_scenario(spec);
      emit(rows, sweep_opts);
    } else if (*train) {
      tdd::set_thread_count(train_opts.threads);
      tdd::ScenarioSpec base;
      if (!train_config.empty()) {
        base = tdd::load_scenario(train_config);
      } else {
        base.params.M = 32;
        base.params.K = 8;
        base.params.T = 30;
      }
      apply(base, train_opts);
      rows = tdd::training_sweep(base.params, tdd::Scheme::parse(train_scheme), train_snrs,
                                 base.seed, base.trials);
      emit(rows, train_opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "tddsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
