#include <iostream>

#include "CLI11.hpp"
#include "cli/commands.hpp"

using namespace bbmsel::cli;

int main(int argc, char** argv) {
  CLI::App app{"Branching Brownian motion with selection: simulations and checks"};
  app.require_subcommand(1);

  RunOptions run;
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", run.config, "INI config with [law] [interval] [bbbm] [selection] [run]");
    sub->add_option("--manifest", run.manifest, "Rerun the manifest.json of an earlier run");
    sub->add_option("--replicas", run.replicas, "Number of replicas (overrides run.replicas)");
    sub->add_option("--seed", run.seed, "Base seed (overrides run.seed)");
    sub->add_option("--out", run.out, "Output directory")->required();
    sub->add_option("--threads", run.threads, "Worker threads (default: BBMSEL_THREADS or all cores)");
  };

  auto* sim = app.add_subcommand("simulate", "Run replicas of one mode and write series, logs and a manifest");
  add_run_flags(sim);
  sim->add_option("--mode", run.mode, "killed, nbbm, bbbm, bflat, bsharp, csharp or coupled (overrides run.mode)");
  sim->add_option("--timing", run.timing, "N-BBM selection timing: step-end or branch-events");
  sim->add_flag("--events", run.events, "Write branch and absorption event logs (killed mode)");
  sim->add_flag("--checkpoint", run.checkpoint, "Write the final population (nbbm mode)");

  auto* couple = app.add_subcommand("couple", "Run the three-level coupling with per-event ordering checks");
  add_run_flags(couple);
  couple->add_option("--inject-fault", run.inject_fault_at, "Break the ordering at this event index (test hook)");

  std::string check_out;
  auto* check = app.add_subcommand("kernels-selfcheck", "Check theta, heat-kernel and Green-function identities");
  check->add_option("--out", check_out, "Directory for selfcheck.json");

  LevyOptions lv;
  auto* levy = app.add_subcommand("levy", "Sample increments of the limiting Levy process");
  levy->add_option("--t", lv.t, "Increment length");
  levy->add_option("--replicas", lv.samples, "Number of samples");
  levy->add_option("--seed", lv.seed, "Seed");
  levy->add_option("--c", lv.c, "Drift constant of the exponent");
  levy->add_option("--truncation", lv.truncation, "Smallest jump sampled individually");
  levy->add_flag("!--no-gaussian", lv.gaussian_small_jumps, "Drop the Gaussian stand-in for small jumps");
  levy->add_option("--lambda", lv.lambdas, "Points for the characteristic-function comparison");
  levy->add_option("--out", lv.out, "Directory for levy.csv");
  levy->add_option("--threads", lv.threads, "Worker threads");

  std::string report_dir;
  double burn_in = 0.2;
  auto* report = app.add_subcommand("report", "Summarise a finished run directory");
  report->add_option("--out", report_dir, "Run directory")->required();
  report->add_option("--burn-in", burn_in, "Fraction of the horizon dropped before fitting speeds")
      ->check(CLI::Range(0.0, 0.9));

  app.add_subcommand("calibrate", "Recompute the fitted slack constants");

  CLI11_PARSE(app, argc, argv);

  std::string out_for_errors;
  try {
    if (*sim) return out_for_errors = run.out, cmd_simulate(run, false);
    if (*couple) return out_for_errors = run.out, cmd_simulate(run, true);
    if (*check) return cmd_selfcheck(check_out);
    if (*levy) return out_for_errors = lv.out, cmd_levy(lv);
    if (*report) return out_for_errors = report_dir, cmd_report(report_dir, burn_in);
    return cmd_calibrate();
  } catch (const std::exception& e) {
    return report_error(e, out_for_errors);
  }
}
