#include "acns/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Allen-Cahn-Navier-Stokes laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  acns::DispatchOptions opt;

  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    if (needs_config)
      cmd->add_option("--config", config_path, "run configuration (JSON)")
          ->required();
    cmd->add_option("--out", out_dir, "output directory");
  };

  auto* simulate = app.add_subcommand("simulate", "single-system trajectories");
  add_common(simulate);

  auto* sync = app.add_subcommand(
      "sync", "shared-noise synchronization experiment (nudged vs control)");
  sync->add_option("--configA", config_path, "reference run configuration")
      ->required();
  sync->add_option("--configB", opt.configB_path,
                   "companion configuration (defaults to configA)");
  sync->add_option("--N", opt.sync_N, "number of nudged modes");
  sync->add_option("--seeds", opt.sync_seeds, "number of shared-noise seeds");
  sync->add_option("--R", opt.stopping_R, "stopping-time threshold R");
  sync->add_option("--out", out_dir, "output directory");

  auto* ergodic =
      app.add_subcommand("ergodic", "invariant-measure moment estimation");
  add_common(ergodic);
  ergodic->add_option("--horizon", opt.horizon_override, "time horizon");
  ergodic->add_option("--ensemble", opt.ensemble, "ensemble size");

  auto* tail = app.add_subcommand("tail", "stopping-time tail study");
  add_common(tail);
  tail->add_option("--R-grid", opt.R_grid, "thresholds R")->delimiter(',');
  tail->add_option("--horizon", opt.horizon_override, "time horizon");
  tail->add_option("--ensemble", opt.ensemble, "ensemble size");
  tail->add_option("--eps", opt.eps_override,
                   "offset epsilon (default: structural form from the "
                   "initial data)");

  auto* sweep = app.add_subcommand(
      "sweep", "(N, beta) synchronization-threshold sweep");
  add_common(sweep);
  sweep->add_option("--N-grid", opt.N_grid, "nudged-mode counts")
      ->delimiter(',');
  sweep->add_option("--beta-grid", opt.beta_grid, "phase viscosities")
      ->delimiter(',');
  sweep->add_option("--seeds", opt.sync_seeds, "seeds per cell");

  auto* check = app.add_subcommand("check-condition",
                                   "evaluate the joint (N, beta) condition");
  check->add_option("--nu", opt.cc_nu, "velocity viscosity")->required();
  check->add_option("--beta", opt.cc_beta, "phase viscosity")->required();
  check->add_option("--lambdaN", opt.cc_lambdaN, "Stokes eigenvalue lambda_N")
      ->required();
  check->add_option("--constants", opt.cc_constants_path,
                    "constants table (JSON)");

  CLI11_PARSE(app, argc, argv);

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (sub == "check-condition")
      return acns::run_check_condition(opt, std::cout);
    const acns::RunConfig cfg = acns::load_config(config_path);
    return acns::dispatch(sub, cfg, opt, out_dir, std::cout);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
