#pragma once

#include "acns/config.hpp"
#include "acns/ergodics.hpp"
#include "acns/io.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace acns {

struct DispatchOptions {
  // sync / sweep
  std::string configB_path;
  int sync_N = -1;       // overrides nudge.N
  int sync_seeds = -1;   // number of shared-noise replicas
  double stopping_R = 8.0;
  // tail
  std::vector<double> R_grid = {1, 2, 4, 8, 16};
  int ensemble = 64;
  double horizon_override = -1.0;
  double eps_override = -1.0;  // negative: structural form from initial data
  // sweep
  std::vector<int> N_grid;
  std::vector<double> beta_grid;
  // check-condition
  double cc_nu = 0.1, cc_beta = 10.0, cc_lambdaN = 0.0;
  std::string cc_constants_path;
};

Manifest run_simulate(const RunConfig& cfg, const std::filesystem::path& out);
Manifest run_sync(const RunConfig& cfgA, const RunConfig& cfgB,
                  const DispatchOptions& opt, const std::filesystem::path& out);
Manifest run_ergodic(const RunConfig& cfg, const DispatchOptions& opt,
                     const std::filesystem::path& out);
Manifest run_tail(const RunConfig& cfg, const DispatchOptions& opt,
                  const std::filesystem::path& out);
Manifest run_sweep(const RunConfig& cfg, const DispatchOptions& opt,
                   const std::filesystem::path& out);
int run_check_condition(const DispatchOptions& opt, std::ostream& os);

/// Subcommand router; returns a process exit status.
int dispatch(const std::string& subcommand, const RunConfig& cfg,
             const DispatchOptions& opt, const std::filesystem::path& out,
             std::ostream& os);

}  // namespace acns
