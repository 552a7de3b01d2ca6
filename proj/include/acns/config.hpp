#pragma once

#include "acns/diagnostics.hpp"
#include "acns/dynamics.hpp"
#include "acns/noise.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace acns {

/// Validation failure carrying every violated precondition, one per line,
/// each prefixed with the offending key path.
struct ConfigError : std::runtime_error {
  std::vector<std::string> issues;
  explicit ConfigError(std::vector<std::string> list);
};

struct InitialConfig {
  std::string kind = "random";  // "zero" or "random"
  double u_amplitude = 0.5;
  double u_decay = 1.0;
  int u_modes = 16;
  double phi_amplitude = 0.5;
  double phi_decay = 1.0;
  int phi_modes = 16;
  double phi_max = 0.8;
  std::uint64_t seed = 42;
  // per-field overrides (0: fall back to seed), so paired experiments can
  // share one field while varying the other
  std::uint64_t u_seed = 0;
  std::uint64_t phi_seed = 0;
};

struct RunConfig {
  int schema_version = 1;

  int nx = 64, ny = 64;
  double Lx = 2.0 * M_PI, Ly = 2.0 * M_PI;

  double nu = 0.1, beta = 10.0;
  double theta = 1.0, theta0 = 2.0;
  int s0 = 2;

  double sigma0 = 0.05;
  double decay_a = 1.0;
  int M = 16;
  int K_active = 16;
  std::vector<double> gamma_k = {0.02, 0.02, 0.02, 0.02};
  int q = 3;
  bool u_single_phase = false;

  double dt = 1e-3;
  double horizon = 1.0;
  int snapshot_stride = 0;
  int sample_stride = 10;
  double burn_in_fraction = 0.2;

  int nudge_N = 0;
  double nudge_eta = 0.0;
  bool nudge_eta_auto = true;

  std::vector<std::uint64_t> seeds = {1};
  std::string constants_path;
  int threads = 0;  // 0: hardware concurrency

  // -- factories over the validated config --
  SpectralGrid make_grid() const;
  PotentialSpec make_potential() const;
  BarrierFamily make_barrier() const;
  StepperConfig make_stepper() const;
  VelocityNoiseSpec make_velocity_noise(const SpectralGrid& g) const;
  PhaseNoiseSpec make_phase_noise(const PotentialSpec& pot) const;
  NudgeConfig make_nudge_config(const SpectralGrid& g) const;
  CoupledState make_initial(const SpectralGrid& g) const;
  /// Embedding constants: measured on the grid, then overridden by the
  /// constants file if one is configured; L_G1/L_G2 from the noise specs.
  ConstantsTable resolve_constants(const SpectralGrid& g,
                                   const VelocityNoiseSpec& vspec,
                                   const PhaseNoiseSpec& pspec) const;
  int resolve_threads() const;

  InitialConfig initial;

  /// Canonical JSON rendering (sorted keys); basis of the config hash.
  std::string canonical_json() const;
  std::uint64_t hash() const;
};

/// Parses and validates; throws ConfigError listing every violation.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text);

/// Reads a constants table JSON ({"K_L":..,"c1":..,...}); missing keys keep
/// the provided defaults.
ConstantsTable load_constants(const std::filesystem::path& path,
                              ConstantsTable defaults);

}  // namespace acns
