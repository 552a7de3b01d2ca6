#pragma once

#include "acns/noise.hpp"
#include "acns/potential.hpp"
#include "acns/spectral.hpp"

#include <functional>
#include <optional>

namespace acns {

struct CoupledState {
  SolenoidalField u;
  ScalarField phi;
  double t = 0.0;

  static CoupledState zero(const SpectralGrid& g) {
    return CoupledState{SolenoidalField::zero(g), ScalarField::zero(g), 0.0};
  }
};

struct StepperConfig {
  double dt = 1e-3;
  double nu = 0.1;
  double beta = 10.0;
  double newton_tol = 1e-12;
  int newton_max = 50;
  // test hooks for the linear system: drop individual nonlinear couplings
  bool ns_nonlinearity = true;
  bool advection = true;
  bool korteweg = true;
  double blowup_factor = 1e6;
};

struct NudgeConfig {
  int N = 0;
  double eta = 0.0;
};

/// Default nudging gain eta = lambda_N * nu / 2.
NudgeConfig make_nudge(const SpectralGrid& g, int N, double nu);

/// Chemical potential w = -beta * lap(phi) + F'(phi), Laplacian spectral.
ScalarField chemical_potential(const SpectralGrid& g, const PotentialSpec& pot,
                               const ScalarField& phi, double beta);

/// Leray-projected, dealiased Korteweg force w * grad(phi).
SolenoidalField korteweg_force(const SpectralGrid& g, const ScalarField& w,
                               const ScalarField& phi);

/// One semi-implicit Euler-Maruyama step of the coupled system; with a
/// nudge configuration the relaxation -eta P_N(u - reference) is treated
/// linearly implicitly in u and explicitly in the reference, which callers
/// pass at the updated time level.
/// The scalar stage x + dt*theta*atanh(x) = rhs keeps |phi| < 1 strictly.
CoupledState step(const SpectralGrid& g, const PotentialSpec& pot,
                  const StepperConfig& cfg, const VelocityNoiseSpec& vspec,
                  const PhaseNoiseSpec& pspec, const CoupledState& state,
                  const NoiseIncrements& inc,
                  const NudgeConfig* nudge = nullptr,
                  const SolenoidalField* reference_u = nullptr);

/// Free-energy value used by the blow-up guard (kinetic + interface +
/// normalized potential).
double guard_energy(const SpectralGrid& g, const PotentialSpec& pot,
                    const StepperConfig& cfg, const CoupledState& s);

using StepCallback = std::function<void(const CoupledState&, int)>;

/// Advances the system over [0, T]; the callback receives the state after
/// every step. Aborts when the energy exceeds blowup_factor times its
/// initial value. The initial state is dealiased and Leray-projected.
CoupledState run(const SpectralGrid& g, const PotentialSpec& pot,
                 const StepperConfig& cfg, const VelocityNoiseSpec& vspec,
                 const PhaseNoiseSpec& pspec, CoupledState initial,
                 double horizon, const NoisePath& path,
                 const StepCallback& callback = nullptr,
                 const NudgeConfig* nudge = nullptr,
                 const SolenoidalField* reference_u = nullptr);

/// Number of steps for a horizon; throws unless dt divides T to rounding.
int step_count(double horizon, double dt);

}  // namespace acns
