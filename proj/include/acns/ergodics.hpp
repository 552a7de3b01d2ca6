#pragma once

#include "acns/diagnostics.hpp"
#include "acns/dynamics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace acns {

struct Observable {
  std::string name;
  std::function<double(const CoupledState&)> fn;
};
using ObservableSet = std::vector<Observable>;

/// Scalar functionals of state: energy, squared norms, F' norm, barrier
/// integrals, and the first low-mode velocity coefficients.
ObservableSet standard_observables(const SpectralGrid& g,
                                   const PotentialSpec& pot,
                                   const BarrierFamily& barrier, double nu,
                                   double beta);

// -- Krylov-Bogoliubov time averages -----------------------------------------

struct KBWindow {
  double t = 0;
  std::vector<double> mu;  // one running average per observable
};

/// Running time-averages mu_n[f] = (1/t_n) int_0^{t_n} f, trapezoidal,
/// reported on a ladder of n_windows horizons.
std::vector<KBWindow> kb_average(const std::vector<double>& t,
                                 const std::vector<std::vector<double>>& series,
                                 int n_windows);

// -- empirical measures and support moments ----------------------------------

struct EmpiricalMeasure {
  double burn_in = 0;
  std::vector<std::string> names;
  std::vector<double> t;                     // append-only timestamps
  std::vector<std::vector<double>> samples;  // [observable][sample]

  void append(double time, const std::vector<double>& values);
};

struct MomentEstimate {
  std::string name;
  double mean = 0;
  double std_error = 0;
  bool plateau = false;
  double drift = 0;  // relative half-window drift
};

std::vector<MomentEstimate> support_moments(const EmpiricalMeasure& em);

// -- Foias-Prodi synchronization experiment ----------------------------------

struct FPArm {
  std::vector<double> t;
  std::vector<std::vector<double>> sync;  // [seed][checkpoint]
  std::vector<double> median;             // per checkpoint
  double median_final_over_initial = 0;
  double log_slope = 0;  // least-squares slope of log(median) over time
};

struct FPReport {
  FPArm nudged;
  FPArm control;  // N = 0 arm, same seeds and noise
  double envelope_rate = 0;  // 1/4 min{nu lambda_N, beta^2/K_Delta^2}
};

/// Runs (AC_NS) from initialA and the nudged companion from initialB under
/// shared noise, per seed; the control arm repeats with N = 0.
FPReport foias_prodi_experiment(
    const SpectralGrid& g, const PotentialSpec& pot, const StepperConfig& cfg,
    const VelocityNoiseSpec& vspec, const PhaseNoiseSpec& pspec,
    const CoupledState& initialA, const CoupledState& initialB, int nudge_N,
    double horizon, const std::vector<std::uint64_t>& seeds, int sample_stride,
    double K_Delta, int n_threads = 1);

// -- stopping-time tails -------------------------------------------------------

/// Structural form of the epsilon offset, built from the initial data.
double epsilon_from_initial(const SpectralGrid& g, const PotentialSpec& pot,
                            const BarrierFamily& barrier,
                            const ConstantsTable& constants, double nu,
                            double beta, const CoupledState& initialA,
                            const CoupledState& initialB);

struct TailReport {
  std::vector<double> R;
  std::vector<double> p_hit;  // empirical P(tau_{R,eps} < horizon)
  double eps = 0;
  double loglog_slope = 0;
};

TailReport stopping_tail(const SpectralGrid& g, const PotentialSpec& pot,
                         const StepperConfig& cfg,
                         const VelocityNoiseSpec& vspec,
                         const PhaseNoiseSpec& pspec,
                         const BarrierFamily& barrier,
                         const ConstantsTable& constants,
                         const CoupledState& initialA,
                         const CoupledState& initialB, int nudge_N,
                         const std::vector<double>& R_grid, double horizon,
                         int ensemble, std::uint64_t base_seed,
                         double eps_override = -1.0, int n_threads = 1);

// -- Wasserstein diagnostics ---------------------------------------------------

/// 1D empirical W1: sorted-sample mean absolute difference for equal sizes,
/// quantile coupling otherwise.
double wasserstein1(std::vector<double> a, std::vector<double> b);

/// tanh^{-1}-augmented state distance
/// |u1-u2|_H + |phi1-phi2|_{V2} + |atanh(phi1)-atanh(phi2)|_inf.
double rho_distance(const SpectralGrid& g, const CoupledState& a,
                    const CoupledState& b);

struct MixingPoint {
  double t = 0;
  double W1 = 0;
  double rho = 0;  // between the first members of the two ensembles
};

/// W1(t) between the observable's empirical laws of two independent-noise
/// ensembles started from initialA and initialB.
std::vector<MixingPoint> mixing_curve(
    const SpectralGrid& g, const PotentialSpec& pot, const StepperConfig& cfg,
    const VelocityNoiseSpec& vspec, const PhaseNoiseSpec& pspec,
    const CoupledState& initialA, const CoupledState& initialB,
    const Observable& observable, const std::vector<double>& checkpoints,
    int ensemble, std::uint64_t base_seed, int n_threads = 1);

}  // namespace acns
