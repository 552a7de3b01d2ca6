#pragma once

#include "acns/dynamics.hpp"
#include "acns/noise.hpp"
#include "acns/potential.hpp"
#include "acns/spectral.hpp"

#include <limits>
#include <vector>

namespace acns {

struct EnergyRecord {
  double kinetic = 0;      // 1/2 |u|_H^2
  double interface = 0;    // beta/2 |grad phi|^2
  double potential = 0;    // int F(phi) + c0
  double total = 0;
  double dissipation = 0;  // nu|grad u|^2 + beta^2|lap phi|^2 + |F'|_H^2
  double w_norm_sq = 0;    // |w|_H^2, the energy-law dissipation partner
  double time = 0;
};

EnergyRecord energy(const SpectralGrid& g, const PotentialSpec& pot,
                    const CoupledState& state, double nu, double beta);

/// Embedding and structural constants feeding the synchronization
/// machinery. The K's are measurable on the discrete box; c1..c3 and C4
/// have no computable closed form and are user-supplied (default 1).
struct ConstantsTable {
  double K_L = 1, K_GN = 1, K_Delta = 1;
  double K4 = 1;       // V1 -> L^4 embedding
  double K_ratio = 1;  // V1 -> L^{2 gamma/(gamma-2)} embedding
  double C4 = 1;
  double c1 = 1, c2 = 1, c3 = 1;
  double L_G1 = 0, L_G2 = 0;
  double gamma = 3;

  double bC_G() const { return 2.0 * std::max(L_G1, L_G2); }
  double bK1() const {
    const double k8 = std::pow(K_L, 8);
    return std::max(27.0 * k8, 1024.0 * k8 * K_Delta * K_Delta);
  }
  double bK2() const {
    return 256.0 * std::pow(K_L, 4) * std::pow(K_GN, 4) * std::pow(K_Delta, 4);
  }
  double bK3() const { return 4.0 * K_ratio * K_ratio; }

  void validate() const;
};

/// Measures K_L, K_GN, K_Delta, K4, K_ratio as maxima of the defining
/// ratios over random smooth zero-mean fields.
ConstantsTable measure_constants(const SpectralGrid& g, int n_samples,
                                 std::uint64_t seed, double gamma);

/// Running decomposition of the process
///   Lambda(t) = (1/2 min{nu lambda_N, beta^2/K_D^2} - bC_G) t
///               - bK1/min{nu,beta}^3 * I_uu
///               - (L_G2 C4^4 + bK2/nu max{1,beta/nu}) * I_phi
///               - bK3/beta * (I_F + I_Ft)
/// with trapezoidal accumulation of the four integrals.
struct LambdaLedger {
  double t = 0;
  double I_uu = 0;   // int |u|_H^2 |u|_V^2
  double I_phi = 0;  // int |phi|_{V2}^2
  double I_F = 0;    // int |F''(phi)|_{Lgamma}^2
  double I_Ft = 0;   // int |F''(phi_nudged)|_{Lgamma}^2
  double prev_uu = 0, prev_phi = 0, prev_F = 0, prev_Ft = 0;
  double nu = 0, beta = 0, lambda_N = 0;
  ConstantsTable constants;

  double drift_slope() const {
    return 0.5 * std::min(nu * lambda_N,
                          beta * beta / (constants.K_Delta * constants.K_Delta)) -
           constants.bC_G();
  }
  double quarter_min() const {
    return 0.25 * std::min(nu * lambda_N,
                           beta * beta /
                               (constants.K_Delta * constants.K_Delta));
  }
  double lambda() const;
};

LambdaLedger make_lambda_ledger(const SpectralGrid& g, const PotentialSpec& pot,
                                double nu, double beta, double lambda_N,
                                const ConstantsTable& constants,
                                const CoupledState& state,
                                const CoupledState& nudged_state);

void update_lambda(LambdaLedger& ledger, const SpectralGrid& g,
                   const PotentialSpec& pot, const CoupledState& state,
                   const CoupledState& nudged_state, double dt);

/// tau_{R,eps} bookkeeping: the hit time, once set, never changes.
struct StoppingState {
  double R = 0;
  double eps = 0;
  double hit = std::numeric_limits<double>::infinity();
  bool is_hit() const { return std::isfinite(hit); }
};

/// Marks the hit at the ledger's current time if
/// 1/4 min{nu lambda_N, beta^2/K_D^2} t - Lambda(t) - eps >= R.
void stopping_time(const LambdaLedger& ledger, StoppingState& stopping);

/// The drift statistic whose first crossing of R defines tau.
double stopping_statistic(const LambdaLedger& ledger, double eps);

struct ConditionReport {
  bool satisfied = false;
  double lhs = 0;
  double rhs = 0;
};

/// Joint (N, beta) synchronization condition: compares
/// (1/4 min{nu lambda_N, beta^2/K_D^2} - bC_G) * min{three ratios}
/// against 3 max{c1+2, c2+2, 2(c3+1)}.
ConditionReport check_condition(double nu, double beta, double lambda_N,
                                const ConstantsTable& constants);

/// beta |grad(phi_A - phi_B)|^2 + |u_A - u_B|_H^2.
double sync_error(const SpectralGrid& g, const CoupledState& a,
                  const CoupledState& b, double beta);

struct GirsanovShift {
  Eigen::VectorXcd H;   // channel weights, both phases packed per mode
  double norm_sq = 0;   // |H|^2 at this instant
};

/// h = -eta G1^{-1} P_N(u_nudged - u); apply_G1 of it reproduces
/// -eta P_N(u_nudged - u).
GirsanovShift girsanov_shift(const SpectralGrid& g,
                             const VelocityNoiseSpec& vspec,
                             const SolenoidalField& u,
                             const SolenoidalField& u_nudged, double eta,
                             int N);

/// Trapezoidal accumulator for int |H(s)|^2 ds.
struct GirsanovLedger {
  double integral = 0;
  double prev = 0;
  bool primed = false;
  void add(double norm_sq, double dt) {
    if (primed) integral += 0.5 * dt * (prev + norm_sq);
    prev = norm_sq;
    primed = true;
  }
};

/// Stride-sampled a priori moment monitors.
struct MomentReport {
  std::vector<double> t;
  std::vector<double> phi_H, phi_V1, u_H;  // instantaneous norms
  std::vector<double> psi_s0;              // int Psi_{s0}(phi(t))
  // running time integrals of the estimate integrands
  std::vector<double> I_u_V2, I_lap_phi2, I_Fprime2, I_uu_V2, I_phi_V2sq,
      I_Fsecond2, I_psi_s0p1;
};

MomentReport moment_monitors(const SpectralGrid& g, const PotentialSpec& pot,
                             const BarrierFamily& barrier, double gamma,
                             const std::vector<CoupledState>& trajectory);

}  // namespace acns
