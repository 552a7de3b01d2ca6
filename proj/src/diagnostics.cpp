#include "acns/diagnostics.hpp"

#include <cmath>

namespace acns {

EnergyRecord energy(const SpectralGrid& g, const PotentialSpec& pot,
                    const CoupledState& state, double nu, double beta) {
  EnergyRecord rec;
  rec.time = state.t;
  rec.kinetic = 0.5 * std::pow(norm_Hsigma(g, state.u), 2);
  rec.interface = 0.5 * beta * std::pow(norm_V1(g, state.phi), 2);
  rec.potential = pot.off ? 0.0 : potential_energy(g, pot, state.phi);
  rec.total = rec.kinetic + rec.interface + rec.potential;

  const double grad_u_sq = std::pow(norm_Vsigma(g, state.u), 2);
  const double lap_phi_sq = std::pow(norm_V2(g, state.phi), 2);
  const double fp_sq =
      pot.off ? 0.0 : std::pow(f_prime_H_norm(g, pot, state.phi), 2);
  rec.dissipation = nu * grad_u_sq + beta * beta * lap_phi_sq + fp_sq;

  ScalarField w = chemical_potential(g, pot, state.phi, beta);
  rec.w_norm_sq = std::pow(norm_H(g, w), 2);
  return rec;
}

void ConstantsTable::validate() const {
  auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!pos(K_L) || !pos(K_GN) || !pos(K_Delta) || !pos(K4) || !pos(K_ratio) ||
      !pos(C4) || !pos(c1) || !pos(c2) || !pos(c3) || !pos(gamma) ||
      !(L_G1 >= 0.0) || !(L_G2 >= 0.0))
    throw std::invalid_argument(
        "ConstantsTable: all constants must be positive and finite");
}

ConstantsTable measure_constants(const SpectralGrid& g, int n_samples,
                                 std::uint64_t seed, double gamma) {
  ConstantsTable c;
  c.gamma = gamma;
  c.K_L = c.K_GN = c.K_Delta = c.K4 = c.K_ratio = 0.0;
  const double q_ratio = 2.0 * gamma / (gamma - 2.0);
  for (int s = 0; s < n_samples; ++s) {
    NoisePath path{seed, static_cast<std::uint64_t>(s)};
    const double decay = 0.5 + 1.5 * (s % 4) / 3.0;
    ScalarField f = random_scalar(g, path, 1.0, decay,
                                  std::min(g.n_modes(), 64), 0.0);
    const double H = norm_H(g, f);
    const double V1 = norm_V1(g, f);
    const double V2 = norm_V2(g, f);
    if (H == 0.0 || V1 == 0.0 || V2 == 0.0) continue;
    const double L4 = norm_Lq(g, f, 4.0);
    const double Lr = norm_Lq(g, f, q_ratio);
    const double Linf = f.v.abs().maxCoeff();
    const double H2 = std::sqrt(H * H + V1 * V1 + V2 * V2);

    ComplexGrid fh = forward(g, f.v);
    VectorField gr = gradient(g, fh);
    const double gx4 = g.cell_area() * gr.x.abs().pow(4.0).sum();
    const double gy4 = g.cell_area() * gr.y.abs().pow(4.0).sum();
    const double f4 = std::pow(L4, 4.0);
    const double W14 = std::pow(f4 + gx4 + gy4, 0.25);

    c.K_L = std::max(c.K_L, L4 / std::sqrt(H * V1));
    c.K_GN = std::max(c.K_GN, W14 / std::sqrt(Linf * H2));
    c.K_Delta = std::max(c.K_Delta, H2 / V2);
    c.K4 = std::max(c.K4, L4 / V1);
    c.K_ratio = std::max(c.K_ratio, Lr / V1);
  }
  return c;
}

namespace {

struct LambdaIntegrands {
  double uu = 0, phi = 0, F = 0, Ft = 0;
};

LambdaIntegrands lambda_integrands(const SpectralGrid& g,
                                   const PotentialSpec& pot, double gamma,
                                   const CoupledState& state,
                                   const CoupledState& nudged) {
  LambdaIntegrands v;
  const double uh = norm_Hsigma(g, state.u);
  const double uv = norm_Vsigma(g, state.u);
  v.uu = uh * uh * uv * uv;
  v.phi = std::pow(norm_V2(g, state.phi), 2);
  if (!pot.off) {
    v.F = std::pow(f_second_Lgamma_norm(g, pot, state.phi, gamma), 2);
    v.Ft = std::pow(f_second_Lgamma_norm(g, pot, nudged.phi, gamma), 2);
  }
  return v;
}

}  // namespace

double LambdaLedger::lambda() const {
  const double wphi =
      constants.L_G2 * std::pow(constants.C4, 4) +
      constants.bK2() / nu * std::max(1.0, beta / nu);
  return drift_slope() * t -
         constants.bK1() / std::pow(std::min(nu, beta), 3) * I_uu -
         wphi * I_phi - constants.bK3() / beta * (I_F + I_Ft);
}

LambdaLedger make_lambda_ledger(const SpectralGrid& g, const PotentialSpec& pot,
                                double nu, double beta, double lambda_N,
                                const ConstantsTable& constants,
                                const CoupledState& state,
                                const CoupledState& nudged_state) {
  constants.validate();
  LambdaLedger led;
  led.nu = nu;
  led.beta = beta;
  led.lambda_N = lambda_N;
  led.constants = constants;
  led.t = state.t;
  const LambdaIntegrands v =
      lambda_integrands(g, pot, constants.gamma, state, nudged_state);
  led.prev_uu = v.uu;
  led.prev_phi = v.phi;
  led.prev_F = v.F;
  led.prev_Ft = v.Ft;
  return led;
}

void update_lambda(LambdaLedger& ledger, const SpectralGrid& g,
                   const PotentialSpec& pot, const CoupledState& state,
                   const CoupledState& nudged_state, double dt) {
  if (std::abs(ledger.t + dt - state.t) > 1e-9 * std::max(1.0, state.t))
    throw std::invalid_argument(
        "update_lambda: ledger time does not precede state time by dt");
  const LambdaIntegrands v =
      lambda_integrands(g, pot, ledger.constants.gamma, state, nudged_state);
  ledger.I_uu += 0.5 * dt * (ledger.prev_uu + v.uu);
  ledger.I_phi += 0.5 * dt * (ledger.prev_phi + v.phi);
  ledger.I_F += 0.5 * dt * (ledger.prev_F + v.F);
  ledger.I_Ft += 0.5 * dt * (ledger.prev_Ft + v.Ft);
  ledger.prev_uu = v.uu;
  ledger.prev_phi = v.phi;
  ledger.prev_F = v.F;
  ledger.prev_Ft = v.Ft;
  ledger.t = state.t;
}

double stopping_statistic(const LambdaLedger& ledger, double eps) {
  return ledger.quarter_min() * ledger.t - ledger.lambda() - eps;
}

void stopping_time(const LambdaLedger& ledger, StoppingState& stopping) {
  if (stopping.is_hit()) return;
  if (stopping_statistic(ledger, stopping.eps) >= stopping.R)
    stopping.hit = ledger.t;
}

ConditionReport check_condition(double nu, double beta, double lambda_N,
                                const ConstantsTable& c) {
  c.validate();
  const double kd2 = c.K_Delta * c.K_Delta;
  const double drift = 0.25 * std::min(nu * lambda_N, beta * beta / kd2) -
                       c.bC_G();
  const double r1 = nu * std::pow(std::min(nu, beta), 3) /
                    (c.bK1() * (1.0 + 1.0 / (nu * nu)));
  const double r2 = beta * beta * nu * nu /
                    (c.L_G2 * std::pow(c.K4, 4) * nu * nu +
                     c.bK2() * std::max(nu, beta));
  const double r3 = beta / c.bK3();
  ConditionReport rep;
  rep.lhs = drift * std::min({r1, r2, r3});
  rep.rhs = 3.0 * std::max({c.c1 + 2.0, c.c2 + 2.0, 2.0 * (c.c3 + 1.0)});
  rep.satisfied = rep.lhs >= rep.rhs;
  return rep;
}

double sync_error(const SpectralGrid& g, const CoupledState& a,
                  const CoupledState& b, double beta) {
  if (a.phi.v.rows() != b.phi.v.rows() || a.phi.v.cols() != b.phi.v.cols())
    throw std::invalid_argument("sync_error: grid mismatch");
  ScalarField dphi(RealGrid(a.phi.v - b.phi.v));
  SolenoidalField du = a.u - b.u;
  return beta * std::pow(norm_V1(g, dphi), 2) +
         std::pow(norm_Hsigma(g, du), 2);
}

GirsanovShift girsanov_shift(const SpectralGrid& g,
                             const VelocityNoiseSpec& vspec,
                             const SolenoidalField& u,
                             const SolenoidalField& u_nudged, double eta,
                             int N) {
  SolenoidalField diff = u_nudged - u;
  GirsanovShift out;
  out.H = -eta * g1_inverse(g, vspec, diff, N);
  out.norm_sq = out.H.squaredNorm();
  return out;
}

MomentReport moment_monitors(const SpectralGrid& g, const PotentialSpec& pot,
                             const BarrierFamily& barrier, double gamma,
                             const std::vector<CoupledState>& trajectory) {
  MomentReport rep;
  const std::size_t n = trajectory.size();
  if (n == 0) return rep;
  auto reserve = [&](std::vector<double>& v) { v.reserve(n); };
  reserve(rep.t);
  reserve(rep.phi_H);
  reserve(rep.phi_V1);
  reserve(rep.u_H);
  reserve(rep.psi_s0);
  reserve(rep.I_u_V2);
  reserve(rep.I_lap_phi2);
  reserve(rep.I_Fprime2);
  reserve(rep.I_uu_V2);
  reserve(rep.I_phi_V2sq);
  reserve(rep.I_Fsecond2);
  reserve(rep.I_psi_s0p1);

  double Iu = 0, Ilap = 0, IF = 0, Iuu = 0, Iphi = 0, IF2 = 0, Ipsi = 0;
  double p_u = 0, p_lap = 0, p_F = 0, p_uu = 0, p_phi = 0, p_F2 = 0,
         p_psi = 0;
  double prev_t = trajectory.front().t;
  for (std::size_t k = 0; k < n; ++k) {
    const CoupledState& s = trajectory[k];
    const double uh = norm_Hsigma(g, s.u);
    const double uv = norm_Vsigma(g, s.u);
    const double lap = norm_V2(g, s.phi);
    const double fp = pot.off ? 0.0 : f_prime_H_norm(g, pot, s.phi);
    const double f2 =
        pot.off ? 0.0 : f_second_Lgamma_norm(g, pot, s.phi, gamma);
    const double psi0 = pot.off ? 0.0 : psi_integral(g, s.phi, barrier.s0);
    const double psi1 =
        pot.off ? 0.0 : psi_integral(g, s.phi, barrier.s0 + 1.0);

    const double c_u = uv * uv;
    const double c_lap = lap * lap;
    const double c_F = fp * fp;
    const double c_uu = uh * uh * uv * uv;
    const double c_phi = lap * lap;
    const double c_F2 = f2 * f2;
    const double c_psi = psi1;

    if (k > 0) {
      const double dt = s.t - prev_t;
      Iu += 0.5 * dt * (p_u + c_u);
      Ilap += 0.5 * dt * (p_lap + c_lap);
      IF += 0.5 * dt * (p_F + c_F);
      Iuu += 0.5 * dt * (p_uu + c_uu);
      Iphi += 0.5 * dt * (p_phi + c_phi);
      IF2 += 0.5 * dt * (p_F2 + c_F2);
      Ipsi += 0.5 * dt * (p_psi + c_psi);
    }
    p_u = c_u;
    p_lap = c_lap;
    p_F = c_F;
    p_uu = c_uu;
    p_phi = c_phi;
    p_F2 = c_F2;
    p_psi = c_psi;
    prev_t = s.t;

    rep.t.push_back(s.t);
    rep.phi_H.push_back(norm_H(g, s.phi));
    rep.phi_V1.push_back(norm_V1(g, s.phi));
    rep.u_H.push_back(uh);
    rep.psi_s0.push_back(psi0);
    rep.I_u_V2.push_back(Iu);
    rep.I_lap_phi2.push_back(Ilap);
    rep.I_Fprime2.push_back(IF);
    rep.I_uu_V2.push_back(Iuu);
    rep.I_phi_V2sq.push_back(Iphi);
    rep.I_Fsecond2.push_back(IF2);
    rep.I_psi_s0p1.push_back(Ipsi);
  }
  return rep;
}

}  // namespace acns
