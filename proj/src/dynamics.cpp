#include "acns/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace acns {

namespace {

// Solves x + c*atanh(x) = r on (-1,1); strictly monotone with full range,
// so the solution exists, is unique, and is interior for every finite r.
// The bracket is capped at the potential's evaluation guard so downstream
// evaluations never clamp; a collapsed bracket counts as converged (the
// root is then resolved to machine precision even when the residual
// tolerance is unreachable near the endpoints).
double solve_atanh_implicit(double c, double r, double tol, int max_iter,
                            int node_i, int node_j) {
  const double lim = 1.0 - PotentialSpec::delta_eval;
  double lo = -lim, hi = lim;
  double x = std::clamp(std::tanh(r / (1.0 + c)), lo, hi);
  for (int it = 0; it < max_iter; ++it) {
    const double f = x + c * std::atanh(x) - r;
    if (std::abs(f) <= tol * std::max(1.0, std::abs(r))) return x;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    if (hi - lo <= 1e-14) return 0.5 * (lo + hi);
    const double fp = 1.0 + c / (1.0 - x * x);
    double xn = x - f / fp;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    x = xn;
  }
  std::ostringstream os;
  os << "implicit phase solve failed to converge at node (" << node_i << ","
     << node_j << ") with rhs " << r;
  throw std::runtime_error(os.str());
}

}  // namespace

NudgeConfig make_nudge(const SpectralGrid& g, int N, double nu) {
  if (N < 0 || N > g.n_modes())
    throw std::invalid_argument("make_nudge: N out of range");
  NudgeConfig n;
  n.N = N;
  n.eta = N > 0 ? 0.5 * g.mode_lambda(N - 1) * nu : 0.0;
  return n;
}

ScalarField chemical_potential(const SpectralGrid& g, const PotentialSpec& pot,
                               const ScalarField& phi, double beta) {
  ComplexGrid lap = laplacian(g, forward(g, phi.v));
  RealGrid w = -beta * inverse(g, lap);
  if (!pot.off) {
    require_phase_bound(phi);
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) w(i, j) += F_prime(pot, phi.v(i, j));
  }
  return ScalarField(std::move(w));
}

SolenoidalField korteweg_force(const SpectralGrid& g, const ScalarField& w,
                               const ScalarField& phi) {
  if (w.v.rows() != phi.v.rows() || w.v.cols() != phi.v.cols())
    throw std::invalid_argument("korteweg_force: grid mismatch");
  ComplexGrid phih = dealias(g, forward(g, phi.v));
  VectorField gp = gradient(g, phih);
  RealGrid wm = inverse(g, dealias(g, forward(g, w.v)));
  ComplexGrid fx = dealias(g, forward(g, RealGrid(wm * gp.x)));
  ComplexGrid fy = dealias(g, forward(g, RealGrid(wm * gp.y)));
  return leray_project(g, fx, fy);
}

CoupledState step(const SpectralGrid& g, const PotentialSpec& pot,
                  const StepperConfig& cfg, const VelocityNoiseSpec& vspec,
                  const PhaseNoiseSpec& pspec, const CoupledState& state,
                  const NoiseIncrements& inc, const NudgeConfig* nudge,
                  const SolenoidalField* reference_u) {
  const double dt = cfg.dt;
  const bool nudging = nudge != nullptr && nudge->N > 0 && nudge->eta > 0.0;
  if (nudge != nullptr && nudge->N > 0 && reference_u == nullptr)
    throw std::invalid_argument("step: nudging requires a reference velocity");

  // velocity: explicit nonlinearity and Korteweg force, additive noise,
  // implicit viscosity
  ScalarField w = chemical_potential(g, pot, state.phi, cfg.beta);
  SolenoidalField rhs = state.u;
  if (cfg.ns_nonlinearity) {
    SolenoidalField B = ns_nonlinearity(g, state.u);
    rhs.ux -= dt * B.ux;
    rhs.uy -= dt * B.uy;
  }
  if (cfg.korteweg) {
    SolenoidalField K = korteweg_force(g, w, state.phi);
    rhs.ux += dt * K.ux;
    rhs.uy += dt * K.uy;
  }
  if (vspec.K_active > 0) {
    SolenoidalField noise = apply_G1(g, vspec, inc.dW1, &state.u);
    rhs.ux += noise.ux;
    rhs.uy += noise.uy;
  }
  SolenoidalField u_new = SolenoidalField::zero(g);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      const double denom = 1.0 + cfg.nu * g.lambda(i, j) * dt;
      u_new.ux(i, j) = rhs.ux(i, j) / denom;
      u_new.uy(i, j) = rhs.uy(i, j) / denom;
    }
  if (nudging) {
    // -eta P_N(u - reference) dt, implicit in u and explicit in the
    // reference (companion velocity at the updated time level):
    //   u <- u* - eta dt / (1 + nu lambda dt + eta dt) * (u* - ref)
    // which solves (1 + nu lambda dt + eta dt) u = rhs + eta dt ref on the
    // nudged modes. A zero difference stays exactly zero.
    for (int r = 0; r < nudge->N; ++r) {
      const SolenoidalMode& m = g.modes()[r];
      const double ed = nudge->eta * dt;
      for (auto [ii, jj] : {std::pair{m.i, m.j}, std::pair{m.ci, m.cj}}) {
        const double f = ed / (1.0 + cfg.nu * g.lambda(ii, jj) * dt + ed);
        u_new.ux(ii, jj) -= f * (u_new.ux(ii, jj) - reference_u->ux(ii, jj));
        u_new.uy(ii, jj) -= f * (u_new.uy(ii, jj) - reference_u->uy(ii, jj));
      }
    }
  }

  // phase: explicit advection and concave part, noise pre-solve, implicit
  // diffusion (spectral) then the implicit convex part (pointwise)
  RealGrid prhs = state.phi.v;
  if (cfg.advection) {
    ScalarField adv = advect_scalar(g, state.u, state.phi);
    prhs -= dt * adv.v;
  }
  if (!pot.off) prhs += (dt * pot.theta0) * state.phi.v;
  if (pspec.channels() > 0) {
    ScalarField noise = apply_G2(g, pspec, state.phi, inc.dW2);
    prhs += noise.v;
  }
  ComplexGrid ph = forward(g, prhs);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j)
      ph(i, j) /= 1.0 + cfg.beta * g.lambda(i, j) * dt;
  RealGrid phalf = inverse(g, ph);

  RealGrid phi_new(g.nx(), g.ny());
  if (pot.off) {
    phi_new = phalf;
  } else {
    const double c = dt * pot.theta;
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j)
        phi_new(i, j) = solve_atanh_implicit(c, phalf(i, j), cfg.newton_tol,
                                             cfg.newton_max, i, j);
  }

  return CoupledState{std::move(u_new), ScalarField(std::move(phi_new)),
                      state.t + dt};
}

double guard_energy(const SpectralGrid& g, const PotentialSpec& pot,
                    const StepperConfig& cfg, const CoupledState& s) {
  const double kin = 0.5 * std::pow(norm_Hsigma(g, s.u), 2);
  const double interf = 0.5 * cfg.beta * std::pow(norm_V1(g, s.phi), 2);
  const double potential = pot.off ? 0.0 : potential_energy(g, pot, s.phi);
  return kin + interf + potential;
}

int step_count(double horizon, double dt) {
  if (!(horizon > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("run: horizon and dt must be positive");
  const double n_real = horizon / dt;
  const long long n = std::llround(n_real);
  if (n < 1 || std::abs(n * dt - horizon) > 1e-9 * std::max(1.0, horizon))
    throw std::invalid_argument("run: dt must divide the horizon");
  return static_cast<int>(n);
}

CoupledState run(const SpectralGrid& g, const PotentialSpec& pot,
                 const StepperConfig& cfg, const VelocityNoiseSpec& vspec,
                 const PhaseNoiseSpec& pspec, CoupledState initial,
                 double horizon, const NoisePath& path,
                 const StepCallback& callback, const NudgeConfig* nudge,
                 const SolenoidalField* reference_u) {
  const int n = step_count(horizon, cfg.dt);
  initial.u = leray_project(g, dealias(g, initial.u.ux),
                            dealias(g, initial.u.uy));
  if (!pot.off) require_phase_bound(initial.phi);

  // floor keeps noise-driven growth from a near-zero start below the trip
  const double e0 = std::max(guard_energy(g, pot, cfg, initial), 1.0);
  CoupledState s = std::move(initial);
  for (int k = 0; k < n; ++k) {
    const NoiseIncrements inc =
        sample_increments(path, static_cast<std::uint64_t>(k), cfg.dt, vspec,
                          pspec);
    s = step(g, pot, cfg, vspec, pspec, s, inc, nudge, reference_u);
    const double e = guard_energy(g, pot, cfg, s);
    if (!(e <= cfg.blowup_factor * e0))
      throw std::runtime_error(
          "run: energy blow-up guard tripped at t = " + std::to_string(s.t));
    if (callback) callback(s, k + 1);
  }
  return s;
}

}  // namespace acns
