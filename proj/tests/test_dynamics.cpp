#include "acns/dynamics.hpp"

#include "acns/diagnostics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace acns;

namespace {

struct World {
  SpectralGrid g = build_grid(32, 32);
  PotentialSpec pot = PotentialSpec::make(1.0, 2.0);
  VelocityNoiseSpec vs = VelocityNoiseSpec::make(g, 0.1, 1.0, 4, 8);
  PhaseNoiseSpec ps = PhaseNoiseSpec::make({0.05, 0.05, 0.05, 0.05}, 3, 2, pot);
  VelocityNoiseSpec vs_off = VelocityNoiseSpec::make(g, 0.0, 1.0, 0, 0);
  PhaseNoiseSpec ps_off = PhaseNoiseSpec::make({}, 3, 2, pot);
  StepperConfig cfg;

  World() {
    cfg.dt = 1e-3;
    cfg.nu = 0.1;
    cfg.beta = 5.0;
  }

  NoiseIncrements zero_inc() const {
    NoiseIncrements inc;
    inc.dW1 = Eigen::VectorXcd::Zero(0);
    inc.dW2 = Eigen::VectorXd::Zero(0);
    inc.dt = cfg.dt;
    return inc;
  }
};

}  // namespace

TEST_CASE("chemical potential") {
  World w;

  SUBCASE("zero phase gives zero") {
    ScalarField mu = chemical_potential(w.g, w.pot, ScalarField::zero(w.g),
                                        w.cfg.beta);
    CHECK(mu.v.abs().maxCoeff() < 1e-14);
  }

  SUBCASE("pure diffusion on a single mode (potential test hook)") {
    PotentialSpec off = PotentialSpec::disabled();
    const double a = 0.25;
    RealGrid f(32, 32);
    for (int i = 0; i < 32; ++i)
      for (int j = 0; j < 32; ++j) f(i, j) = a * std::sin(w.g.x(i));
    ScalarField mu = chemical_potential(w.g, off, ScalarField(f), w.cfg.beta);
    // w = -beta lap phi = beta * lambda * phi with lambda = 1
    CHECK((mu.v - w.cfg.beta * f).abs().maxCoeff() < 1e-12);
  }

  SUBCASE("constant phase gives F'(c)") {
    const double c = 0.3;
    ScalarField phi(RealGrid::Constant(32, 32, c));
    ScalarField mu = chemical_potential(w.g, w.pot, phi, w.cfg.beta);
    CHECK((mu.v - F_prime(w.pot, c)).abs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("Korteweg force") {
  World w;
  std::mt19937 rng(71);

  SUBCASE("constant chemical potential projects to zero") {
    ScalarField cw(RealGrid::Constant(32, 32, 1.7));
    ScalarField phi = oracle::random_scalar_field(w.g, rng, 6, 0.2);
    SolenoidalField f = korteweg_force(w.g, cw, phi);
    CHECK(norm_Hsigma(w.g, f) < 1e-12);
  }

  SUBCASE("constant phase gives zero") {
    ScalarField cw = oracle::random_scalar_field(w.g, rng, 6);
    ScalarField phi(RealGrid::Constant(32, 32, 0.4));
    SolenoidalField f = korteweg_force(w.g, cw, phi);
    CHECK(norm_Hsigma(w.g, f) < 1e-12);
  }

  SUBCASE("low-mode pair matches the convolution oracle") {
    std::vector<oracle::ModeAmp> wa = {{0, Complex(0.5, 0.1)}};
    std::vector<oracle::ModeAmp> pa = {{1, Complex(-0.2, 0.3)}};
    ScalarField cw(oracle::eval_scalar(w.g, wa));
    ScalarField phi(oracle::eval_scalar(w.g, pa));
    RealGrid gx, gy;
    oracle::eval_scalar_gradient(w.g, pa, gx, gy);
    SolenoidalField expected =
        leray_project(w.g, VectorField{RealGrid(cw.v * gx),
                                       RealGrid(cw.v * gy)});
    SolenoidalField f = korteweg_force(w.g, cw, phi);
    CHECK((f.ux - expected.ux).abs().maxCoeff() < 1e-12);
    CHECK((f.uy - expected.uy).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("single step") {
  World w;

  SUBCASE("zero state with zero noise is an equilibrium") {
    CoupledState s = CoupledState::zero(w.g);
    CoupledState next =
        step(w.g, w.pot, w.cfg, w.vs_off, w.ps_off, s, w.zero_inc());
    CHECK(norm_Hsigma(w.g, next.u) == 0.0);
    CHECK(next.phi.v.abs().maxCoeff() < 1e-15);
    CHECK(next.t == doctest::Approx(w.cfg.dt));
  }

  SUBCASE("linear Stokes decay per step") {
    // noise off; phi = 0 kills the coupling terms
    CoupledState s = CoupledState::zero(w.g);
    add_mode_amplitude(w.g, s.u, 0, Complex(0.8, -0.3));
    const double lam = w.g.mode_lambda(0);
    const double h0 = norm_Hsigma(w.g, s.u);
    CoupledState next =
        step(w.g, w.pot, w.cfg, w.vs_off, w.ps_off, s, w.zero_inc());
    const double h1 = norm_Hsigma(w.g, next.u);
    // implicit Euler factor, agreeing with exp(-nu lam dt) to O(dt^2)
    CHECK(h1 / h0 ==
          doctest::Approx(1.0 / (1.0 + w.cfg.nu * lam * w.cfg.dt))
              .epsilon(1e-12));
    CHECK(h1 / h0 ==
          doctest::Approx(std::exp(-w.cfg.nu * lam * w.cfg.dt)).epsilon(1e-6));
  }

  SUBCASE("phase bound is structural even under violent forcing") {
    const NoisePath path{11, 0};
    CoupledState s = CoupledState::zero(w.g);
    s.u = random_solenoidal(w.g, path, 1.0, 1.0, 12);
    s.phi = random_scalar(w.g, path, 2.0, 0.8, 12, 0.999);
    StepperConfig cfg = w.cfg;
    cfg.dt = 0.05;
    NoiseIncrements inc = sample_increments(path, 0, cfg.dt, w.vs, w.ps);
    inc.dW1 *= 20.0;
    inc.dW2 *= 20.0;
    CoupledState next = step(w.g, w.pot, cfg, w.vs, w.ps, s, inc);
    CHECK(next.phi.v.abs().maxCoeff() < 1.0);
  }

  SUBCASE("missing reference with active nudge is rejected") {
    CoupledState s = CoupledState::zero(w.g);
    NudgeConfig n = make_nudge(w.g, 4, w.cfg.nu);
    CHECK_THROWS_AS(
        step(w.g, w.pot, w.cfg, w.vs_off, w.ps_off, s, w.zero_inc(), &n),
        std::invalid_argument);
  }
}

TEST_CASE("nudge consistency: eta = 0 and N = 0 reproduce the plain step") {
  World w;
  const NoisePath path{21, 0};
  CoupledState s = CoupledState::zero(w.g);
  s.u = random_solenoidal(w.g, path, 0.5, 1.0, 10);
  s.phi = random_scalar(w.g, path, 0.5, 1.0, 10, 0.7);
  const NoiseIncrements inc = sample_increments(path, 0, w.cfg.dt, w.vs, w.ps);

  CoupledState plain = step(w.g, w.pot, w.cfg, w.vs, w.ps, s, inc);

  NudgeConfig n0 = make_nudge(w.g, 0, w.cfg.nu);
  SolenoidalField ref = SolenoidalField::zero(w.g);
  CoupledState withN0 = step(w.g, w.pot, w.cfg, w.vs, w.ps, s, inc, &n0, &ref);
  CHECK((withN0.u.ux - plain.u.ux).abs().maxCoeff() == 0.0);
  CHECK((withN0.u.uy - plain.u.uy).abs().maxCoeff() == 0.0);
  CHECK((withN0.phi.v - plain.phi.v).abs().maxCoeff() == 0.0);

  NudgeConfig eta0{8, 0.0};
  CoupledState withEta0 =
      step(w.g, w.pot, w.cfg, w.vs, w.ps, s, inc, &eta0, &ref);
  CHECK((withEta0.u.ux - plain.u.ux).abs().maxCoeff() == 0.0);
}

TEST_CASE("default nudging gain") {
  World w;
  NudgeConfig n = make_nudge(w.g, 4, w.cfg.nu);
  CHECK(n.eta ==
        doctest::Approx(0.5 * w.g.mode_lambda(3) * w.cfg.nu).epsilon(1e-14));
  CHECK_THROWS_AS(make_nudge(w.g, -1, w.cfg.nu), std::invalid_argument);
}

TEST_CASE("run: callbacks, determinism, divisibility") {
  World w;
  const NoisePath path{31, 5};
  CoupledState init = CoupledState::zero(w.g);
  init.u = random_solenoidal(w.g, path, 0.3, 1.0, 8);
  init.phi = random_scalar(w.g, path, 0.3, 1.0, 8, 0.5);

  SUBCASE("T = 10 dt invokes the callback 10 times") {
    int calls = 0;
    run(w.g, w.pot, w.cfg, w.vs, w.ps, init, 10 * w.cfg.dt, path,
        [&](const CoupledState&, int) { ++calls; });
    CHECK(calls == 10);
  }

  SUBCASE("same seed twice is bit-identical") {
    CoupledState a =
        run(w.g, w.pot, w.cfg, w.vs, w.ps, init, 20 * w.cfg.dt, path);
    CoupledState b =
        run(w.g, w.pot, w.cfg, w.vs, w.ps, init, 20 * w.cfg.dt, path);
    CHECK((a.u.ux - b.u.ux).abs().maxCoeff() == 0.0);
    CHECK((a.phi.v - b.phi.v).abs().maxCoeff() == 0.0);
  }

  SUBCASE("dt must divide the horizon") {
    CHECK_THROWS_AS(
        run(w.g, w.pot, w.cfg, w.vs, w.ps, init, 10.5 * w.cfg.dt, path),
        std::invalid_argument);
  }

  SUBCASE("structural invariants along a stochastic run") {
    double max_div = 0.0, max_phi = 0.0;
    run(w.g, w.pot, w.cfg, w.vs, w.ps, init, 50 * w.cfg.dt, path,
        [&](const CoupledState& s, int) {
          RealGrid div = inverse(w.g, divergence(w.g, s.u.ux, s.u.uy));
          max_div = std::max(max_div, div.abs().maxCoeff());
          max_phi = std::max(max_phi, s.phi.v.abs().maxCoeff());
        });
    CHECK(max_div < 1e-10);
    CHECK(max_phi < 1.0);
  }
}

TEST_CASE("deterministic energy decay over 1000 steps") {
  World w;
  const NoisePath path{41, 0};
  CoupledState init = CoupledState::zero(w.g);
  init.u = random_solenoidal(w.g, path, 0.5, 1.0, 10);
  init.phi = random_scalar(w.g, path, 0.5, 1.0, 10, 0.6);

  StepperConfig cfg = w.cfg;
  cfg.dt = 2e-4;
  double prev = energy(w.g, w.pot, init, cfg.nu, cfg.beta).total;
  int violations = 0;
  run(w.g, w.pot, cfg, w.vs_off, w.ps_off, init, 1000 * cfg.dt, path,
      [&](const CoupledState& s, int) {
        const double e = energy(w.g, w.pot, s, cfg.nu, cfg.beta).total;
        if (e > prev * (1.0 + 1e-8)) ++violations;
        prev = e;
      });
  CHECK(violations == 0);
}

TEST_CASE("shared-noise contract for paired runs") {
  World w;
  const NoisePath path{51, 2};
  CoupledState init = CoupledState::zero(w.g);
  init.u = random_solenoidal(w.g, path, 0.4, 1.0, 8);
  init.phi = random_scalar(w.g, path, 0.4, 1.0, 8, 0.5);

  // identical initial data, shared increments, one arm nudged toward the
  // other: the difference stays exactly zero
  NudgeConfig nudge = make_nudge(w.g, 4, w.cfg.nu);
  CoupledState a = init, b = init;
  for (int k = 0; k < 25; ++k) {
    const NoiseIncrements inc =
        sample_increments(path, k, w.cfg.dt, w.vs, w.ps);
    a = step(w.g, w.pot, w.cfg, w.vs, w.ps, a, inc);
    b = step(w.g, w.pot, w.cfg, w.vs, w.ps, b, inc, &nudge, &a.u);
    CHECK((a.u.ux - b.u.ux).abs().maxCoeff() == 0.0);
    CHECK((a.u.uy - b.u.uy).abs().maxCoeff() == 0.0);
    CHECK((a.phi.v - b.phi.v).abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("energy blow-up guard") {
  World w;
  StepperConfig cfg = w.cfg;
  cfg.dt = 2.0;  // far beyond the stability limit for the nonlinearity
  const NoisePath path{61, 0};
  CoupledState init = CoupledState::zero(w.g);
  init.u = random_solenoidal(w.g, path, 8.0, 0.5, 30);
  init.phi = random_scalar(w.g, path, 0.5, 1.0, 8, 0.5);
  CHECK_THROWS_AS(
      run(w.g, w.pot, cfg, w.vs_off, w.ps_off, init, 100 * cfg.dt, path),
      std::runtime_error);
}
