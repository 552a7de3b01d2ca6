// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier experiments use two worker threads; every run is
// deterministic given the seeds fixed here.

#include "acns/ergodics.hpp"
#include "acns/harness.hpp"
#include "acns/parallel.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

using namespace acns;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail, double secs) {
  std::printf("[%s] criterion %d: %s (%s; %.1f s)\n", pass ? "PASS" : "FAIL",
              index, name.c_str(), detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// -- criterion 1: structure preservation over 1e4 stochastic steps at 64^2 --
void criterion_1() {
  Timer timer;
  SpectralGrid g = build_grid(64, 64);
  PotentialSpec pot = PotentialSpec::make(1.0, 2.0);
  StepperConfig cfg;
  cfg.dt = 1e-3;
  cfg.nu = 0.1;
  cfg.beta = 10.0;
  VelocityNoiseSpec vs = VelocityNoiseSpec::make(g, 0.3, 1.0, 16, 24);
  PhaseNoiseSpec ps = PhaseNoiseSpec::make({0.05, 0.05, 0.05, 0.05}, 3, 2, pot);
  const NoisePath path{11, 0};
  CoupledState s = CoupledState::zero(g);
  s.u = random_solenoidal(g, path, 0.5, 1.0, 16);
  s.phi = random_scalar(g, path, 0.5, 1.0, 12, 0.6);

  double max_div = 0.0, max_phi = 0.0;
  run(g, pot, cfg, vs, ps, s, 10000 * cfg.dt, path,
      [&](const CoupledState& st, int) {
        RealGrid div = inverse(g, divergence(g, st.u.ux, st.u.uy));
        max_div = std::max(max_div, div.abs().maxCoeff());
        max_phi = std::max(max_phi, st.phi.v.abs().maxCoeff());
      });
  const double secs = timer.secs();
  const bool pass = max_div < 1e-10 && max_phi < 1.0 && secs < 300.0;
  report(1, "structure preservation",
         pass,
         "max|div u| = " + fmt(max_div) + ", max|phi| = " + fmt(max_phi),
         secs);
}

// -- criterion 2: deterministic energy law ------------------------------------
void criterion_2() {
  Timer timer;
  SpectralGrid g = build_grid(32, 32);
  PotentialSpec pot = PotentialSpec::make(1.0, 2.0);
  StepperConfig cfg;
  cfg.dt = 2e-4;
  cfg.nu = 0.1;
  cfg.beta = 5.0;
  VelocityNoiseSpec voff = VelocityNoiseSpec::make(g, 0.0, 1.0, 0, 0);
  PhaseNoiseSpec poff = PhaseNoiseSpec::make({}, 3, 2, pot);
  const NoisePath path{7, 0};
  CoupledState s = CoupledState::zero(g);
  s.u = random_solenoidal(g, path, 0.6, 1.0, 12);
  s.phi = random_scalar(g, path, 0.5, 1.0, 12, 0.6);

  EnergyRecord prev = energy(g, pot, s, cfg.nu, cfg.beta);
  const double E0 = prev.total;
  auto law = [&](const CoupledState& st, const EnergyRecord& e) {
    return cfg.nu * std::pow(norm_Vsigma(g, st.u), 2) + e.w_norm_sq;
  };
  double prev_law = law(s, prev);
  double diss_int = 0.0;
  int violations = 0;
  double final_total = E0;
  run(g, pot, cfg, voff, poff, s, 1000 * cfg.dt, path,
      [&](const CoupledState& st, int) {
        EnergyRecord e = energy(g, pot, st, cfg.nu, cfg.beta);
        if (e.total > prev.total * (1.0 + 1e-8)) ++violations;
        const double cl = law(st, e);
        diss_int += 0.5 * cfg.dt * (prev_law + cl);
        prev_law = cl;
        prev = e;
        final_total = e.total;
      });
  const double rel = std::abs((E0 - final_total) - diss_int) / diss_int;
  const bool pass = violations == 0 && rel < 0.05;
  report(2, "deterministic energy law", pass,
         "monotonicity violations = " + std::to_string(violations) +
             ", |dE + int(diss)| / int(diss) = " + fmt(rel),
         timer.secs());
}

// -- criterion 3: projector algebra and Poincare --------------------------------
void criterion_3() {
  Timer timer;
  SpectralGrid g = build_grid(16, 16);
  VelocityNoiseSpec vs = VelocityNoiseSpec::make(g, 0.7, 1.0, 16, 20);
  std::mt19937 rng(2027);
  std::normal_distribution<double> N01;
  auto random_u = [&]() {
    SolenoidalField u = SolenoidalField::zero(g);
    for (int r = 0; r < g.n_modes(); ++r)
      add_mode_amplitude(g, u, r,
                         Complex(N01(rng), N01(rng)) /
                             (1.0 + g.mode_lambda(r)));
    return u;
  };

  bool pass = true;
  std::string why;
  for (int trial = 0; trial < 100 && pass; ++trial) {
    SolenoidalField u = random_u();
    for (int N : {1, 4, 16}) {
      auto [low, high] = project_low_modes(g, u, N);
      if ((low.ux + high.ux - u.ux).abs().maxCoeff() > 0 ||
          (low.uy + high.uy - u.uy).abs().maxCoeff() > 0) {
        pass = false;
        why = "P_N + Q_N != I";
        break;
      }
      const double lamN = g.mode_lambda(N - 1), lamN1 = g.mode_lambda(N);
      const double lowV = std::pow(norm_Vsigma(g, low), 2);
      const double lowH = std::pow(norm_Hsigma(g, low), 2);
      const double highV = std::pow(norm_Vsigma(g, high), 2);
      const double highH = std::pow(norm_Hsigma(g, high), 2);
      if (lowV > lamN * lowH * (1 + 1e-12) + 1e-14 ||
          highH > highV / lamN1 * (1 + 1e-12) + 1e-14) {
        pass = false;
        why = "generalized Poincare violated";
        break;
      }
    }
  }
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    SolenoidalField w = random_u();
    SolenoidalField rec = apply_G1(g, vs, g1_inverse(g, vs, w, vs.M));
    auto [low, high] = project_low_modes(g, w, vs.M);
    worst = std::max(worst, (rec.ux - low.ux).abs().maxCoeff());
    worst = std::max(worst, (rec.uy - low.uy).abs().maxCoeff());
  }
  if (worst >= 1e-12) {
    pass = false;
    why = "G1 o G1^{-1} != P_M";
  }
  report(3, "projector algebra and Poincare", pass,
         pass ? "identities hold, max |G1 G1^{-1} w - P_M w| = " + fmt(worst)
              : why,
         timer.secs());
}

// -- criterion 4: potential and noise-shape assumptions -------------------------
void criterion_4() {
  Timer timer;
  PotentialSpec pot = PotentialSpec::make(1.0, 2.0);
  PhaseNoiseSpec ps = PhaseNoiseSpec::make({0.05, 0.05, 0.05, 0.05}, 3, 2, pot);
  const double LF = pot.L_F();
  bool pass = true;
  std::string why;

  for (int i = 0; i < 10000 && pass; ++i) {
    const double r = -1.0 + 2.0 * (i + 0.5) / 10000;
    const double f2 = F_second(pot, r);
    if (f2 < -LF - 1e-12) {
      pass = false;
      why = "lower bound on F'' fails";
    }
    if (f2 > LF * (1.0 + psi(1.0, r)) + 1e-9) {
      pass = false;
      why = "growth bound on F'' fails";
    }
    if (F_prime(pot, r) * r < LF * r * r - 2.0 * LF - 1e-12) {
      pass = false;
      why = "F'(r) r lower bound fails";
    }
    for (int k = 0; k < ps.channels(); ++k) {
      const double gv = ps.g(k, r);
      const double b = std::abs(F_second(pot, r)) * gv * gv +
                       std::abs(F_prime(pot, r) * gv) +
                       std::abs(gv) * psi(3.0, r);
      if (!std::isfinite(b) || b > 1e6) {
        pass = false;
        why = "noise shape bounds fail";
      }
    }
  }
  std::mt19937 rng(4049);
  std::uniform_real_distribution<double> U(-0.999, 0.999), T01(0.0, 1.0);
  for (int t = 0; t < 1000 && pass; ++t) {
    const double r1 = U(rng), r2 = U(rng), th = T01(rng);
    if (F_second(pot, th * r1 + (1 - th) * r2) >
        std::max(F_second(pot, r1), F_second(pot, r2)) + 1e-12) {
      pass = false;
      why = "quasi-convexity midpoint test fails";
    }
  }
  report(4, "potential and noise assumptions", pass,
         pass ? "all bounds hold on the 1e4 grid" : why, timer.secs());
}

// shared configuration of the synchronization experiments (criteria 5, 7):
// anisotropic box so the lowest mode relaxes slowly (control arm) while
// lambda_16 stays large enough for the nudging gain
struct SyncWorld {
  SpectralGrid g = build_grid(48, 24, 4.0 * M_PI, 2.0 * M_PI);
  PotentialSpec pot = PotentialSpec::make(1.0, 2.0);
  StepperConfig cfg;
  VelocityNoiseSpec vs = VelocityNoiseSpec::make(g, 0.4, 1.0, 16, 24);
  PhaseNoiseSpec ps = PhaseNoiseSpec::make({0.05, 0.05, 0.05, 0.05}, 3, 2, pot);
  CoupledState A = CoupledState::zero(g), B = CoupledState::zero(g);

  SyncWorld() {
    cfg.dt = 5e-3;
    cfg.nu = 0.1;
    cfg.beta = 10.0;
    const NoisePath ia{101, 0}, ib{202, 0};
    A.u = random_solenoidal(g, ia, 0.5, 2.0, 16);
    A.phi = random_scalar(g, ia, 0.4, 1.0, 12, 0.6);
    B.u = random_solenoidal(g, ib, 0.5, 2.0, 16);
    B.phi = A.phi;
  }
};

void criterion_5() {
  Timer timer;
  SyncWorld w;
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < 8; ++i) seeds.push_back(1000 + i);
  FPReport rep = foias_prodi_experiment(w.g, w.pot, w.cfg, w.vs, w.ps, w.A,
                                        w.B, 16, 20.0, seeds, 50, 1.74, 2);
  const double nd = rep.nudged.median_final_over_initial;
  const double cd = rep.control.median_final_over_initial;
  const bool pass = nd <= 1e-3 && cd >= 0.1 && cd <= 10.0 &&
                    rep.nudged.log_slope < 0.0 && timer.secs() < 900.0;
  report(5, "Foias-Prodi synchronization", pass,
         "nudged ratio = " + fmt(nd) + ", control ratio = " + fmt(cd) +
             ", log-slope = " + fmt(rep.nudged.log_slope) +
             " (envelope rate " + fmt(rep.envelope_rate) + ")",
         timer.secs());
}

// -- criterion 6: stopping-time tails ------------------------------------------
void criterion_6() {
  Timer timer;
  SpectralGrid g = build_grid(16, 16);
  PotentialSpec pot = PotentialSpec::make(1.0, 2.0);
  BarrierFamily barrier = BarrierFamily::make(2);
  StepperConfig cfg;
  cfg.dt = 2e-3;
  cfg.nu = 0.1;
  cfg.beta = 5.0;
  VelocityNoiseSpec vs = VelocityNoiseSpec::make(g, 0.3, 1.0, 8, 12);
  PhaseNoiseSpec ps = PhaseNoiseSpec::make({0.05, 0.05, 0.05, 0.05}, 3, 2, pot);
  ConstantsTable c = measure_constants(g, 300, 0xACE5u, barrier.gamma());
  c.L_G1 = vs.L_G1();
  c.L_G2 = ps.L_G2;
  const NoisePath ia{31, 0}, ib{32, 0};
  CoupledState A = CoupledState::zero(g), B = CoupledState::zero(g);
  A.u = random_solenoidal(g, ia, 0.4, 1.0, 8);
  A.phi = random_scalar(g, ia, 0.4, 1.0, 8, 0.5);
  B.u = random_solenoidal(g, ib, 0.4, 1.0, 8);
  B.phi = random_scalar(g, ib, 0.4, 1.0, 8, 0.5);

  // the structural offset is astronomically conservative at desk scale, so
  // calibrate a user-supplied epsilon on a disjoint pilot ensemble (coarse
  // then fine threshold scans at zero offset), then measure on fresh noise
  const double horizon = 2.0;
  auto scan_quartile = [&](double lo, double hi, double step) {
    std::vector<double> scan;
    for (double r = lo; r <= hi; r += step) scan.push_back(r);
    TailReport s = stopping_tail(g, pot, cfg, vs, ps, barrier, c, A, B, 8,
                                 scan, horizon, 32, 900, 0.0, 2);
    double q = lo;
    for (std::size_t i = 0; i < s.R.size(); ++i)
      if (s.p_hit[i] >= 0.75) q = s.R[i];
    return q;
  };
  const double coarse = scan_quartile(0.0, 40000.0, 200.0);
  const double quartile = scan_quartile(coarse, coarse + 200.0, 1.0);
  const double eps = std::max(0.0, quartile - 8.0);

  TailReport rep =
      stopping_tail(g, pot, cfg, vs, ps, barrier, c, A, B, 8,
                    {1, 2, 4, 8, 16}, horizon, 64, 555, eps, 2);
  bool monotone = true;
  for (std::size_t i = 1; i < rep.p_hit.size(); ++i)
    if (rep.p_hit[i] > rep.p_hit[i - 1]) monotone = false;
  std::string curve;
  for (double p : rep.p_hit) curve += fmt(p) + " ";
  report(6, "stopping-time tail", monotone,
         "P(tau_R < T) over R = {1,2,4,8,16}: " + curve +
             "(eps = " + fmt(eps) + ")",
         timer.secs());
}

// -- criterion 7: Girsanov shift finiteness --------------------------------------
void criterion_7() {
  Timer timer;
  SyncWorld w;
  const int N = 16;
  const NudgeConfig nudge = make_nudge(w.g, N, w.cfg.nu);
  const double T = 20.0;
  const int n = step_count(T, w.cfg.dt);
  const NoisePath path{1000, 0};
  CoupledState a = w.A, b = w.B;
  a.u = leray_project(w.g, dealias(w.g, a.u.ux), dealias(w.g, a.u.uy));
  b.u = leray_project(w.g, dealias(w.g, b.u.ux), dealias(w.g, b.u.uy));
  GirsanovLedger led;
  led.add(girsanov_shift(w.g, w.vs, a.u, b.u, nudge.eta, N).norm_sq, 0.0);
  double at_three_quarters = 0.0;
  for (int k = 0; k < n; ++k) {
    const NoiseIncrements inc =
        sample_increments(path, k, w.cfg.dt, w.vs, w.ps);
    a = step(w.g, w.pot, w.cfg, w.vs, w.ps, a, inc);
    b = step(w.g, w.pot, w.cfg, w.vs, w.ps, b, inc, &nudge, &a.u);
    led.add(girsanov_shift(w.g, w.vs, a.u, b.u, nudge.eta, N).norm_sq,
            w.cfg.dt);
    if (k + 1 == (3 * n) / 4) at_three_quarters = led.integral;
  }
  const double growth =
      led.integral > 0 ? (led.integral - at_three_quarters) / led.integral
                       : 0.0;
  const bool pass = led.integral > 0 && std::isfinite(led.integral) &&
                    growth < 0.01;
  report(7, "Girsanov shift finiteness", pass,
         "int |H|^2 = " + fmt(led.integral) +
             ", final-quarter growth = " + fmt(growth),
         timer.secs());
}

// -- criterion 8: ergodic consistency --------------------------------------------
void criterion_8() {
  Timer timer;
  bool pass = true;
  std::string detail;

  {  // OU stationary moment on the linear test system; nu = 1 keeps the
     // correlation time short so T = 200 gives a sharp estimate
    SpectralGrid g = build_grid(16, 16);
    PotentialSpec off = PotentialSpec::disabled();
    StepperConfig cfg;
    cfg.dt = 5e-3;
    cfg.nu = 1.0;
    cfg.beta = 5.0;
    cfg.ns_nonlinearity = false;
    cfg.advection = false;
    cfg.korteweg = false;
    VelocityNoiseSpec vs = VelocityNoiseSpec::make(g, 0.3, 1.0, 0, 1, true);
    PhaseNoiseSpec ps = PhaseNoiseSpec::make({}, 3, 2, off);
    const double lam1 = g.mode_lambda(0);
    const double exact = vs.sigma[0] * vs.sigma[0] / (2.0 * cfg.nu * lam1);
    std::vector<double> t{0.0}, uH2{0.0};
    const NoisePath path{2024, 0};
    run(g, off, cfg, vs, ps, CoupledState::zero(g), 200.0, path,
        [&](const CoupledState& s, int k) {
          if (k % 4 == 0) {
            t.push_back(s.t);
            uH2.push_back(std::pow(norm_Hsigma(g, s.u), 2));
          }
        });
    const double mu = kb_average(t, {uH2}, 4).back().mu[0];
    std::vector<double> tail(uH2.begin() + uH2.size() / 2, uH2.end());
    const int nb = 16;
    const std::size_t len = tail.size() / nb;
    std::vector<double> bm;
    for (int b = 0; b < nb; ++b) {
      double s = 0;
      for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += tail[i];
      bm.push_back(s / len);
    }
    const double m = std::accumulate(bm.begin(), bm.end(), 0.0) / nb;
    double var = 0;
    for (double v : bm) var += (v - m) * (v - m);
    const double se = std::sqrt(var / (nb - 1) / nb);
    if (std::abs(mu - exact) > 3.0 * std::max(se, 1e-6)) pass = false;
    detail += "OU moment " + fmt(mu) + " vs " + fmt(exact) + " (3SE " +
              fmt(3 * se) + ")";
  }

  {  // uniqueness consistency and barrier-moment plateau on the full system
    SpectralGrid g = build_grid(16, 16);
    PotentialSpec pot = PotentialSpec::make(1.0, 2.0);
    StepperConfig cfg;
    cfg.dt = 2e-3;
    cfg.nu = 0.1;
    cfg.beta = 5.0;
    VelocityNoiseSpec vs = VelocityNoiseSpec::make(g, 0.3, 1.0, 8, 12);
    PhaseNoiseSpec ps =
        PhaseNoiseSpec::make({0.05, 0.05, 0.05, 0.05}, 3, 2, pot);
    const NoisePath ia{31, 0}, ib{32, 0};
    CoupledState A = CoupledState::zero(g), B = CoupledState::zero(g);
    A.u = random_solenoidal(g, ia, 0.4, 1.0, 8);
    A.phi = random_scalar(g, ia, 0.4, 1.0, 8, 0.5);
    B.u = random_solenoidal(g, ib, 0.4, 1.0, 8);
    B.phi = random_scalar(g, ib, 0.4, 1.0, 8, 0.5);

    const double T = 40.0, burn = 8.0;
    const int E = 8;
    // member time-averages of |u|_H^2 and the barrier integral, plus the
    // half-window averages for the plateau check
    struct Avg {
      double uh = 0, psi = 0, psi1 = 0, psi2 = 0;
    };
    std::vector<Avg> avA(E), avB(E);
    auto run_member = [&](const CoupledState& init, std::uint64_t stream,
                          Avg& out) {
      const NoisePath path{777, stream};
      double acc_u = 0, acc_p = 0, len = 0;
      double acc_p1 = 0, len1 = 0, acc_p2 = 0, len2 = 0;
      double prev_t = 0;
      double prev_u = std::pow(norm_Hsigma(g, init.u), 2);
      double prev_p = psi_integral(g, init.phi, 2.0);
      const double mid = burn + 0.5 * (T - burn);
      run(g, pot, cfg, vs, ps, init, T, path,
          [&](const CoupledState& s, int k) {
            if (k % 10 != 0) return;
            const double cu = std::pow(norm_Hsigma(g, s.u), 2);
            const double cp = psi_integral(g, s.phi, 2.0);
            if (s.t >= burn) {
              const double dt = s.t - prev_t;
              acc_u += 0.5 * dt * (prev_u + cu);
              acc_p += 0.5 * dt * (prev_p + cp);
              len += dt;
              if (s.t <= mid) {
                acc_p1 += 0.5 * dt * (prev_p + cp);
                len1 += dt;
              } else {
                acc_p2 += 0.5 * dt * (prev_p + cp);
                len2 += dt;
              }
            }
            prev_t = s.t;
            prev_u = cu;
            prev_p = cp;
          });
      out.uh = acc_u / len;
      out.psi = acc_p / len;
      out.psi1 = acc_p1 / len1;
      out.psi2 = acc_p2 / len2;
    };
    parallel_for(2 * E, 2, [&](int i) {
      if (i < E)
        run_member(A, i, avA[i]);
      else
        run_member(B, 100 + (i - E), avB[i - E]);
    });

    auto mean_se = [&](const std::vector<Avg>& v, auto field) {
      double m = 0;
      for (const auto& a : v) m += a.*field;
      m /= v.size();
      double var = 0;
      for (const auto& a : v) var += std::pow(a.*field - m, 2);
      return std::pair<double, double>(
          m, std::sqrt(var / (v.size() - 1) / v.size()));
    };
    for (auto field : {&Avg::uh, &Avg::psi}) {
      auto [mA, seA] = mean_se(avA, field);
      auto [mB, seB] = mean_se(avB, field);
      const double comb = std::sqrt(seA * seA + seB * seB);
      if (std::abs(mA - mB) > 3.0 * comb) pass = false;
      detail += std::string("; ") + (field == &Avg::uh ? "u_H2" : "psi_s0") +
                " diff " + fmt(std::abs(mA - mB)) + " vs 3SE " +
                fmt(3 * comb);
    }
    // plateau of the barrier moment over doubling half-windows
    auto [m1, se1] = mean_se(avA, &Avg::psi1);
    auto [m2, se2] = mean_se(avA, &Avg::psi2);
    const double drift = std::abs(m2 - m1) / std::max(std::abs(m1), 1e-300);
    const bool plateau =
        drift < 0.25 || std::abs(m2 - m1) <= 6.0 * std::hypot(se1, se2);
    if (!plateau) pass = false;
    detail += "; psi_s0 plateau drift " + fmt(drift);
  }

  report(8, "ergodic consistency", pass, detail, timer.secs());
}

// -- criterion 9: Wasserstein estimator -------------------------------------------
void criterion_9() {
  Timer timer;
  bool pass = true;
  std::string detail;

  {  // analytic Gaussian mean shift
    std::mt19937 rng(7);
    std::normal_distribution<double> N01;
    std::vector<double> a, b;
    for (int k = 0; k < 10000; ++k) {
      a.push_back(N01(rng));
      b.push_back(N01(rng) + 0.5);
    }
    const double w1 = wasserstein1(a, b);
    if (std::abs(w1 - 0.5) > 0.05) pass = false;
    detail += "Gaussian shift W1 = " + fmt(w1);
  }
  {  // metric axioms on exact sample sets
    std::mt19937 rng(11);
    std::normal_distribution<double> N01;
    std::vector<double> a, b, c;
    for (int k = 0; k < 500; ++k) {
      a.push_back(N01(rng));
      b.push_back(2.0 * N01(rng) + 1.0);
      c.push_back(0.5 * N01(rng) - 1.0);
    }
    const double ab = wasserstein1(a, b), ba = wasserstein1(b, a);
    const double ac = wasserstein1(a, c), cb = wasserstein1(c, b);
    if (std::abs(ab - ba) > 1e-12) pass = false;
    if (wasserstein1(a, a) > 1e-12) pass = false;
    if (ab > ac + cb + 1e-12) pass = false;
    detail += "; metric axioms hold";
  }
  {  // mixing curve floor for coincident initial data
    SpectralGrid g = build_grid(16, 16);
    PotentialSpec pot = PotentialSpec::make(1.0, 2.0);
    StepperConfig cfg;
    cfg.dt = 2e-3;
    cfg.nu = 0.1;
    cfg.beta = 5.0;
    VelocityNoiseSpec vs = VelocityNoiseSpec::make(g, 0.2, 1.0, 0, 6);
    PhaseNoiseSpec ps = PhaseNoiseSpec::make({0.02, 0.02}, 3, 2, pot);
    const NoisePath ip{15, 0};
    CoupledState init = CoupledState::zero(g);
    init.u = random_solenoidal(g, ip, 0.3, 1.0, 6);
    init.phi = random_scalar(g, ip, 0.3, 1.0, 6, 0.4);
    Observable obs{"u_H2", [&g](const CoupledState& s) {
                     return std::pow(norm_Hsigma(g, s.u), 2);
                   }};
    auto curve = mixing_curve(g, pot, cfg, vs, ps, init, init, obs,
                              {0.2, 0.4}, 24, 77, 2);
    // the two laws coincide, so W1 stays at the finite-sample floor; bound
    // it by the sample spread of the observable itself
    for (const auto& p : curve) {
      if (p.W1 > 0.2) pass = false;
      detail += "; W1(" + fmt(p.t) + ") = " + fmt(p.W1);
    }
  }
  report(9, "Wasserstein estimator", pass, detail, timer.secs());
}

// -- criterion 10: bit-exact reproducibility ---------------------------------------
void criterion_10() {
  Timer timer;
  const std::string cfg_json = R"({
    "grid": {"nx": 16, "ny": 16},
    "physics": {"nu": 0.1, "beta": 5.0},
    "noise": {"sigma0": 0.1, "M": 4, "K_active": 6, "gamma_k": [0.02, 0.02]},
    "stepper": {"dt": 0.002, "horizon": 0.1, "sample_stride": 5,
                "snapshot_stride": 25},
    "initial": {"kind": "random", "u_amplitude": 0.3, "phi_amplitude": 0.3,
                "phi_max": 0.5, "seed": 9},
    "seeds": [3, 4, 5]
  })";
  RunConfig cfg = parse_config(cfg_json);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const fs::path out1 = fs::temp_directory_path() / "acns_acc_replay1";
  const fs::path out2 = fs::temp_directory_path() / "acns_acc_replay2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  cfg.threads = 1;
  Manifest m1 = run_simulate(cfg, out1);
  RunConfig cfg2 = cfg;
  cfg2.threads = 3;
  Manifest m2 = run_simulate(cfg2, out2);

  bool pass = m1.outputs == m2.outputs && m1.config_hash == m2.config_hash;
  int mismatches = 0;
  if (pass)
    for (std::size_t i = 0; i < m1.outputs.size(); ++i)
      if (slurp(out1 / m1.outputs[i]) != slurp(out2 / m2.outputs[i]))
        ++mismatches;
  pass = pass && mismatches == 0;
  report(10, "manifest reproducibility", pass,
         "outputs = " + std::to_string(m1.outputs.size()) +
             ", byte mismatches across worker counts = " +
             std::to_string(mismatches),
         timer.secs());
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
