#include "acns/harness.hpp"

#include "acns/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>

namespace acns {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Lab {
  SpectralGrid grid;
  PotentialSpec pot;
  BarrierFamily barrier;
  StepperConfig stepper;
  VelocityNoiseSpec vspec;
  PhaseNoiseSpec pspec;
  ConstantsTable constants;

  explicit Lab(const RunConfig& cfg)
      : grid(cfg.make_grid()),
        pot(cfg.make_potential()),
        barrier(cfg.make_barrier()),
        stepper(cfg.make_stepper()),
        vspec(cfg.make_velocity_noise(grid)),
        pspec(cfg.make_phase_noise(pot)),
        constants(cfg.resolve_constants(grid, vspec, pspec)) {}
};

json constants_json(const ConstantsTable& c) {
  return json{{"K_L", c.K_L},        {"K_GN", c.K_GN},
              {"K_Delta", c.K_Delta}, {"K4", c.K4},
              {"K_ratio", c.K_ratio}, {"C4", c.C4},
              {"c1", c.c1},           {"c2", c.c2},
              {"c3", c.c3},           {"L_G1", c.L_G1},
              {"L_G2", c.L_G2},       {"gamma", c.gamma},
              {"bC_G", c.bC_G()},     {"bK1", c.bK1()},
              {"bK2", c.bK2()},       {"bK3", c.bK3()}};
}

void write_sidecar(const fs::path& out, const RunConfig& cfg,
                   const ConstantsTable& constants,
                   std::vector<std::string>& outputs) {
  {
    std::ofstream f(out / "config.json");
    f << cfg.canonical_json() << "\n";
  }
  {
    std::ofstream f(out / "constants.json");
    f << constants_json(constants).dump(2) << "\n";
  }
  outputs.push_back("config.json");
  outputs.push_back("constants.json");
}

Manifest finish_manifest(const fs::path& out, const RunConfig& cfg,
                         std::vector<std::string> outputs,
                         std::chrono::steady_clock::time_point t0) {
  std::sort(outputs.begin(), outputs.end());
  Manifest m;
  m.config_hash = cfg.hash();
  m.code_version = kCodeVersion;
  m.seeds = cfg.seeds;
  for (const auto& rel : outputs) {
    m.outputs.push_back(rel);
    m.output_hashes.push_back(fnv1a_file(out / rel));
  }
  m.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  m.write(out / "manifest.json");
  return m;
}

/// Per-step ledger behind the simulate time series: the energy record, the
/// Lambda decomposition (companion = the trajectory itself), the stopping
/// flag, and the a priori monitor integrals at step resolution.
struct SimulateLedger {
  const Lab& lab;
  LambdaLedger lambda;
  StoppingState stopping{1e12, 0.0};
  double I_uV = 0, I_lap = 0, I_Fp = 0, I_uuV = 0, I_F2 = 0, I_psi = 0;
  double p_uV = 0, p_lap = 0, p_Fp = 0, p_uuV = 0, p_F2 = 0, p_psi = 0;

  SimulateLedger(const Lab& l, const CoupledState& s0, double lambda_N)
      : lab(l),
        lambda(make_lambda_ledger(l.grid, l.pot, l.stepper.nu, l.stepper.beta,
                                  lambda_N, l.constants, s0, s0)) {
    prime(s0);
  }

  void prime(const CoupledState& s) {
    const double uv = norm_Vsigma(lab.grid, s.u);
    const double uh = norm_Hsigma(lab.grid, s.u);
    const double lap = norm_V2(lab.grid, s.phi);
    p_uV = uv * uv;
    p_lap = lap * lap;
    p_Fp = lab.pot.off
               ? 0.0
               : std::pow(f_prime_H_norm(lab.grid, lab.pot, s.phi), 2);
    p_uuV = uh * uh * uv * uv;
    p_F2 = lab.pot.off ? 0.0
                       : std::pow(f_second_Lgamma_norm(lab.grid, lab.pot,
                                                       s.phi,
                                                       lab.constants.gamma),
                                  2);
    p_psi = lab.pot.off
                ? 0.0
                : psi_integral(lab.grid, s.phi, lab.barrier.s0 + 1.0);
  }

  void update(const CoupledState& s, double dt) {
    const double uv = norm_Vsigma(lab.grid, s.u);
    const double uh = norm_Hsigma(lab.grid, s.u);
    const double lap = norm_V2(lab.grid, s.phi);
    const double fp =
        lab.pot.off ? 0.0
                    : std::pow(f_prime_H_norm(lab.grid, lab.pot, s.phi), 2);
    const double f2 =
        lab.pot.off
            ? 0.0
            : std::pow(f_second_Lgamma_norm(lab.grid, lab.pot, s.phi,
                                            lab.constants.gamma),
                       2);
    const double ps =
        lab.pot.off ? 0.0
                    : psi_integral(lab.grid, s.phi, lab.barrier.s0 + 1.0);
    I_uV += 0.5 * dt * (p_uV + uv * uv);
    I_lap += 0.5 * dt * (p_lap + lap * lap);
    I_Fp += 0.5 * dt * (p_Fp + fp);
    I_uuV += 0.5 * dt * (p_uuV + uh * uh * uv * uv);
    I_F2 += 0.5 * dt * (p_F2 + f2);
    I_psi += 0.5 * dt * (p_psi + ps);
    p_uV = uv * uv;
    p_lap = lap * lap;
    p_Fp = fp;
    p_uuV = uh * uh * uv * uv;
    p_F2 = f2;
    p_psi = ps;
    update_lambda(lambda, lab.grid, lab.pot, s, s, dt);
    stopping_time(lambda, stopping);
  }
};

const std::vector<std::string> kTimeseriesColumns = {
    "t",          "E",          "kinetic",    "interface",  "potential",
    "dissipation", "lambda",     "tau_hit",    "sync_error", "girsanov_cum",
    "u_H",        "phi_H",      "phi_V1",     "psi_s0",     "I_u_V2",
    "I_lap_phi2", "I_Fprime2",  "I_uu_V2",    "I_phi_V2sq", "I_Fsecond2",
    "I_psi_s0p1"};

void timeseries_row(CsvWriter& csv, const Lab& lab, const CoupledState& s,
                    const SimulateLedger& led, double sync_err,
                    double girsanov_cum) {
  const EnergyRecord e =
      energy(lab.grid, lab.pot, s, lab.stepper.nu, lab.stepper.beta);
  csv.row({s.t,
           e.total,
           e.kinetic,
           e.interface,
           e.potential,
           e.dissipation,
           led.lambda.lambda(),
           led.stopping.is_hit() ? 1.0 : 0.0,
           sync_err,
           girsanov_cum,
           norm_Hsigma(lab.grid, s.u),
           norm_H(lab.grid, s.phi),
           norm_V1(lab.grid, s.phi),
           lab.pot.off ? 0.0 : psi_integral(lab.grid, s.phi, lab.barrier.s0),
           led.I_uV,
           led.I_lap,
           led.I_Fp,
           led.I_uuV,
           led.I_lap,
           led.I_F2,
           led.I_psi});
}

}  // namespace

Manifest run_simulate(const RunConfig& cfg, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out);
  const Lab lab(cfg);
  const CoupledState initial = cfg.make_initial(lab.grid);
  const double lambda_N =
      lab.grid.mode_lambda(std::max(cfg.nudge_N, 1) - 1);
  const int n_steps = step_count(cfg.horizon, cfg.dt);

  std::vector<std::vector<std::string>> member_outputs(cfg.seeds.size());
  parallel_for(
      static_cast<int>(cfg.seeds.size()), cfg.resolve_threads(), [&](int m) {
        const std::uint64_t seed = cfg.seeds[m];
        const NoisePath path{seed, 0};
        const std::string base = "timeseries_seed" + std::to_string(seed);
        CsvWriter csv(out / (base + ".csv"), kTimeseriesColumns);
        member_outputs[m].push_back(base + ".csv");

        CoupledState s = initial;
        s.u = leray_project(lab.grid, dealias(lab.grid, s.u.ux),
                            dealias(lab.grid, s.u.uy));
        SimulateLedger led(lab, s, lambda_N);
        timeseries_row(csv, lab, s, led, 0.0, 0.0);
        auto snapshot = [&](const CoupledState& st, int k) {
          const std::string tag =
              "seed" + std::to_string(seed) + "_step" + std::to_string(k);
          write_scalar_snapshot(out / ("phi_" + tag + ".field"), lab.grid,
                                st.phi, st.t);
          write_solenoidal_snapshot(out / ("u_" + tag + ".field"), lab.grid,
                                    st.u, st.t);
          member_outputs[m].push_back("phi_" + tag + ".field");
          member_outputs[m].push_back("u_" + tag + ".field");
        };
        if (cfg.snapshot_stride > 0) snapshot(s, 0);
        run(lab.grid, lab.pot, lab.stepper, lab.vspec, lab.pspec, s,
            cfg.horizon, path, [&](const CoupledState& st, int k) {
              led.update(st, cfg.dt);
              if (k % cfg.sample_stride == 0 || k == n_steps)
                timeseries_row(csv, lab, st, led, 0.0, 0.0);
              if (cfg.snapshot_stride > 0 &&
                  (k % cfg.snapshot_stride == 0 || k == n_steps))
                snapshot(st, k);
            });
      });

  std::vector<std::string> outputs;
  for (auto& mo : member_outputs)
    outputs.insert(outputs.end(), mo.begin(), mo.end());
  write_sidecar(out, cfg, lab.constants, outputs);
  return finish_manifest(out, cfg, std::move(outputs), t0);
}

Manifest run_sync(const RunConfig& cfgA, const RunConfig& cfgB,
                  const DispatchOptions& opt, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out);
  const Lab lab(cfgA);
  const int N = opt.sync_N >= 0 ? opt.sync_N : cfgA.nudge_N;
  if (N < 1 || N > lab.vspec.M)
    throw ConfigError({"sync: requires 1 <= N <= noise.M"});

  const CoupledState initialA = cfgA.make_initial(lab.grid);
  const CoupledState initialB = cfgB.make_initial(lab.grid);

  int n_seeds = opt.sync_seeds > 0 ? opt.sync_seeds
                                   : static_cast<int>(cfgA.seeds.size());
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n_seeds; ++i)
    seeds.push_back(i < static_cast<int>(cfgA.seeds.size())
                        ? cfgA.seeds[i]
                        : cfgA.seeds.back() + (i - cfgA.seeds.size() + 1));

  const FPReport rep = foias_prodi_experiment(
      lab.grid, lab.pot, lab.stepper, lab.vspec, lab.pspec, initialA, initialB,
      N, cfgA.horizon, seeds, cfgA.sample_stride, lab.constants.K_Delta,
      cfgA.resolve_threads());

  std::vector<std::string> outputs;
  {
    CsvWriter csv(out / "sync_summary.csv",
                  {"t", "median_nudged", "median_control"});
    for (std::size_t k = 0; k < rep.nudged.t.size(); ++k)
      csv.row({rep.nudged.t[k], rep.nudged.median[k], rep.control.median[k]});
    outputs.push_back("sync_summary.csv");
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::string name = "sync_seed" + std::to_string(seeds[i]) + ".csv";
    CsvWriter csv(out / name, {"t", "sync_nudged", "sync_control"});
    for (std::size_t k = 0; k < rep.nudged.t.size(); ++k)
      csv.row({rep.nudged.t[k], rep.nudged.sync[i][k], rep.control.sync[i][k]});
    outputs.push_back(name);
  }

  // detailed diagnostics ledger along the first seed's synchronized pair
  {
    const NudgeConfig nudge = make_nudge(lab.grid, N, lab.stepper.nu);
    const double lamN = lab.grid.mode_lambda(N - 1);
    const double eps = epsilon_from_initial(lab.grid, lab.pot, lab.barrier,
                                            lab.constants, lab.stepper.nu,
                                            lab.stepper.beta, initialA,
                                            initialB);
    CoupledState a = initialA, b = initialB;
    a.u = leray_project(lab.grid, dealias(lab.grid, a.u.ux),
                        dealias(lab.grid, a.u.uy));
    b.u = leray_project(lab.grid, dealias(lab.grid, b.u.ux),
                        dealias(lab.grid, b.u.uy));
    LambdaLedger led = make_lambda_ledger(lab.grid, lab.pot, lab.stepper.nu,
                                          lab.stepper.beta, lamN,
                                          lab.constants, a, b);
    StoppingState stop{opt.stopping_R, eps};
    GirsanovLedger gir;
    {
      const GirsanovShift sh = girsanov_shift(lab.grid, lab.vspec, a.u, b.u,
                                              nudge.eta, N);
      gir.add(sh.norm_sq, 0.0);
    }
    CsvWriter csv(out / "pair_detail.csv",
                  {"t", "E", "kinetic", "interface", "potential",
                   "dissipation", "lambda", "tau_hit", "sync_error",
                   "girsanov_cum"});
    auto detail_row = [&]() {
      const EnergyRecord e = energy(lab.grid, lab.pot, a, lab.stepper.nu,
                                    lab.stepper.beta);
      csv.row({a.t, e.total, e.kinetic, e.interface, e.potential,
               e.dissipation, led.lambda(), stop.is_hit() ? 1.0 : 0.0,
               sync_error(lab.grid, b, a, lab.stepper.beta), gir.integral});
    };
    detail_row();
    const int n = step_count(cfgA.horizon, cfgA.dt);
    const NoisePath path{seeds.front(), 0};
    for (int k = 0; k < n; ++k) {
      const NoiseIncrements inc = sample_increments(
          path, static_cast<std::uint64_t>(k), cfgA.dt, lab.vspec, lab.pspec);
      a = step(lab.grid, lab.pot, lab.stepper, lab.vspec, lab.pspec, a, inc);
      b = step(lab.grid, lab.pot, lab.stepper, lab.vspec, lab.pspec, b, inc,
               &nudge, &a.u);
      update_lambda(led, lab.grid, lab.pot, a, b, cfgA.dt);
      stopping_time(led, stop);
      const GirsanovShift sh =
          girsanov_shift(lab.grid, lab.vspec, a.u, b.u, nudge.eta, N);
      gir.add(sh.norm_sq, cfgA.dt);
      if ((k + 1) % cfgA.sample_stride == 0 || k + 1 == n) detail_row();
    }
    outputs.push_back("pair_detail.csv");
  }

  {
    json j;
    j["nudged_median_final_over_initial"] = rep.nudged.median_final_over_initial;
    j["control_median_final_over_initial"] =
        rep.control.median_final_over_initial;
    j["nudged_log_slope"] = rep.nudged.log_slope;
    j["control_log_slope"] = rep.control.log_slope;
    j["envelope_rate"] = rep.envelope_rate;
    j["N"] = N;
    j["eta"] = make_nudge(lab.grid, N, lab.stepper.nu).eta;
    std::ofstream f(out / "sync_report.json");
    f << j.dump(2) << "\n";
    outputs.push_back("sync_report.json");
  }

  write_sidecar(out, cfgA, lab.constants, outputs);
  return finish_manifest(out, cfgA, std::move(outputs), t0);
}

Manifest run_ergodic(const RunConfig& cfg, const DispatchOptions& opt,
                     const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out);
  const Lab lab(cfg);
  const double horizon =
      opt.horizon_override > 0 ? opt.horizon_override : cfg.horizon;
  const int ensemble = opt.ensemble;
  const CoupledState initial = cfg.make_initial(lab.grid);
  const ObservableSet obs = standard_observables(
      lab.grid, lab.pot, lab.barrier, lab.stepper.nu, lab.stepper.beta);
  const int n_steps = step_count(horizon, cfg.dt);

  // sampled observable series per member
  std::vector<std::vector<std::vector<double>>> series(
      ensemble, std::vector<std::vector<double>>(obs.size()));
  std::vector<std::vector<double>> times(ensemble);
  parallel_for(ensemble, cfg.resolve_threads(), [&](int m) {
    const NoisePath path{cfg.seeds.front(), static_cast<std::uint64_t>(m)};
    CoupledState s = initial;
    s.u = leray_project(lab.grid, dealias(lab.grid, s.u.ux),
                        dealias(lab.grid, s.u.uy));
    times[m].push_back(0.0);
    for (std::size_t i = 0; i < obs.size(); ++i)
      series[m][i].push_back(obs[i].fn(s));
    run(lab.grid, lab.pot, lab.stepper, lab.vspec, lab.pspec, s, horizon, path,
        [&](const CoupledState& st, int k) {
          if (k % cfg.sample_stride == 0 || k == n_steps) {
            times[m].push_back(st.t);
            for (std::size_t i = 0; i < obs.size(); ++i)
              series[m][i].push_back(obs[i].fn(st));
          }
        });
  });

  std::vector<std::string> outputs;
  const double burn = cfg.burn_in_fraction * horizon;

  {  // Krylov-Bogoliubov ladder, ensemble mean and spread per observable
    const int n_windows = 8;
    std::vector<std::vector<KBWindow>> ladders(ensemble);
    for (int m = 0; m < ensemble; ++m)
      ladders[m] = kb_average(times[m], series[m], n_windows);
    std::vector<std::string> cols = {"t"};
    for (const auto& o : obs) {
      cols.push_back(o.name + "_mu");
      cols.push_back(o.name + "_se");
    }
    CsvWriter csv(out / "kb_averages.csv", cols);
    for (int w = 0; w < n_windows; ++w) {
      std::vector<double> row = {ladders.front()[w].t};
      for (std::size_t i = 0; i < obs.size(); ++i) {
        double mean = 0;
        for (int m = 0; m < ensemble; ++m) mean += ladders[m][w].mu[i];
        mean /= ensemble;
        double var = 0;
        for (int m = 0; m < ensemble; ++m)
          var += std::pow(ladders[m][w].mu[i] - mean, 2);
        const double se =
            ensemble > 1 ? std::sqrt(var / (ensemble - 1) / ensemble) : 0.0;
        row.push_back(mean);
        row.push_back(se);
      }
      csv.row(row);
    }
    outputs.push_back("kb_averages.csv");
  }

  {  // pooled support moments: member time-averages, spread across members
    CsvWriter csv(out / "support_moments.csv",
                  {"observable", "mean", "std_error", "plateau", "drift"});
    for (std::size_t i = 0; i < obs.size(); ++i) {
      std::vector<double> avg(ensemble, 0.0);
      std::vector<double> half1(ensemble, 0.0), half2(ensemble, 0.0);
      for (int m = 0; m < ensemble; ++m) {
        double acc = 0, len = 0, acc1 = 0, len1 = 0, acc2 = 0, len2 = 0;
        const auto& t = times[m];
        const auto& x = series[m][i];
        const double mid = burn + 0.5 * (horizon - burn);
        for (std::size_t k = 1; k < t.size(); ++k) {
          if (t[k] < burn) continue;
          const double dt = t[k] - t[k - 1];
          const double v = 0.5 * (x[k] + x[k - 1]);
          acc += dt * v;
          len += dt;
          if (t[k] <= mid) {
            acc1 += dt * v;
            len1 += dt;
          } else {
            acc2 += dt * v;
            len2 += dt;
          }
        }
        avg[m] = len > 0 ? acc / len : x.back();
        half1[m] = len1 > 0 ? acc1 / len1 : avg[m];
        half2[m] = len2 > 0 ? acc2 / len2 : avg[m];
      }
      double mean = 0;
      for (double v : avg) mean += v;
      mean /= ensemble;
      double var = 0;
      for (double v : avg) var += (v - mean) * (v - mean);
      const double se =
          ensemble > 1 ? std::sqrt(var / (ensemble - 1) / ensemble) : 0.0;
      double m1 = 0, m2 = 0;
      for (int m = 0; m < ensemble; ++m) {
        m1 += half1[m];
        m2 += half2[m];
      }
      m1 /= ensemble;
      m2 /= ensemble;
      const double scale = std::max({std::abs(m1), std::abs(m2), 1e-300});
      const double drift = std::abs(m2 - m1) / scale;
      const bool plateau = std::isfinite(mean) &&
                           (drift < 0.25 || std::abs(m2 - m1) <= 6.0 * se);
      csv.raw_row({obs[i].name, fmt_g17(mean), fmt_g17(se),
                   plateau ? "1" : "0", fmt_g17(drift)});
    }
    outputs.push_back("support_moments.csv");
  }

  write_sidecar(out, cfg, lab.constants, outputs);
  return finish_manifest(out, cfg, std::move(outputs), t0);
}

Manifest run_tail(const RunConfig& cfg, const DispatchOptions& opt,
                  const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out);
  const Lab lab(cfg);
  if (cfg.nudge_N < 1)
    throw ConfigError({"tail: requires nudge.N >= 1"});
  const double horizon =
      opt.horizon_override > 0 ? opt.horizon_override : cfg.horizon;
  const CoupledState initialA = cfg.make_initial(lab.grid);
  RunConfig cfgB = cfg;
  cfgB.initial.seed = cfg.initial.seed + 1;
  const CoupledState initialB = cfgB.make_initial(lab.grid);

  const TailReport rep = stopping_tail(
      lab.grid, lab.pot, lab.stepper, lab.vspec, lab.pspec, lab.barrier,
      lab.constants, initialA, initialB, cfg.nudge_N, opt.R_grid, horizon,
      opt.ensemble, cfg.seeds.front(), opt.eps_override,
      cfg.resolve_threads());

  std::vector<std::string> outputs;
  {
    CsvWriter csv(out / "tail.csv", {"R", "p_hit"});
    for (std::size_t i = 0; i < rep.R.size(); ++i)
      csv.row({rep.R[i], rep.p_hit[i]});
    outputs.push_back("tail.csv");
  }
  {
    json j;
    j["eps"] = rep.eps;
    j["loglog_slope"] = rep.loglog_slope;
    j["ensemble"] = opt.ensemble;
    j["horizon"] = horizon;
    std::ofstream f(out / "tail_report.json");
    f << j.dump(2) << "\n";
    outputs.push_back("tail_report.json");
  }
  write_sidecar(out, cfg, lab.constants, outputs);
  return finish_manifest(out, cfg, std::move(outputs), t0);
}

Manifest run_sweep(const RunConfig& cfg, const DispatchOptions& opt,
                   const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out);
  std::vector<int> N_grid = opt.N_grid;
  std::vector<double> beta_grid = opt.beta_grid;
  if (N_grid.empty()) N_grid = {4, 16};
  if (beta_grid.empty()) beta_grid = {cfg.beta};
  const int n_seeds = opt.sync_seeds > 0 ? opt.sync_seeds : 4;

  std::vector<std::string> outputs;
  CsvWriter csv(out / "sweep.csv",
                {"N", "beta", "lambda_N", "eta", "condition_lhs",
                 "condition_rhs", "condition_ok", "median_ratio_nudged",
                 "median_ratio_control", "log_slope_nudged"});
  ConstantsTable last_constants;
  for (double beta : beta_grid) {
    RunConfig c = cfg;
    c.beta = beta;
    const Lab lab(c);
    last_constants = lab.constants;
    const CoupledState initialA = c.make_initial(lab.grid);
    RunConfig cB = c;
    cB.initial.seed = c.initial.seed + 1;
    const CoupledState initialB = cB.make_initial(lab.grid);
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < n_seeds; ++i)
      seeds.push_back(c.seeds.front() + static_cast<std::uint64_t>(i));
    for (int N : N_grid) {
      if (N < 1 || N > lab.vspec.M)
        throw ConfigError({"sweep: N-grid entries must satisfy 1 <= N <= M"});
      const FPReport rep = foias_prodi_experiment(
          lab.grid, lab.pot, lab.stepper, lab.vspec, lab.pspec, initialA,
          initialB, N, c.horizon, seeds, c.sample_stride,
          lab.constants.K_Delta, c.resolve_threads());
      const double lamN = lab.grid.mode_lambda(N - 1);
      const ConditionReport cond =
          check_condition(c.nu, beta, lamN, lab.constants);
      csv.row({static_cast<double>(N), beta, lamN,
               make_nudge(lab.grid, N, c.nu).eta, cond.lhs, cond.rhs,
               cond.satisfied ? 1.0 : 0.0,
               rep.nudged.median_final_over_initial,
               rep.control.median_final_over_initial, rep.nudged.log_slope});
    }
  }
  csv.close();
  outputs.push_back("sweep.csv");
  write_sidecar(out, cfg, last_constants, outputs);
  return finish_manifest(out, cfg, std::move(outputs), t0);
}

int run_check_condition(const DispatchOptions& opt, std::ostream& os) {
  ConstantsTable table;
  table.L_G1 = 0.0;
  table.L_G2 = 0.0;
  if (!opt.cc_constants_path.empty())
    table = load_constants(opt.cc_constants_path, table);
  const ConditionReport rep =
      check_condition(opt.cc_nu, opt.cc_beta, opt.cc_lambdaN, table);
  os << "lhs = " << fmt_g17(rep.lhs) << "\n"
     << "rhs = " << fmt_g17(rep.rhs) << "\n"
     << "satisfied = " << (rep.satisfied ? "true" : "false") << "\n";
  return 0;
}

int dispatch(const std::string& subcommand, const RunConfig& cfg,
             const DispatchOptions& opt, const fs::path& out,
             std::ostream& os) {
  try {
    if (subcommand == "simulate") {
      run_simulate(cfg, out);
    } else if (subcommand == "sync") {
      RunConfig cfgB = cfg;
      if (!opt.configB_path.empty()) cfgB = load_config(opt.configB_path);
      run_sync(cfg, cfgB, opt, out);
    } else if (subcommand == "ergodic") {
      run_ergodic(cfg, opt, out);
    } else if (subcommand == "tail") {
      run_tail(cfg, opt, out);
    } else if (subcommand == "sweep") {
      run_sweep(cfg, opt, out);
    } else if (subcommand == "check-condition") {
      return run_check_condition(opt, os);
    } else {
      os << "unknown subcommand: " << subcommand << "\n";
      return 2;
    }
  } catch (const std::exception& e) {
    os << subcommand << " failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace acns
