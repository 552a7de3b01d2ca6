#include "acns/ergodics.hpp"

#include "acns/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace acns {

ObservableSet standard_observables(const SpectralGrid& g,
                                   const PotentialSpec& pot,
                                   const BarrierFamily& barrier, double nu,
                                   double beta) {
  ObservableSet obs;
  obs.push_back({"energy", [&g, pot, nu, beta](const CoupledState& s) {
                   return energy(g, pot, s, nu, beta).total;
                 }});
  obs.push_back({"u_H2", [&g](const CoupledState& s) {
                   return std::pow(norm_Hsigma(g, s.u), 2);
                 }});
  obs.push_back({"u_V2", [&g](const CoupledState& s) {
                   return std::pow(norm_Vsigma(g, s.u), 2);
                 }});
  obs.push_back({"phi_V1_2", [&g](const CoupledState& s) {
                   return std::pow(norm_V1(g, s.phi), 2);
                 }});
  obs.push_back({"phi_V2_2", [&g](const CoupledState& s) {
                   return std::pow(norm_V2(g, s.phi), 2);
                 }});
  obs.push_back({"fprime_H2", [&g, pot](const CoupledState& s) {
                   return pot.off ? 0.0
                                  : std::pow(f_prime_H_norm(g, pot, s.phi), 2);
                 }});
  obs.push_back({"psi_1", [&g, pot](const CoupledState& s) {
                   return pot.off ? 0.0 : psi_integral(g, s.phi, 1.0);
                 }});
  obs.push_back({"psi_s0", [&g, pot, barrier](const CoupledState& s) {
                   return pot.off ? 0.0
                                  : psi_integral(g, s.phi, barrier.s0);
                 }});
  const char* names[4] = {"u_coef_1", "u_coef_2", "u_coef_3", "u_coef_4"};
  for (int k = 0; k < 4; ++k) {
    const int rank = k / 2;
    const bool cos_phase = (k % 2 == 0);
    obs.push_back({names[k], [&g, rank, cos_phase](const CoupledState& s) {
                     return cos_phase ? coef_cos(g, s.u, rank)
                                      : coef_sin(g, s.u, rank);
                   }});
  }
  return obs;
}

std::vector<KBWindow> kb_average(const std::vector<double>& t,
                                 const std::vector<std::vector<double>>& series,
                                 int n_windows) {
  if (t.size() < 2) throw std::invalid_argument("kb_average: empty trajectory");
  for (const auto& s : series)
    if (s.size() != t.size())
      throw std::invalid_argument("kb_average: series length mismatch");
  const double t0 = t.front();
  const double T = t.back() - t0;
  std::vector<KBWindow> out;
  out.reserve(n_windows);
  std::vector<double> acc(series.size(), 0.0);
  std::size_t k = 1;
  for (int w = 1; w <= n_windows; ++w) {
    const double tw = t0 + T * w / n_windows;
    while (k < t.size() && t[k] <= tw + 1e-12 * std::max(1.0, tw)) {
      const double dt = t[k] - t[k - 1];
      for (std::size_t i = 0; i < series.size(); ++i)
        acc[i] += 0.5 * dt * (series[i][k] + series[i][k - 1]);
      ++k;
    }
    KBWindow win;
    win.t = t[k - 1];
    const double len = win.t - t0;
    win.mu.resize(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
      win.mu[i] = len > 0 ? acc[i] / len : series[i].front();
    out.push_back(std::move(win));
  }
  return out;
}

void EmpiricalMeasure::append(double time, const std::vector<double>& values) {
  if (samples.empty()) samples.resize(values.size());
  if (values.size() != samples.size())
    throw std::invalid_argument("EmpiricalMeasure: arity mismatch");
  t.push_back(time);
  for (std::size_t i = 0; i < values.size(); ++i)
    samples[i].push_back(values[i]);
}

namespace {

double batch_means_se(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  const int nb = std::clamp(n / 4, 2, 16);
  const int len = n / nb;
  std::vector<double> means;
  for (int b = 0; b < nb; ++b) {
    double s = 0;
    for (int i = b * len; i < (b + 1) * len; ++i) s += x[i];
    means.push_back(s / len);
  }
  const double m =
      std::accumulate(means.begin(), means.end(), 0.0) / means.size();
  double var = 0;
  for (double v : means) var += (v - m) * (v - m);
  var /= (means.size() - 1);
  return std::sqrt(var / means.size());
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<MomentEstimate> support_moments(const EmpiricalMeasure& em) {
  std::vector<MomentEstimate> out;
  for (std::size_t i = 0; i < em.samples.size(); ++i) {
    std::vector<double> kept;
    for (std::size_t k = 0; k < em.t.size(); ++k)
      if (em.t[k] >= em.burn_in) kept.push_back(em.samples[i][k]);
    if (kept.size() < 8)
      throw std::invalid_argument("support_moments: insufficient samples");
    MomentEstimate est;
    est.name = i < em.names.size() ? em.names[i] : "obs_" + std::to_string(i);
    est.mean = std::accumulate(kept.begin(), kept.end(), 0.0) / kept.size();
    est.std_error = batch_means_se(kept);
    const std::size_t half = kept.size() / 2;
    const double m1 =
        std::accumulate(kept.begin(), kept.begin() + half, 0.0) / half;
    const double m2 = std::accumulate(kept.begin() + half, kept.end(), 0.0) /
                      (kept.size() - half);
    const double scale = std::max({std::abs(m1), std::abs(m2), 1e-300});
    est.drift = std::abs(m2 - m1) / scale;
    est.plateau = std::isfinite(est.mean) &&
                  (est.drift < 0.25 || std::abs(m2 - m1) <= 6.0 * est.std_error);
    out.push_back(std::move(est));
  }
  return out;
}

namespace {

struct PairRun {
  std::vector<double> t;
  std::vector<double> sync;
};

// Shared-noise pair: reference system from initialA, nudged companion from
// initialB with the reference velocity taken at the updated time level.
PairRun run_pair(const SpectralGrid& g, const PotentialSpec& pot,
                 const StepperConfig& cfg, const VelocityNoiseSpec& vspec,
                 const PhaseNoiseSpec& pspec, const CoupledState& initialA,
                 const CoupledState& initialB, const NudgeConfig& nudge,
                 double horizon, const NoisePath& path, int stride,
                 const std::function<void(const CoupledState&,
                                          const CoupledState&, int)>& hook =
                     nullptr) {
  const int n = step_count(horizon, cfg.dt);
  CoupledState a = initialA, b = initialB;
  a.u = leray_project(g, dealias(g, a.u.ux), dealias(g, a.u.uy));
  b.u = leray_project(g, dealias(g, b.u.ux), dealias(g, b.u.uy));
  PairRun out;
  out.t.push_back(0.0);
  out.sync.push_back(sync_error(g, b, a, cfg.beta));
  for (int k = 0; k < n; ++k) {
    const NoiseIncrements inc = sample_increments(
        path, static_cast<std::uint64_t>(k), cfg.dt, vspec, pspec);
    a = step(g, pot, cfg, vspec, pspec, a, inc);
    b = step(g, pot, cfg, vspec, pspec, b, inc, &nudge, &a.u);
    if (hook) hook(a, b, k + 1);
    if ((k + 1) % stride == 0 || k + 1 == n) {
      out.t.push_back(a.t);
      out.sync.push_back(sync_error(g, b, a, cfg.beta));
    }
  }
  return out;
}

FPArm collect_arm(std::vector<PairRun> runs) {
  FPArm arm;
  if (runs.empty()) return arm;
  arm.t = runs.front().t;
  for (auto& r : runs) arm.sync.push_back(std::move(r.sync));
  arm.median.resize(arm.t.size());
  for (std::size_t k = 0; k < arm.t.size(); ++k) {
    std::vector<double> col;
    col.reserve(arm.sync.size());
    for (const auto& s : arm.sync) col.push_back(s[k]);
    arm.median[k] = median_of(col);
  }
  const double init = arm.median.front();
  arm.median_final_over_initial =
      init > 0 ? arm.median.back() / init
               : (arm.median.back() == 0 ? 0
                                         : std::numeric_limits<double>::infinity());
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < arm.t.size(); ++k)
    if (arm.median[k] > 0) {
      xs.push_back(arm.t[k]);
      ys.push_back(std::log(arm.median[k]));
    }
  arm.log_slope = fit_slope(xs, ys);
  return arm;
}

}  // namespace

FPReport foias_prodi_experiment(
    const SpectralGrid& g, const PotentialSpec& pot, const StepperConfig& cfg,
    const VelocityNoiseSpec& vspec, const PhaseNoiseSpec& pspec,
    const CoupledState& initialA, const CoupledState& initialB, int nudge_N,
    double horizon, const std::vector<std::uint64_t>& seeds, int sample_stride,
    double K_Delta, int n_threads) {
  const NudgeConfig nudged = make_nudge(g, nudge_N, cfg.nu);
  const NudgeConfig control = make_nudge(g, 0, cfg.nu);
  std::vector<PairRun> nruns(seeds.size()), cruns(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), n_threads, [&](int i) {
    const NoisePath path{seeds[i], 0};
    nruns[i] = run_pair(g, pot, cfg, vspec, pspec, initialA, initialB, nudged,
                        horizon, path, sample_stride);
    cruns[i] = run_pair(g, pot, cfg, vspec, pspec, initialA, initialB, control,
                        horizon, path, sample_stride);
  });
  FPReport rep;
  rep.nudged = collect_arm(std::move(nruns));
  rep.control = collect_arm(std::move(cruns));
  const double lamN = nudge_N > 0 ? g.mode_lambda(nudge_N - 1) : 0.0;
  rep.envelope_rate =
      0.25 * std::min(cfg.nu * lamN,
                      cfg.beta * cfg.beta / (K_Delta * K_Delta));
  return rep;
}

double epsilon_from_initial(const SpectralGrid& g, const PotentialSpec& pot,
                            const BarrierFamily& barrier,
                            const ConstantsTable& c, double nu, double beta,
                            const CoupledState& initialA,
                            const CoupledState& initialB) {
  const double x2 = std::pow(norm_Hsigma(g, initialA.u), 2);
  const double yH2 = std::pow(norm_H(g, initialA.phi), 2);
  const double yV2 = std::pow(norm_V1(g, initialA.phi), 2);
  const double psiA = pot.off ? 0.0 : psi_integral(g, initialA.phi, barrier.s0);
  const double psiB = pot.off ? 0.0 : psi_integral(g, initialB.phi, barrier.s0);
  const double e1 = 3.0 * c.bK1() / (nu * std::pow(std::min(nu, beta), 3)) *
                    (c.c1 + 2.0) *
                    (1.0 + x2 * x2 + yH2 * yH2 + beta * beta * yV2 * yV2);
  const double e2 =
      3.0 *
      (c.L_G2 * std::pow(c.C4, 4) * nu * nu + c.bK2() * std::max(nu, beta)) /
      (beta * beta * nu * nu) * (c.c2 + 2.0) * (1.0 + x2 + yH2 + beta * yV2);
  const double e3 = 6.0 * c.bK3() / beta * (c.c3 + 1.0) *
                    (1.0 + psiA + psiB);
  return std::max({e1, e2, e3});
}

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
                         double eps_override, int n_threads) {
  TailReport rep;
  rep.eps = eps_override >= 0.0
                ? eps_override
                : epsilon_from_initial(g, pot, barrier, constants, cfg.nu,
                                       cfg.beta, initialA, initialB);
  const double lamN = nudge_N > 0 ? g.mode_lambda(nudge_N - 1) : 0.0;
  const NudgeConfig nudge = make_nudge(g, nudge_N, cfg.nu);

  // per-member supremum of the drift statistic over the horizon
  std::vector<double> sup_stat(ensemble,
                               -std::numeric_limits<double>::infinity());
  parallel_for(ensemble, n_threads, [&](int m) {
    const NoisePath path{base_seed, static_cast<std::uint64_t>(m)};
    LambdaLedger led;
    bool primed = false;
    CoupledState prev_a, prev_b;
    double sup = -std::numeric_limits<double>::infinity();
    auto hook = [&](const CoupledState& a, const CoupledState& b, int) {
      if (!primed) {
        led = make_lambda_ledger(g, pot, cfg.nu, cfg.beta, lamN, constants,
                                 prev_a, prev_b);
        primed = true;
      }
      update_lambda(led, g, pot, a, b, cfg.dt);
      sup = std::max(sup, stopping_statistic(led, rep.eps));
    };
    prev_a = initialA;
    prev_b = initialB;
    prev_a.u = leray_project(g, dealias(g, prev_a.u.ux),
                             dealias(g, prev_a.u.uy));
    prev_b.u = leray_project(g, dealias(g, prev_b.u.ux),
                             dealias(g, prev_b.u.uy));
    run_pair(g, pot, cfg, vspec, pspec, initialA, initialB, nudge, horizon,
             path, step_count(horizon, cfg.dt), hook);
    sup_stat[m] = sup;
  });

  for (double R : R_grid) {
    int hits = 0;
    for (double s : sup_stat)
      if (s >= R) ++hits;
    rep.R.push_back(R);
    rep.p_hit.push_back(static_cast<double>(hits) / ensemble);
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rep.R.size(); ++i)
    if (rep.p_hit[i] > 0 && rep.R[i] > 0) {
      lx.push_back(std::log(rep.R[i]));
      ly.push_back(std::log(rep.p_hit[i]));
    }
  rep.loglog_slope = fit_slope(lx, ly);
  return rep;
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("wasserstein1: need at least two samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t n = a.size(), m = b.size();
  if (n == m) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
    return s / n;
  }
  // quantile coupling on the merged probability breakpoints
  double w = 0, c = 0;
  std::size_t ia = 0, ib = 0;
  while (ia < n && ib < m) {
    const double pa = static_cast<double>(ia + 1) / n;
    const double pb = static_cast<double>(ib + 1) / m;
    const double p = std::min(pa, pb);
    w += (p - c) * std::abs(a[ia] - b[ib]);
    c = p;
    if (pa <= p) ++ia;
    if (pb <= p) ++ib;
  }
  return w;
}

double rho_distance(const SpectralGrid& g, const CoupledState& a,
                    const CoupledState& b) {
  require_phase_bound(a.phi);
  require_phase_bound(b.phi);
  const double du = norm_Hsigma(g, a.u - b.u);
  ScalarField dphi(RealGrid(a.phi.v - b.phi.v));
  const double dv2 = norm_V2(g, dphi);
  double dinf = 0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j)
      dinf = std::max(dinf, std::abs(std::atanh(a.phi.v(i, j)) -
                                     std::atanh(b.phi.v(i, j))));
  return du + dv2 + dinf;
}

std::vector<MixingPoint> mixing_curve(
    const SpectralGrid& g, const PotentialSpec& pot, const StepperConfig& cfg,
    const VelocityNoiseSpec& vspec, const PhaseNoiseSpec& pspec,
    const CoupledState& initialA, const CoupledState& initialB,
    const Observable& observable, const std::vector<double>& checkpoints,
    int ensemble, std::uint64_t base_seed, int n_threads) {
  std::vector<int> steps;
  for (double t : checkpoints) steps.push_back(step_count(t, cfg.dt));
  const int total = steps.empty() ? 0 : steps.back();

  std::vector<std::vector<double>> valsA(checkpoints.size()),
      valsB(checkpoints.size());
  for (auto& v : valsA) v.resize(ensemble);
  for (auto& v : valsB) v.resize(ensemble);
  std::vector<CoupledState> repA(checkpoints.size()), repB(checkpoints.size());

  parallel_for(ensemble, n_threads, [&](int m) {
    // disjoint streams for the two ensembles
    const NoisePath pathA{base_seed, 2 * static_cast<std::uint64_t>(m)};
    const NoisePath pathB{base_seed, 2 * static_cast<std::uint64_t>(m) + 1};
    CoupledState a = initialA, b = initialB;
    a.u = leray_project(g, dealias(g, a.u.ux), dealias(g, a.u.uy));
    b.u = leray_project(g, dealias(g, b.u.ux), dealias(g, b.u.uy));
    std::size_t next = 0;
    for (int k = 0; k < total; ++k) {
      const NoiseIncrements incA = sample_increments(
          pathA, static_cast<std::uint64_t>(k), cfg.dt, vspec, pspec);
      const NoiseIncrements incB = sample_increments(
          pathB, static_cast<std::uint64_t>(k), cfg.dt, vspec, pspec);
      a = step(g, pot, cfg, vspec, pspec, a, incA);
      b = step(g, pot, cfg, vspec, pspec, b, incB);
      while (next < steps.size() && k + 1 == steps[next]) {
        valsA[next][m] = observable.fn(a);
        valsB[next][m] = observable.fn(b);
        if (m == 0) {
          repA[next] = a;
          repB[next] = b;
        }
        ++next;
      }
    }
  });

  std::vector<MixingPoint> out;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    MixingPoint p;
    p.t = checkpoints[c];
    p.W1 = wasserstein1(valsA[c], valsB[c]);
    p.rho = rho_distance(g, repA[c], repB[c]);
    out.push_back(p);
  }
  return out;
}

}  // namespace acns
