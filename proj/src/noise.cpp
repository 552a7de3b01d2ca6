#include "acns/noise.hpp"

#include <array>
#include <cmath>

namespace acns {

namespace {

struct U32x4 {
  std::uint32_t v[4];
};

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// Philox4x32-10 (Salmon et al. constants)
U32x4 philox(U32x4 ctr, std::uint32_t k0, std::uint32_t k1) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(M0, ctr.v[0], hi0, lo0);
    mulhilo(M1, ctr.v[2], hi1, lo1);
    ctr = U32x4{{hi1 ^ ctr.v[1] ^ k0, lo1, hi0 ^ ctr.v[3] ^ k1, lo0}};
    k0 += W0;
    k1 += W1;
  }
  return ctr;
}

inline std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline double uniform_open(std::uint32_t a, std::uint32_t b) {
  const std::uint64_t v = (static_cast<std::uint64_t>(a) << 32) | b;
  return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
}

double chebyshev_T(int k, double r) {
  if (k == 0) return 1.0;
  if (k == 1) return r;
  double tm = 1.0, t = r;
  for (int i = 2; i <= k; ++i) {
    const double tn = 2.0 * r * t - tm;
    tm = t;
    t = tn;
  }
  return t;
}

double chebyshev_U(int k, double r) {
  if (k < 0) return 0.0;
  if (k == 0) return 1.0;
  double um = 1.0, u = 2.0 * r;
  if (k == 1) return u;
  for (int i = 2; i <= k; ++i) {
    const double un = 2.0 * r * u - um;
    um = u;
    u = un;
  }
  return u;
}

}  // namespace

GaussianPair gaussian_pair(const NoisePath& path, std::uint64_t step,
                           std::uint32_t channel, NoiseDomain domain) {
  const std::uint64_t key = splitmix(path.seed ^ splitmix(path.stream));
  U32x4 ctr{{static_cast<std::uint32_t>(step),
             static_cast<std::uint32_t>(step >> 32), channel,
             static_cast<std::uint32_t>(domain)}};
  const U32x4 w = philox(ctr, static_cast<std::uint32_t>(key),
                         static_cast<std::uint32_t>(key >> 32));
  const double u1 = uniform_open(w.v[0], w.v[1]);
  const double u2 = uniform_open(w.v[2], w.v[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return GaussianPair{r * std::cos(2.0 * M_PI * u2),
                      r * std::sin(2.0 * M_PI * u2)};
}

VelocityNoiseSpec VelocityNoiseSpec::make(const SpectralGrid& g, double sigma0,
                                          double decay_a, int M, int K_active,
                                          bool single_phase) {
  if (K_active < 0 || K_active > g.n_modes())
    throw std::invalid_argument(
        "VelocityNoiseSpec: K_active exceeds available modes");
  if (M < 0 || M > K_active)
    throw std::invalid_argument("VelocityNoiseSpec: requires 0 <= M <= K_active");
  if (sigma0 < 0.0)
    throw std::invalid_argument("VelocityNoiseSpec: sigma0 must be >= 0");
  if (M > 0 && sigma0 == 0.0)
    throw std::invalid_argument(
        "VelocityNoiseSpec: non-degeneracy needs sigma_k > 0 for k <= M");
  if (M > 0 && single_phase)
    throw std::invalid_argument(
        "VelocityNoiseSpec: single_phase is incompatible with M > 0");
  if (decay_a < 1.0)
    throw std::invalid_argument("VelocityNoiseSpec: decay exponent a >= 1");
  VelocityNoiseSpec s;
  s.sigma0 = sigma0;
  s.decay_a = decay_a;
  s.M = M;
  s.K_active = K_active;
  s.single_phase = single_phase;
  s.sigma.resize(K_active);
  for (int r = 0; r < K_active; ++r)
    s.sigma[r] = sigma0 * std::pow(g.mode_lambda(r), -decay_a);
  return s;
}

double VelocityNoiseSpec::L_G1() const {
  double acc = 0.0;
  for (double s : sigma) acc += s * s;
  return (single_phase ? 1.0 : 2.0) * acc;
}

PhaseNoiseSpec PhaseNoiseSpec::make(std::vector<double> gamma_k, int q, int s0,
                                    const PotentialSpec& pot) {
  if (s0 < 2) throw std::invalid_argument("PhaseNoiseSpec: s0 must be >= 2");
  if (q < s0 + 1)
    throw std::invalid_argument(
        "PhaseNoiseSpec: degeneracy exponent q must be >= s0 + 1");
  PhaseNoiseSpec s;
  s.gamma_k = std::move(gamma_k);
  s.q = q;
  s.s0 = s0;

  // L_G2 over a 1e4-point interior grid; each channel contributes
  // |g|_{W^{1,inf}}^2 + |F'' g^2|_inf + |F' g|_inf^2 + |g Psi_{s0+1}|_inf^2.
  const int n = 10000;
  for (int k = 0; k < s.channels(); ++k) {
    double gi = 0, gpi = 0, fgg = 0, fg = 0, gpsi = 0;
    for (int i = 0; i < n; ++i) {
      const double r = -1.0 + 2.0 * (i + 0.5) / n;
      const double gv = s.g(k, r);
      gi = std::max(gi, std::abs(gv));
      gpi = std::max(gpi, std::abs(s.g_prime(k, r)));
      fgg = std::max(fgg, std::abs(F_second(pot, r) * gv * gv));
      fg = std::max(fg, std::abs(F_prime(pot, r) * gv));
      gpsi = std::max(gpsi, std::abs(gv * psi(s.s0 + 1, r)));
    }
    const double w1inf = std::max(gi, gpi);
    s.L_G2 += w1inf * w1inf + fgg + fg * fg + gpsi * gpsi;
  }
  return s;
}

double PhaseNoiseSpec::g(int k, double r) const {
  const double b = std::pow(1.0 - r * r, q);
  return gamma_k.at(k) * chebyshev_T(k, r) * b;
}

double PhaseNoiseSpec::g_prime(int k, double r) const {
  const double om = 1.0 - r * r;
  const double b = std::pow(om, q);
  const double tb = k * chebyshev_U(k - 1, r) * b;
  const double td = chebyshev_T(k, r) * q * std::pow(om, q - 1) * (-2.0 * r);
  return gamma_k.at(k) * (tb + td);
}

NoiseIncrements sample_increments(const NoisePath& path, std::uint64_t step,
                                  double dt, const VelocityNoiseSpec& vspec,
                                  const PhaseNoiseSpec& pspec) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_increments: dt > 0");
  NoiseIncrements inc;
  inc.dt = dt;
  const double sd = std::sqrt(dt);
  inc.dW1.resize(vspec.K_active);
  for (int r = 0; r < vspec.K_active; ++r) {
    const GaussianPair zp =
        gaussian_pair(path, step, static_cast<std::uint32_t>(r),
                      NoiseDomain::velocity);
    inc.dW1[r] = Complex(zp.z0 * sd, vspec.single_phase ? 0.0 : zp.z1 * sd);
  }
  inc.dW2.resize(pspec.channels());
  for (int k = 0; k < pspec.channels(); ++k) {
    const GaussianPair zp = gaussian_pair(
        path, step, static_cast<std::uint32_t>(k), NoiseDomain::phase);
    inc.dW2[k] = zp.z0 * sd;
  }
  return inc;
}

SolenoidalField apply_G1(const SpectralGrid& g, const VelocityNoiseSpec& spec,
                         const Eigen::VectorXcd& dW1,
                         const SolenoidalField* /*u*/) {
  SolenoidalField out = SolenoidalField::zero(g);
  const double c = 1.0 / std::sqrt(2.0 * g.area());
  const int n = std::min<int>(spec.K_active, static_cast<int>(dW1.size()));
  for (int r = 0; r < n; ++r) {
    // cosine channel couples to Re, sine channel to -Im of the amplitude
    const Complex da = spec.sigma[r] * std::conj(dW1[r]) * c;
    if (da != Complex(0.0, 0.0)) add_mode_amplitude(g, out, r, da);
  }
  return out;
}

ScalarField apply_G2(const SpectralGrid& g, const PhaseNoiseSpec& spec,
                     const ScalarField& phi, const Eigen::VectorXd& dW2) {
  require_phase_bound(phi);
  RealGrid out = RealGrid::Zero(g.nx(), g.ny());
  for (int k = 0; k < spec.channels(); ++k) {
    const double w = dW2[k];
    if (w == 0.0) continue;
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j)
        out(i, j) += spec.g(k, phi.v(i, j)) * w;
  }
  return ScalarField(std::move(out));
}

Eigen::VectorXcd g1_inverse(const SpectralGrid& g,
                            const VelocityNoiseSpec& spec,
                            const SolenoidalField& w, int N) {
  if (N > spec.M)
    throw std::invalid_argument("g1_inverse: N exceeds non-degenerate count M");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(std::max(N, 0));
  const double scale = std::sqrt(2.0 * g.area());
  for (int r = 0; r < N; ++r)
    c[r] = scale * std::conj(mode_amplitude(g, w, r)) / spec.sigma[r];
  return c;
}

double g2_hs_norm_sq(const SpectralGrid& g, const PhaseNoiseSpec& spec,
                     const ScalarField& phi) {
  require_phase_bound(phi);
  double acc = 0.0;
  for (int k = 0; k < spec.channels(); ++k) {
    double s = 0.0;
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) {
        const double v = spec.g(k, phi.v(i, j));
        s += v * v;
      }
    acc += g.cell_area() * s;
  }
  return acc;
}

SolenoidalField random_solenoidal(const SpectralGrid& g, const NoisePath& path,
                                  double amplitude, double decay,
                                  int n_modes) {
  SolenoidalField u = SolenoidalField::zero(g);
  const int n = std::min(n_modes, g.n_modes());
  const double c = 1.0 / std::sqrt(2.0 * g.area());
  for (int r = 0; r < n; ++r) {
    const GaussianPair zp = gaussian_pair(
        path, 0, static_cast<std::uint32_t>(r), NoiseDomain::initial);
    const double w = amplitude * std::pow(g.mode_lambda(r), -decay);
    add_mode_amplitude(g, u, r, Complex(zp.z0, zp.z1) * w * c);
  }
  return u;
}

ScalarField random_scalar(const SpectralGrid& g, const NoisePath& path,
                          double amplitude, double decay, int n_modes,
                          double max_abs) {
  ComplexGrid fh = ComplexGrid::Zero(g.nx(), g.ny());
  const int n = std::min(n_modes, g.n_modes());
  for (int r = 0; r < n; ++r) {
    const SolenoidalMode& m = g.modes()[r];
    const GaussianPair zp =
        gaussian_pair(path, 1, static_cast<std::uint32_t>(r),
                      NoiseDomain::initial);
    const Complex a = Complex(zp.z0, zp.z1) * amplitude *
                      std::pow(m.lambda, -decay);
    fh(m.i, m.j) += a;
    fh(m.ci, m.cj) += std::conj(a);
  }
  RealGrid v = inverse(g, fh);
  const double m = v.abs().maxCoeff();
  if (m > 0.0 && max_abs > 0.0 && m > max_abs) v *= max_abs / m;
  return ScalarField(std::move(v));
}

}  // namespace acns
