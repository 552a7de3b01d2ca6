#pragma once

#include "acns/potential.hpp"
#include "acns/spectral.hpp"

#include <cstdint>
#include <vector>

namespace acns {

/// Counter-based Gaussian stream. Identical (seed, stream, step, channel)
/// reproduce identical increments on any worker layout.
struct NoisePath {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct GaussianPair {
  double z0 = 0.0, z1 = 0.0;
};

/// Independent sub-generators; W1 and W2 draw from disjoint domains.
enum class NoiseDomain : std::uint32_t {
  velocity = 1,
  phase = 2,
  initial = 3,
};

/// Philox4x32-10 block keyed by (seed, stream), counter (step, channel,
/// domain), mapped to two standard normals via Box-Muller.
GaussianPair gaussian_pair(const NoisePath& path, std::uint64_t step,
                           std::uint32_t channel, NoiseDomain domain);

/// Diagonal additive velocity noise on canonical Stokes modes:
/// sigma_k = sigma0 * lambda_k^{-a} for the first K_active ranks. Each rank
/// carries two real channels (cosine and sine phases) of amplitude sigma_k.
struct VelocityNoiseSpec {
  std::vector<double> sigma;  // per canonical mode rank
  int M = 0;                  // non-degenerate low-mode count
  int K_active = 0;
  double sigma0 = 0.0;
  double decay_a = 1.0;
  bool single_phase = false;  // linear-test hook: cosine channels only

  static VelocityNoiseSpec make(const SpectralGrid& g, double sigma0,
                                double decay_a, int M, int K_active,
                                bool single_phase = false);

  /// Hilbert-Schmidt constant: sum of sigma^2 over active real channels.
  double L_G1() const;
};

/// Degenerate multiplicative phase noise with channel shapes
/// g_k(r) = gamma_k * T_k(r) * (1 - r^2)^q, T_k Chebyshev.
struct PhaseNoiseSpec {
  std::vector<double> gamma_k;
  int q = 3;
  int s0 = 2;
  double L_G2 = 0.0;  // computed numerically on a 1e4-point grid

  static PhaseNoiseSpec make(std::vector<double> gamma_k, int q, int s0,
                             const PotentialSpec& pot);

  int channels() const { return static_cast<int>(gamma_k.size()); }
  double g(int k, double r) const;
  double g_prime(int k, double r) const;
};

struct NoiseIncrements {
  Eigen::VectorXcd dW1;  // per canonical velocity mode, both phases
  Eigen::VectorXd dW2;   // per phase channel
  double dt = 0.0;
};

/// Draws the step increments: each real component is i.i.d. N(0, dt).
NoiseIncrements sample_increments(const NoisePath& path, std::uint64_t step,
                                  double dt, const VelocityNoiseSpec& vspec,
                                  const PhaseNoiseSpec& pspec);

/// G1 dW1 = sum_k sigma_k e_k dbeta_k as a solenoidal field. The velocity
/// argument is reserved for multiplicative variants and currently unused.
SolenoidalField apply_G1(const SpectralGrid& g, const VelocityNoiseSpec& spec,
                         const Eigen::VectorXcd& dW1,
                         const SolenoidalField* u = nullptr);

/// G2(phi) dW2 = sum_k g_k(phi(.)) dbeta_k, evaluated pointwise.
ScalarField apply_G2(const SpectralGrid& g, const PhaseNoiseSpec& spec,
                     const ScalarField& phi, const Eigen::VectorXd& dW2);

/// Channel weights of the right inverse: entry r is <w, e_r>/sigma_r
/// packed as a complex (cos, sin) pair, zero beyond rank N.
/// apply_G1 of the result reproduces P_N w exactly.
Eigen::VectorXcd g1_inverse(const SpectralGrid& g,
                            const VelocityNoiseSpec& spec,
                            const SolenoidalField& w, int N);

/// Squared Hilbert-Schmidt norm of G2 at phi: sum_k |g_k(phi)|_H^2.
double g2_hs_norm_sq(const SpectralGrid& g, const PhaseNoiseSpec& spec,
                     const ScalarField& phi);

// -- deterministic synthesis of smooth fields (seeded initial data) ----------

SolenoidalField random_solenoidal(const SpectralGrid& g, const NoisePath& path,
                                  double amplitude, double decay,
                                  int n_modes);

/// Smooth random scalar rescaled so that max|phi| <= max_abs < 1.
ScalarField random_scalar(const SpectralGrid& g, const NoisePath& path,
                          double amplitude, double decay, int n_modes,
                          double max_abs);

}  // namespace acns
