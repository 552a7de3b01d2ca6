#pragma once

#include "acns/spectral.hpp"

#include <stdexcept>

namespace acns {

/// Thrown when an evaluation reaches the +-1 singularity of the potential
/// or a field violates the strict phase bound |phi| < 1.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Logarithmic double-well density
///   F(r) = (theta/2)[(1+r)ln(1+r) + (1-r)ln(1-r)] - (theta0/2) r^2
/// with 0 < theta < theta0, normalized by c0 so F + c0 >= 0 on [-1,1].
struct PotentialSpec {
  double theta = 1.0;
  double theta0 = 2.0;
  double c0 = 0.0;       // additive normalization, -min F
  double L_F_ = 1.0;     // semiconvexity and growth constant
  bool off = false;      // test hook: all evaluations return 0

  /// max(theta0 - theta, sup F''/(1 + Psi_1)): the nominal difference
  /// bounds F'' from below, but covers the growth of F'' against the
  /// barrier only when theta0 >= 2 theta; otherwise the measured supremum
  /// ratio takes over.
  double L_F() const { return L_F_; }
  static constexpr double s_F = 1.0;

  /// Pointwise evaluations clamp |r| to 1 - delta_eval before log/atanh.
  static constexpr double delta_eval = 1e-12;

  static PotentialSpec make(double theta, double theta0);
  static PotentialSpec disabled();
};

/// Barrier index family Psi_s(r) = (1 - r^2)^{-s}.
struct BarrierFamily {
  int s0 = 2;
  double gamma() const { return (s0 + 1) / PotentialSpec::s_F; }

  static BarrierFamily make(int s0);
};

double F(const PotentialSpec& p, double r);
double F_prime(const PotentialSpec& p, double r);
double F_second(const PotentialSpec& p, double r);

/// Derivatives of the convex/concave split: F1' = theta*atanh(r) (convex),
/// F2' = -theta0*r (smooth concave part).
std::pair<double, double> convex_split(const PotentialSpec& p, double r);

double psi(double s, double r);
double psi_prime(double s, double r);

/// Throws SingularityError unless max|phi| <= 1 - delta_eval.
void require_phase_bound(const ScalarField& phi);

/// Grid-quadrature L^gamma norm of F''(phi(.)).
double f_second_Lgamma_norm(const SpectralGrid& g, const PotentialSpec& p,
                            const ScalarField& phi, double gamma);

/// Grid quadrature of F(phi) + c0 (nonnegative by normalization).
double potential_energy(const SpectralGrid& g, const PotentialSpec& p,
                        const ScalarField& phi);

/// Grid quadrature of Psi_s(phi).
double psi_integral(const SpectralGrid& g, const ScalarField& phi, double s);

/// Grid quadrature L2 norm of F'(phi).
double f_prime_H_norm(const SpectralGrid& g, const PotentialSpec& p,
                      const ScalarField& phi);

}  // namespace acns
