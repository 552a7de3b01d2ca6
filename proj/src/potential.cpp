#include "acns/potential.hpp"

#include <cmath>

namespace acns {

namespace {

double clamp_interior(double r) {
  if (!(std::abs(r) < 1.0))
    throw SingularityError("potential evaluated at |r| >= 1");
  const double lim = 1.0 - PotentialSpec::delta_eval;
  return std::clamp(r, -lim, lim);
}

double F_raw(double theta, double theta0, double r) {
  const double mix =
      (1.0 + r) * std::log1p(r) + (1.0 - r) * std::log1p(-r);
  return 0.5 * theta * mix - 0.5 * theta0 * r * r;
}

// golden-section minimum of F on [-1,1]; F extends continuously to +-1
double minimize_F(double theta, double theta0) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -1.0, b = 1.0;
  auto eval = [&](double r) {
    const double lim = 1.0 - PotentialSpec::delta_eval;
    return F_raw(theta, theta0, std::clamp(r, -lim, lim));
  };
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = eval(c), fd = eval(d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = eval(d);
    }
  }
  return eval(0.5 * (a + b));
}

}  // namespace

PotentialSpec PotentialSpec::make(double theta, double theta0) {
  if (!(theta > 0.0) || !(theta0 > theta))
    throw std::invalid_argument(
        "PotentialSpec: requires 0 < theta < theta0");
  PotentialSpec p;
  p.theta = theta;
  p.theta0 = theta0;
  p.c0 = -minimize_F(theta, theta0);
  p.L_F_ = theta0 - theta;
  for (int i = 0; i < 10000; ++i) {
    const double r = -1.0 + 2.0 * (i + 0.5) / 10000;
    const double ratio = (theta / (1.0 - r * r) - theta0) /
                         (1.0 + std::pow(1.0 - r * r, -1.0));
    p.L_F_ = std::max(p.L_F_, ratio);
  }
  return p;
}

PotentialSpec PotentialSpec::disabled() {
  PotentialSpec p;
  p.off = true;
  p.c0 = 0.0;
  return p;
}

BarrierFamily BarrierFamily::make(int s0) {
  if (s0 < 2)
    throw std::invalid_argument(
        "BarrierFamily: s0 must be an integer >= 2 (s0 > 2*s_F - 1)");
  return BarrierFamily{s0};
}

double F(const PotentialSpec& p, double r) {
  if (p.off) return 0.0;
  return F_raw(p.theta, p.theta0, clamp_interior(r));
}

double F_prime(const PotentialSpec& p, double r) {
  if (p.off) return 0.0;
  const double rc = clamp_interior(r);
  return p.theta * std::atanh(rc) - p.theta0 * rc;
}

double F_second(const PotentialSpec& p, double r) {
  if (p.off) return 0.0;
  const double rc = clamp_interior(r);
  return p.theta / (1.0 - rc * rc) - p.theta0;
}

std::pair<double, double> convex_split(const PotentialSpec& p, double r) {
  if (p.off) return {0.0, 0.0};
  const double rc = clamp_interior(r);
  return {p.theta * std::atanh(rc), -p.theta0 * rc};
}

double psi(double s, double r) {
  if (!(s >= 1.0)) throw std::invalid_argument("psi: requires s >= 1");
  if (!(std::abs(r) < 1.0))
    throw SingularityError("psi evaluated at |r| >= 1");
  return std::pow(1.0 - r * r, -s);
}

double psi_prime(double s, double r) {
  if (!(s >= 1.0)) throw std::invalid_argument("psi_prime: requires s >= 1");
  if (!(std::abs(r) < 1.0))
    throw SingularityError("psi_prime evaluated at |r| >= 1");
  return 2.0 * s * r * std::pow(1.0 - r * r, -(s + 1.0));
}

void require_phase_bound(const ScalarField& phi) {
  const double m = phi.v.abs().maxCoeff();
  if (!(m <= 1.0 - PotentialSpec::delta_eval) || !phi.v.isFinite().all())
    throw SingularityError("phase bound violated: max|phi| = " +
                           std::to_string(m));
}

double f_second_Lgamma_norm(const SpectralGrid& g, const PotentialSpec& p,
                            const ScalarField& phi, double gamma) {
  require_phase_bound(phi);
  double s = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j)
      s += std::pow(std::abs(F_second(p, phi.v(i, j))), gamma);
  return std::pow(g.cell_area() * s, 1.0 / gamma);
}

double potential_energy(const SpectralGrid& g, const PotentialSpec& p,
                        const ScalarField& phi) {
  double s = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) s += F(p, phi.v(i, j)) + p.c0;
  return g.cell_area() * s;
}

double psi_integral(const SpectralGrid& g, const ScalarField& phi, double s) {
  double acc = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) acc += psi(s, phi.v(i, j));
  return g.cell_area() * acc;
}

double f_prime_H_norm(const SpectralGrid& g, const PotentialSpec& p,
                      const ScalarField& phi) {
  double s = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      const double v = F_prime(p, phi.v(i, j));
      s += v * v;
    }
  return std::sqrt(g.cell_area() * s);
}

}  // namespace acns
