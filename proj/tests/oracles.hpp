#pragma once

// Test-only oracles, independent of the library's transform path: fields
// are evaluated analytically mode by mode with std::cos/std::sin, and
// integrals use plain grid sums over those analytic values.

#include "acns/spectral.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using acns::Complex;
using acns::RealGrid;
using acns::SolenoidalMode;
using acns::SpectralGrid;

/// One canonical solenoidal mode with complex amplitude a contributes
/// u(x) = 2[Re(a) cos(k.x) - Im(a) sin(k.x)] * d.
struct ModeAmp {
  int rank;
  Complex a;
};

inline double phase(const SpectralGrid& g, const SolenoidalMode& m, double x,
                    double y) {
  return g.kappa_x(m.i) * x + g.kappa_y(m.j) * y;
}

inline RealGrid eval_velocity_x(const SpectralGrid& g,
                                const std::vector<ModeAmp>& amps) {
  RealGrid out = RealGrid::Zero(g.nx(), g.ny());
  for (const auto& ma : amps) {
    const SolenoidalMode& m = g.modes()[ma.rank];
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) {
        const double th = phase(g, m, g.x(i), g.y(j));
        out(i, j) += 2.0 *
                     (ma.a.real() * std::cos(th) - ma.a.imag() * std::sin(th)) *
                     m.dx;
      }
  }
  return out;
}

inline RealGrid eval_velocity_y(const SpectralGrid& g,
                                const std::vector<ModeAmp>& amps) {
  RealGrid out = RealGrid::Zero(g.nx(), g.ny());
  for (const auto& ma : amps) {
    const SolenoidalMode& m = g.modes()[ma.rank];
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) {
        const double th = phase(g, m, g.x(i), g.y(j));
        out(i, j) += 2.0 *
                     (ma.a.real() * std::cos(th) - ma.a.imag() * std::sin(th)) *
                     m.dy;
      }
  }
  return out;
}

/// Scalar built from canonical modes: sum of 2[Re(a) cos - Im(a) sin].
inline RealGrid eval_scalar(const SpectralGrid& g,
                            const std::vector<ModeAmp>& amps) {
  RealGrid out = RealGrid::Zero(g.nx(), g.ny());
  for (const auto& ma : amps) {
    const SolenoidalMode& m = g.modes()[ma.rank];
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) {
        const double th = phase(g, m, g.x(i), g.y(j));
        out(i, j) +=
            2.0 * (ma.a.real() * std::cos(th) - ma.a.imag() * std::sin(th));
      }
  }
  return out;
}

/// Analytic gradient of the same scalar.
inline void eval_scalar_gradient(const SpectralGrid& g,
                                 const std::vector<ModeAmp>& amps,
                                 RealGrid& gx, RealGrid& gy) {
  gx = RealGrid::Zero(g.nx(), g.ny());
  gy = RealGrid::Zero(g.nx(), g.ny());
  for (const auto& ma : amps) {
    const SolenoidalMode& m = g.modes()[ma.rank];
    const double kx = g.kappa_x(m.i), ky = g.kappa_y(m.j);
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) {
        const double th = phase(g, m, g.x(i), g.y(j));
        const double d =
            2.0 * (-ma.a.real() * std::sin(th) - ma.a.imag() * std::cos(th));
        gx(i, j) += kx * d;
        gy(i, j) += ky * d;
      }
  }
}

/// Plain grid-sum quadrature.
inline double quad(const SpectralGrid& g, const RealGrid& f) {
  return g.cell_area() * f.sum();
}

/// Centered finite difference.
inline double fdiff(const std::function<double(double)>& f, double x,
                    double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Random dealiased solenoidal field built directly over canonical modes.
inline acns::SolenoidalField random_field(const SpectralGrid& g,
                                          std::mt19937& rng, int max_modes,
                                          double amp = 1.0) {
  std::normal_distribution<double> N01;
  acns::SolenoidalField u = acns::SolenoidalField::zero(g);
  const int n = std::min(max_modes, g.n_modes());
  for (int r = 0; r < n; ++r)
    acns::add_mode_amplitude(
        g, u, r, amp * Complex(N01(rng), N01(rng)) / (1.0 + g.mode_lambda(r)));
  return u;
}

inline acns::ScalarField random_scalar_field(const SpectralGrid& g,
                                             std::mt19937& rng, int max_modes,
                                             double amp = 1.0) {
  std::normal_distribution<double> N01;
  std::vector<ModeAmp> amps;
  const int n = std::min(max_modes, g.n_modes());
  for (int r = 0; r < n; ++r)
    amps.push_back(
        {r, amp * Complex(N01(rng), N01(rng)) / (1.0 + g.mode_lambda(r))});
  return acns::ScalarField(eval_scalar(g, amps));
}

}  // namespace oracle
