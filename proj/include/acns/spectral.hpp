#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace acns {

using Real = double;
using Complex = std::complex<double>;

/// Physical nodal values, nx-by-ny (x index first).
using RealGrid = Eigen::ArrayXXd;
/// Fourier coefficients in FFT layout, normalized so that
/// f(x) = sum_k fhat(k) exp(i kappa.x) with kappa = 2*pi*k/L.
using ComplexGrid = Eigen::ArrayXXcd;

/// One conjugate pair of solenoidal Fourier modes (Stokes eigenmodes on
/// the periodic box). The canonical representative k of {k,-k} satisfies
/// k1 > 0 or (k1 == 0 and k2 > 0). Each entry spans a two-dimensional
/// real eigenspace (cosine and sine phases) with eigenvalue lambda.
struct SolenoidalMode {
  int k1 = 0, k2 = 0;       // integer frequencies
  int i = 0, j = 0;         // storage indices of +k in the FFT grid
  int ci = 0, cj = 0;       // storage indices of -k
  double lambda = 0.0;      // |2 pi k / L|^2
  double dx = 0.0, dy = 0.0;  // unit solenoidal direction k_perp/|k|
};

class SpectralGrid {
 public:
  SpectralGrid(int nx, int ny, double Lx, double Ly);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double Lx() const { return Lx_; }
  double Ly() const { return Ly_; }
  double area() const { return Lx_ * Ly_; }
  double cell_area() const { return area() / (nx_ * ny_); }

  /// Signed integer frequency stored at index i of an n-point axis.
  static int freq(int i, int n) { return i <= n / 2 ? i : i - n; }

  double kappa_x(int i) const { return kx_[i]; }
  double kappa_y(int j) const { return ky_[j]; }
  /// Stokes eigenvalue at storage index (i,j).
  double lambda(int i, int j) const {
    return kx_[i] * kx_[i] + ky_[j] * ky_[j];
  }
  bool dealias_keep(int i, int j) const { return mask_(i, j) != 0; }
  const Eigen::ArrayXXi& dealias_mask() const { return mask_; }

  /// Canonical solenoidal modes inside the dealias mask, ranked by
  /// nondecreasing lambda with lexicographic (k1,k2) tie-break.
  const std::vector<SolenoidalMode>& modes() const { return modes_; }
  int n_modes() const { return static_cast<int>(modes_.size()); }
  /// Eigenvalue of the rank-th canonical mode (rank is 0-based).
  double mode_lambda(int rank) const { return modes_.at(rank).lambda; }

  double x(int i) const { return Lx_ * i / nx_; }
  double y(int j) const { return Ly_ * j / ny_; }

 private:
  int nx_, ny_;
  double Lx_, Ly_;
  std::vector<double> kx_, ky_;
  Eigen::ArrayXXi mask_;
  std::vector<SolenoidalMode> modes_;
};

inline SpectralGrid build_grid(int nx, int ny, double Lx = 2.0 * M_PI,
                               double Ly = 2.0 * M_PI) {
  return SpectralGrid(nx, ny, Lx, Ly);
}

/// Scalar field as physical nodal values.
struct ScalarField {
  RealGrid v;
  ScalarField() = default;
  explicit ScalarField(RealGrid values) : v(std::move(values)) {}
  static ScalarField zero(const SpectralGrid& g);
};

/// Divergence-free velocity field stored spectrally, one coefficient grid
/// per component. Mean mode is zero and k.uhat(k) = 0 on every mode.
struct SolenoidalField {
  ComplexGrid ux, uy;
  SolenoidalField() = default;
  SolenoidalField(ComplexGrid x, ComplexGrid y)
      : ux(std::move(x)), uy(std::move(y)) {}
  static SolenoidalField zero(const SpectralGrid& g);
};

/// Physical-space vector field (pre-projection inputs, transforms).
struct VectorField {
  RealGrid x, y;
};

// -- transforms ------------------------------------------------------------

ComplexGrid forward(const SpectralGrid& g, const RealGrid& f);
RealGrid inverse(const SpectralGrid& g, const ComplexGrid& fhat);

VectorField to_physical(const SpectralGrid& g, const SolenoidalField& u);

// -- differential operators (spectral multipliers) --------------------------

ComplexGrid laplacian(const SpectralGrid& g, const ComplexGrid& fhat);
ComplexGrid divergence(const SpectralGrid& g, const ComplexGrid& vx,
                       const ComplexGrid& vy);
/// Physical-space gradient of a spectral scalar.
VectorField gradient(const SpectralGrid& g, const ComplexGrid& fhat);

void dealias_inplace(const SpectralGrid& g, ComplexGrid& fhat);
ComplexGrid dealias(const SpectralGrid& g, ComplexGrid fhat);

// -- projections -------------------------------------------------------------

/// Leray projection of a spectral vector field: removes the potential part
/// and the mean mode. Idempotent and self-adjoint in the discrete H pairing.
SolenoidalField leray_project(const SpectralGrid& g, const ComplexGrid& vx,
                              const ComplexGrid& vy);
SolenoidalField leray_project(const SpectralGrid& g, const VectorField& v);

/// Splits u into (P_N u, Q_N u): the span of the N lowest canonical modes
/// and its orthogonal complement. N counts conjugate pairs.
std::pair<SolenoidalField, SolenoidalField> project_low_modes(
    const SpectralGrid& g, const SolenoidalField& u, int N);

// -- solenoidal mode amplitudes ---------------------------------------------

/// Complex amplitude a_r = d_k . uhat(k) of canonical mode rank r.
/// The real eigenfunction coefficients are
///   <u, e_cos> = sqrt(2|O|) Re a_r,   <u, e_sin> = -sqrt(2|O|) Im a_r.
Complex mode_amplitude(const SpectralGrid& g, const SolenoidalField& u,
                       int rank);
/// Adds da * d_k to uhat at mode rank (and the conjugate at -k).
void add_mode_amplitude(const SpectralGrid& g, SolenoidalField& u, int rank,
                        Complex da);
double coef_cos(const SpectralGrid& g, const SolenoidalField& u, int rank);
double coef_sin(const SpectralGrid& g, const SolenoidalField& u, int rank);

// -- nonlinear terms ---------------------------------------------------------

/// Dealiased advection u . grad(phi), returned in physical space.
ScalarField advect_scalar(const SpectralGrid& g, const SolenoidalField& u,
                          const ScalarField& phi);

/// Leray-projected, dealiased (u . grad) u in skew-symmetric form, so the
/// discrete pairing <B(u,u),u> vanishes for dealiased u.
SolenoidalField ns_nonlinearity(const SpectralGrid& g,
                                const SolenoidalField& u);

// -- norms and pairings -------------------------------------------------------

double norm_H(const SpectralGrid& g, const ScalarField& f);
double norm_V1(const SpectralGrid& g, const ScalarField& f);  // |grad f|_H
double norm_V2(const SpectralGrid& g, const ScalarField& f);  // |lap f|_H
double norm_Lq(const SpectralGrid& g, const ScalarField& f, double q);
double norm_Hsigma(const SpectralGrid& g, const SolenoidalField& u);
double norm_Vsigma(const SpectralGrid& g, const SolenoidalField& u);

double inner_H(const SpectralGrid& g, const ScalarField& a,
               const ScalarField& b);
double inner_Hsigma(const SpectralGrid& g, const SolenoidalField& a,
                    const SolenoidalField& b);

/// Grid quadrature of a physical scalar.
double integrate(const SpectralGrid& g, const RealGrid& f);

/// Aggregate of the semantic norms used in the estimates.
struct FieldNorms {
  double H = 0, V1 = 0, V2 = 0, Lq = 0;
};
FieldNorms norms(const SpectralGrid& g, const ScalarField& f, double q);

// -- algebra on fields ---------------------------------------------------------

SolenoidalField operator+(const SolenoidalField& a, const SolenoidalField& b);
SolenoidalField operator-(const SolenoidalField& a, const SolenoidalField& b);
SolenoidalField operator*(double s, const SolenoidalField& a);

}  // namespace acns
