#include "acns/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace acns {

namespace {

Eigen::FFT<double>& tl_fft() {
  // One plan cache per thread; transforms share no state across threads.
  static thread_local Eigen::FFT<double> fft;
  return fft;
}

enum class Dir { Fwd, Inv };

Eigen::MatrixXcd fft2(const Eigen::MatrixXcd& in, Dir dir) {
  auto& fft = tl_fft();
  const int nx = static_cast<int>(in.rows());
  const int ny = static_cast<int>(in.cols());
  Eigen::MatrixXcd tmp(nx, ny), out(nx, ny);
  Eigen::VectorXcd cin(nx), cout(nx);
  for (int j = 0; j < ny; ++j) {
    cin = in.col(j);
    if (dir == Dir::Fwd)
      fft.fwd(cout, cin);
    else
      fft.inv(cout, cin);
    tmp.col(j) = cout;
  }
  Eigen::VectorXcd rin(ny), rout(ny);
  for (int i = 0; i < nx; ++i) {
    rin = tmp.row(i).transpose();
    if (dir == Dir::Fwd)
      fft.fwd(rout, rin);
    else
      fft.inv(rout, rin);
    out.row(i) = rout.transpose();
  }
  return out;
}

}  // namespace

SpectralGrid::SpectralGrid(int nx, int ny, double Lx, double Ly)
    : nx_(nx), ny_(ny), Lx_(Lx), Ly_(Ly) {
  if (nx < 8 || ny < 8)
    throw std::invalid_argument("SpectralGrid: mode counts must be >= 8");
  if (nx % 2 != 0 || ny % 2 != 0)
    throw std::invalid_argument("SpectralGrid: mode counts must be even");
  if (!(Lx > 0.0) || !(Ly > 0.0))
    throw std::invalid_argument("SpectralGrid: box sides must be positive");

  kx_.resize(nx);
  ky_.resize(ny);
  for (int i = 0; i < nx; ++i) kx_[i] = 2.0 * M_PI * freq(i, nx) / Lx;
  for (int j = 0; j < ny; ++j) ky_[j] = 2.0 * M_PI * freq(j, ny) / Ly;

  // 2/3 rule: quadratic products of retained modes are alias-free.
  mask_ = Eigen::ArrayXXi::Zero(nx, ny);
  const int cx = nx / 3, cy = ny / 3;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      mask_(i, j) =
          (std::abs(freq(i, nx)) <= cx && std::abs(freq(j, ny)) <= cy) ? 1 : 0;

  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int k1 = freq(i, nx), k2 = freq(j, ny);
      if (k1 == 0 && k2 == 0) continue;
      if (!mask_(i, j)) continue;
      const bool canonical = k1 > 0 || (k1 == 0 && k2 > 0);
      if (!canonical) continue;
      SolenoidalMode m;
      m.k1 = k1;
      m.k2 = k2;
      m.i = i;
      m.j = j;
      m.ci = (nx - i) % nx;
      m.cj = (ny - j) % ny;
      const double kxv = kx_[i], kyv = ky_[j];
      m.lambda = kxv * kxv + kyv * kyv;
      const double kn = std::sqrt(m.lambda);
      m.dx = -kyv / kn;
      m.dy = kxv / kn;
      modes_.push_back(m);
    }
  }
  std::sort(modes_.begin(), modes_.end(),
            [](const SolenoidalMode& a, const SolenoidalMode& b) {
              if (a.lambda != b.lambda) return a.lambda < b.lambda;
              if (a.k1 != b.k1) return a.k1 < b.k1;
              return a.k2 < b.k2;
            });
}

ScalarField ScalarField::zero(const SpectralGrid& g) {
  return ScalarField(RealGrid::Zero(g.nx(), g.ny()));
}

SolenoidalField SolenoidalField::zero(const SpectralGrid& g) {
  return SolenoidalField(ComplexGrid::Zero(g.nx(), g.ny()),
                         ComplexGrid::Zero(g.nx(), g.ny()));
}

ComplexGrid forward(const SpectralGrid& g, const RealGrid& f) {
  Eigen::MatrixXcd in = f.matrix().cast<Complex>();
  Eigen::MatrixXcd raw = fft2(in, Dir::Fwd);
  return raw.array() / static_cast<double>(g.nx() * g.ny());
}

RealGrid inverse(const SpectralGrid& g, const ComplexGrid& fhat) {
  Eigen::MatrixXcd scaled =
      (fhat * static_cast<double>(g.nx() * g.ny())).matrix();
  Eigen::MatrixXcd raw = fft2(scaled, Dir::Inv);
  return raw.real().array();
}

VectorField to_physical(const SpectralGrid& g, const SolenoidalField& u) {
  return VectorField{inverse(g, u.ux), inverse(g, u.uy)};
}

ComplexGrid laplacian(const SpectralGrid& g, const ComplexGrid& fhat) {
  ComplexGrid out(g.nx(), g.ny());
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) out(i, j) = -g.lambda(i, j) * fhat(i, j);
  return out;
}

ComplexGrid divergence(const SpectralGrid& g, const ComplexGrid& vx,
                       const ComplexGrid& vy) {
  const Complex I(0.0, 1.0);
  ComplexGrid out(g.nx(), g.ny());
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j)
      out(i, j) = I * (g.kappa_x(i) * vx(i, j) + g.kappa_y(j) * vy(i, j));
  return out;
}

VectorField gradient(const SpectralGrid& g, const ComplexGrid& fhat) {
  const Complex I(0.0, 1.0);
  ComplexGrid gx(g.nx(), g.ny()), gy(g.nx(), g.ny());
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      gx(i, j) = I * g.kappa_x(i) * fhat(i, j);
      gy(i, j) = I * g.kappa_y(j) * fhat(i, j);
    }
  return VectorField{inverse(g, gx), inverse(g, gy)};
}

void dealias_inplace(const SpectralGrid& g, ComplexGrid& fhat) {
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j)
      if (!g.dealias_keep(i, j)) fhat(i, j) = Complex(0.0, 0.0);
}

ComplexGrid dealias(const SpectralGrid& g, ComplexGrid fhat) {
  dealias_inplace(g, fhat);
  return fhat;
}

SolenoidalField leray_project(const SpectralGrid& g, const ComplexGrid& vx,
                              const ComplexGrid& vy) {
  SolenoidalField out(vx, vy);
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) {
      const double kxv = g.kappa_x(i), kyv = g.kappa_y(j);
      const double k2 = kxv * kxv + kyv * kyv;
      if (k2 == 0.0) {
        out.ux(i, j) = Complex(0.0, 0.0);
        out.uy(i, j) = Complex(0.0, 0.0);
        continue;
      }
      const Complex s = (kxv * vx(i, j) + kyv * vy(i, j)) / k2;
      out.ux(i, j) = vx(i, j) - kxv * s;
      out.uy(i, j) = vy(i, j) - kyv * s;
    }
  }
  return out;
}

SolenoidalField leray_project(const SpectralGrid& g, const VectorField& v) {
  return leray_project(g, forward(g, v.x), forward(g, v.y));
}

std::pair<SolenoidalField, SolenoidalField> project_low_modes(
    const SpectralGrid& g, const SolenoidalField& u, int N) {
  if (N < 0 || N > g.n_modes())
    throw std::invalid_argument(
        "project_low_modes: N exceeds available solenoidal modes");
  SolenoidalField low = SolenoidalField::zero(g);
  for (int r = 0; r < N; ++r) {
    const SolenoidalMode& m = g.modes()[r];
    low.ux(m.i, m.j) = u.ux(m.i, m.j);
    low.uy(m.i, m.j) = u.uy(m.i, m.j);
    low.ux(m.ci, m.cj) = u.ux(m.ci, m.cj);
    low.uy(m.ci, m.cj) = u.uy(m.ci, m.cj);
  }
  SolenoidalField high(u.ux - low.ux, u.uy - low.uy);
  return {std::move(low), std::move(high)};
}

Complex mode_amplitude(const SpectralGrid& g, const SolenoidalField& u,
                       int rank) {
  const SolenoidalMode& m = g.modes().at(rank);
  return m.dx * u.ux(m.i, m.j) + m.dy * u.uy(m.i, m.j);
}

void add_mode_amplitude(const SpectralGrid& g, SolenoidalField& u, int rank,
                        Complex da) {
  const SolenoidalMode& m = g.modes().at(rank);
  u.ux(m.i, m.j) += da * m.dx;
  u.uy(m.i, m.j) += da * m.dy;
  u.ux(m.ci, m.cj) += std::conj(da) * m.dx;
  u.uy(m.ci, m.cj) += std::conj(da) * m.dy;
}

double coef_cos(const SpectralGrid& g, const SolenoidalField& u, int rank) {
  return std::sqrt(2.0 * g.area()) * mode_amplitude(g, u, rank).real();
}

double coef_sin(const SpectralGrid& g, const SolenoidalField& u, int rank) {
  return -std::sqrt(2.0 * g.area()) * mode_amplitude(g, u, rank).imag();
}

ScalarField advect_scalar(const SpectralGrid& g, const SolenoidalField& u,
                          const ScalarField& phi) {
  if (phi.v.rows() != g.nx() || phi.v.cols() != g.ny() ||
      u.ux.rows() != g.nx() || u.ux.cols() != g.ny())
    throw std::invalid_argument("advect_scalar: grid mismatch");
  ComplexGrid phih = dealias(g, forward(g, phi.v));
  VectorField gp = gradient(g, phih);
  SolenoidalField um(dealias(g, u.ux), dealias(g, u.uy));
  VectorField up = to_physical(g, um);
  RealGrid prod = up.x * gp.x + up.y * gp.y;
  ComplexGrid ph = dealias(g, forward(g, prod));
  return ScalarField(inverse(g, ph));
}

SolenoidalField ns_nonlinearity(const SpectralGrid& g,
                                const SolenoidalField& u) {
  const Complex I(0.0, 1.0);
  ComplexGrid uxh = dealias(g, u.ux), uyh = dealias(g, u.uy);
  VectorField up = to_physical(g, SolenoidalField(uxh, uyh));

  ComplexGrid dxux(g.nx(), g.ny()), dyux(g.nx(), g.ny());
  ComplexGrid dxuy(g.nx(), g.ny()), dyuy(g.nx(), g.ny());
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      dxux(i, j) = I * g.kappa_x(i) * uxh(i, j);
      dyux(i, j) = I * g.kappa_y(j) * uxh(i, j);
      dxuy(i, j) = I * g.kappa_x(i) * uyh(i, j);
      dyuy(i, j) = I * g.kappa_y(j) * uyh(i, j);
    }
  RealGrid ux_x = inverse(g, dxux), ux_y = inverse(g, dyux);
  RealGrid uy_x = inverse(g, dxuy), uy_y = inverse(g, dyuy);

  // advective form
  RealGrid ax = up.x * ux_x + up.y * ux_y;
  RealGrid ay = up.x * uy_x + up.y * uy_y;
  // divergence form, assembled spectrally from the quadratic products
  ComplexGrid pxx = forward(g, RealGrid(up.x * up.x));
  ComplexGrid pxy = forward(g, RealGrid(up.x * up.y));
  ComplexGrid pyy = forward(g, RealGrid(up.y * up.y));
  ComplexGrid axh = forward(g, ax), ayh = forward(g, ay);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      const Complex dx = I * g.kappa_x(i), dy = I * g.kappa_y(j);
      axh(i, j) = 0.5 * (axh(i, j) + dx * pxx(i, j) + dy * pxy(i, j));
      ayh(i, j) = 0.5 * (ayh(i, j) + dx * pxy(i, j) + dy * pyy(i, j));
    }
  dealias_inplace(g, axh);
  dealias_inplace(g, ayh);
  return leray_project(g, axh, ayh);
}

double integrate(const SpectralGrid& g, const RealGrid& f) {
  return g.cell_area() * f.sum();
}

double norm_H(const SpectralGrid& g, const ScalarField& f) {
  return std::sqrt(g.cell_area() * f.v.square().sum());
}

double norm_V1(const SpectralGrid& g, const ScalarField& f) {
  ComplexGrid fh = forward(g, f.v);
  double s = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) s += g.lambda(i, j) * std::norm(fh(i, j));
  return std::sqrt(g.area() * s);
}

double norm_V2(const SpectralGrid& g, const ScalarField& f) {
  ComplexGrid fh = forward(g, f.v);
  double s = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      const double l = g.lambda(i, j);
      s += l * l * std::norm(fh(i, j));
    }
  return std::sqrt(g.area() * s);
}

double norm_Lq(const SpectralGrid& g, const ScalarField& f, double q) {
  if (!(q >= 1.0) || !std::isfinite(q))
    throw std::invalid_argument("norm_Lq: unsupported exponent q");
  return std::pow(g.cell_area() * f.v.abs().pow(q).sum(), 1.0 / q);
}

double norm_Hsigma(const SpectralGrid& g, const SolenoidalField& u) {
  return std::sqrt(g.area() *
                   (u.ux.abs2().sum() + u.uy.abs2().sum()));
}

double norm_Vsigma(const SpectralGrid& g, const SolenoidalField& u) {
  double s = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j)
      s += g.lambda(i, j) * (std::norm(u.ux(i, j)) + std::norm(u.uy(i, j)));
  return std::sqrt(g.area() * s);
}

double inner_H(const SpectralGrid& g, const ScalarField& a,
               const ScalarField& b) {
  return g.cell_area() * (a.v * b.v).sum();
}

double inner_Hsigma(const SpectralGrid& g, const SolenoidalField& a,
                    const SolenoidalField& b) {
  double s = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j)
      s += (a.ux(i, j) * std::conj(b.ux(i, j)) +
            a.uy(i, j) * std::conj(b.uy(i, j)))
               .real();
  return g.area() * s;
}

FieldNorms norms(const SpectralGrid& g, const ScalarField& f, double q) {
  return FieldNorms{norm_H(g, f), norm_V1(g, f), norm_V2(g, f),
                    norm_Lq(g, f, q)};
}

SolenoidalField operator+(const SolenoidalField& a, const SolenoidalField& b) {
  return SolenoidalField(a.ux + b.ux, a.uy + b.uy);
}

SolenoidalField operator-(const SolenoidalField& a, const SolenoidalField& b) {
  return SolenoidalField(a.ux - b.ux, a.uy - b.uy);
}

SolenoidalField operator*(double s, const SolenoidalField& a) {
  return SolenoidalField(s * a.ux, s * a.uy);
}

}  // namespace acns
