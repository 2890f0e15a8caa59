#include "ncgw/gausssol.hpp"

#include <cmath>

namespace ncgw {

GaussianEvol gaussian_from_eigenstate(double lambda, const CoeffSet& cs,
                                      double t0) {
  const GaussianExponent e = eigenstate_exponent(lambda, cs, t0);
  const double A1 = cs.params.eta / (4.0 * cs.params.hbar * cs.params.hbar);
  if (std::abs(e.cxx + A1) > 1e-12 * A1 || std::abs(e.cyy + A1) > 1e-12 * A1)
    throw OracleError("gaussian_from_eigenstate: eigenstate width is not at "
                      "the fixed point of the width flow");
  GaussianEvol s;
  s.A1 = A1;
  s.bx = e.bx;
  s.by = e.by;
  const double r2 = e.bx.real() * e.bx.real() + e.by.real() * e.by.real();
  s.c = -0.5 * (std::log(M_PI / (2.0 * A1)) + r2 / (2.0 * A1));
  s.time = t0;
  return s;
}

void gaussian_rhs(const GaussianEvol& s, const PhysicalParams& p, cplx& dbx,
                  cplx& dby, cplx& dc) {
  const double hb = p.hbar;
  const double e2 = p.eta / (2.0 * p.m);
  const double A1 = p.eta / (4.0 * hb * hb);
  const cplx ih = I * hb;
  dbx = (e2 * s.bx + I * e2 * s.by + p.m * p.g) / ih;
  dby = (e2 * s.by - I * e2 * s.bx - I * p.m * p.g * p.theta * A1) / ih;
  dc = (e2 - hb * hb / (2.0 * p.m) * (s.bx * s.bx + s.by * s.by)
        + I * p.m * p.g * p.theta / 2.0 * s.by) / ih;
}

GaussianEvol evolve_gaussian(const GaussianEvol& s0, double t1, int steps,
                             const PhysicalParams& p) {
  if (steps < 1) throw ConfigError("evolve_gaussian: steps must be positive");
  GaussianEvol s = s0;
  const double h = (t1 - s0.time) / steps;
  for (int k = 0; k < steps; ++k) {
    auto f = [&p](const GaussianEvol& st, cplx& a, cplx& b, cplx& c) {
      gaussian_rhs(st, p, a, b, c);
    };
    cplx k1x, k1y, k1c, k2x, k2y, k2c, k3x, k3y, k3c, k4x, k4y, k4c;
    f(s, k1x, k1y, k1c);
    GaussianEvol s2 = s;
    s2.bx = s.bx + 0.5 * h * k1x;
    s2.by = s.by + 0.5 * h * k1y;
    s2.c = s.c + 0.5 * h * k1c;
    f(s2, k2x, k2y, k2c);
    s2.bx = s.bx + 0.5 * h * k2x;
    s2.by = s.by + 0.5 * h * k2y;
    s2.c = s.c + 0.5 * h * k2c;
    f(s2, k3x, k3y, k3c);
    s2.bx = s.bx + h * k3x;
    s2.by = s.by + h * k3y;
    s2.c = s.c + h * k3c;
    f(s2, k4x, k4y, k4c);
    s.bx += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    s.by += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    s.c += h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
    s.time += h;
  }
  s.time = t1;
  return s;
}

WaveFunction2D gaussian_wavefunction(const GridSpec& g,
                                     const GaussianEvol& s) {
  WaveFunction2D w = make_wavefunction(g, s.time);
  GaussianExponent e;
  e.cxx = -s.A1;
  e.cyy = -s.A1;
  e.bx = s.bx;
  e.by = s.by;
  e.c0 = s.c;
  fill_gaussian(w, e);
  return w;
}

DriftLaw drift_law(double lambda, const CoeffSet& cs) {
  const GaussianEvol s = gaussian_from_eigenstate(lambda, cs, 0.0);
  DriftLaw d;
  d.x0 = s.bx.real() / (2.0 * s.A1);
  d.y0 = s.by.real() / (2.0 * s.A1);
  d.vy = cs.params.m * cs.params.g * (1.0 - cs.derived.zeta) * cs.params.hbar
         / cs.params.eta;
  return d;
}

WaveFunction2D apply_hamiltonian(const WaveFunction2D& w,
                                 const PhysicalParams& p) {
  const int n = w.grid.n;
  const double hb = p.hbar;
  Fft2D fft(n);
  const std::vector<double> kx = spectral_freqs(n, w.grid.dx());
  const std::vector<double> ky = spectral_freqs(n, w.grid.dy());

  WaveFunction2D dpx = w;
  fft.forward_x(dpx.amp.data());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) dpx.amp[dpx.idx(i, j)] *= hb * kx[i];
  fft.backward_x(dpx.amp.data());

  WaveFunction2D dpy = w;
  fft.forward_y(dpy.amp.data());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) dpy.amp[dpy.idx(i, j)] *= hb * ky[j];
  fft.backward_y(dpy.amp.data());

  WaveFunction2D kin = w;
  fft.forward2d(kin.amp.data());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      kin.amp[kin.idx(i, j)] *=
          hb * hb * (kx[i] * kx[i] + ky[j] * ky[j]) / (2.0 * p.m);
  fft.backward2d(kin.amp.data());

  const double rot = p.eta / (2.0 * p.m * hb);
  const double shift = p.m * p.g * p.theta / (2.0 * hb);
  const double conf = p.eta * p.eta / (8.0 * p.m * hb * hb);
  WaveFunction2D out = make_wavefunction(w.grid, w.time);
  for (int j = 0; j < n; ++j) {
    const double y = w.grid.y(j);
    for (int i = 0; i < n; ++i) {
      const double x = w.grid.x(i);
      const size_t k = out.idx(i, j);
      out.amp[k] = kin.amp[k] + rot * (y * dpx.amp[k] - x * dpy.amp[k])
                   - shift * dpy.amp[k]
                   + (p.m * p.g * x + conf * (x * x + y * y)) * w.amp[k];
    }
  }
  return out;
}

double tdse_residual(const GaussianEvol& s, const GridSpec& g,
                     const PhysicalParams& p) {
  const WaveFunction2D psi = gaussian_wavefunction(g, s);
  cplx dbx, dby, dc;
  gaussian_rhs(s, p, dbx, dby, dc);
  const WaveFunction2D hpsi = apply_hamiltonian(psi, p);
  WaveFunction2D defect = make_wavefunction(g, s.time);
  const int n = g.n;
  for (int j = 0; j < n; ++j) {
    const double y = g.y(j);
    for (int i = 0; i < n; ++i) {
      const double x = g.x(i);
      const size_t k = defect.idx(i, j);
      defect.amp[k] =
          I * p.hbar * (dbx * x + dby * y + dc) * psi.amp[k] - hpsi.amp[k];
    }
  }
  return defect.norm() / hpsi.norm();
}

} // namespace ncgw
