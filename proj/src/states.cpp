#include "ncgw/states.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ncgw {

namespace {

struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

cplx exponent_at(const GaussianExponent& e, double x, double y) {
  return e.cxx * x * x + e.cyy * y * y + e.cxy * x * y + e.bx * x + e.by * y
         + e.c0;
}

// fills amp = exp(E - S) with S = max Re E over the grid; returns S
double fill_scaled(WaveFunction2D& w, const GaussianExponent& e) {
  const int n = w.grid.n;
  double S = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      S = std::max(S,
                   exponent_at(e, w.grid.x(i), w.grid.y(j)).real());
  for (int j = 0; j < n; ++j) {
    const double y = w.grid.y(j);
    for (int i = 0; i < n; ++i)
      w.amp[w.idx(i, j)] = std::exp(exponent_at(e, w.grid.x(i), y) - S);
  }
  return S;
}

} // namespace

void fill_gaussian(WaveFunction2D& w, const GaussianExponent& e) {
  fill_scaled(w, e);
}

GaussianExponent eigenstate_exponent(double lambda, const CoeffSet& cs,
                                     double t) {
  const cplx A = cs.A(t), B = cs.B(t), C = cs.C(t), D = cs.D(t),
             al = cs.alpha(t);
  const double hb = cs.params.hbar;
  GaussianExponent e;
  e.cxx = -I / (2.0 * hb) * (C / A);
  e.cyy = -I / (2.0 * hb) * (D / B);
  e.bx = I * (lambda - al) / (2.0 * hb * A);
  e.by = I * (lambda - al) / (2.0 * hb * B);
  if (!(e.cxx.real() < 0.0) || !(e.cyy.real() < 0.0)) {
    std::ostringstream os;
    os << "eigenstate not square-integrable: Re[-i C/(2 hbar A)] = "
       << e.cxx.real() << ", Re[-i D/(2 hbar B)] = " << e.cyy.real()
       << " (C/A = " << C / A << ", D/B = " << D / B << ")";
    throw OracleError(os.str());
  }
  return e;
}

EigenstateShape eigenstate_shape(double lambda, const CoeffSet& cs, double t) {
  const GaussianExponent e = eigenstate_exponent(lambda, cs, t);
  EigenstateShape s;
  s.cx = -e.bx.real() / (2.0 * e.cxx.real());
  s.cy = -e.by.real() / (2.0 * e.cyy.real());
  s.sigma = std::sqrt(-1.0 / (4.0 * std::min(e.cxx.real(), e.cyy.real())));
  return s;
}

GridSpec eigenstate_grid(int n, double lambda, const CoeffSet& cs, double t,
                         double pad_sigmas) {
  const EigenstateShape s = eigenstate_shape(lambda, cs, t);
  return auto_grid(n, s.cx, s.cy, s.sigma, s.sigma, pad_sigmas);
}

WaveFunction2D phi_lambda(const GridSpec& g, double lambda, const CoeffSet& cs,
                          double t) {
  WaveFunction2D w = make_wavefunction(g, t);
  fill_gaussian(w, eigenstate_exponent(lambda, cs, t));
  w.normalize();
  const int n = g.n;
  cplx anchor = w.amp[w.idx(n / 2, n / 2)];
  if (std::abs(anchor) == 0.0) {
    double best = -1.0;
    for (const cplx& a : w.amp)
      if (std::abs(a) > best) {
        best = std::abs(a);
        anchor = a;
      }
  }
  const cplx gauge = std::exp(-I * std::arg(anchor));
  for (cplx& a : w.amp) a *= gauge;
  return w;
}

WaveFunction2D apply_invariant(const WaveFunction2D& w, const CoeffSet& cs,
                               double t) {
  const double edge = w.boundary_peak_ratio();
  if (edge > 1e-12) {
    std::ostringstream os;
    os << "apply_invariant: boundary amplitude " << edge
       << " of peak exceeds 1e-12; widen the domain";
    throw ConfigError(os.str());
  }
  const int n = w.grid.n;
  const double hb = cs.params.hbar;
  const cplx A = cs.A(t), B = cs.B(t), C = cs.C(t), D = cs.D(t),
             al = cs.alpha(t);
  Fft2D fft(n);

  WaveFunction2D dpx = w;
  fft.forward_x(dpx.amp.data());
  const std::vector<double> kx = spectral_freqs(n, w.grid.dx());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) dpx.amp[dpx.idx(i, j)] *= hb * kx[i];
  fft.backward_x(dpx.amp.data());

  WaveFunction2D dpy = w;
  fft.forward_y(dpy.amp.data());
  const std::vector<double> ky = spectral_freqs(n, w.grid.dy());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) dpy.amp[dpy.idx(i, j)] *= hb * ky[j];
  fft.backward_y(dpy.amp.data());

  WaveFunction2D out = make_wavefunction(w.grid, w.time);
  for (int j = 0; j < n; ++j) {
    const double y = w.grid.y(j);
    for (int i = 0; i < n; ++i) {
      const double x = w.grid.x(i);
      const size_t k = out.idx(i, j);
      out.amp[k] = A * dpx.amp[k] + B * dpy.amp[k]
                   + (C * x + D * y + al) * w.amp[k];
    }
  }
  return out;
}

double eigen_residual(const WaveFunction2D& w, double lambda,
                      const CoeffSet& cs, double t) {
  WaveFunction2D iw = apply_invariant(w, cs, t);
  for (size_t k = 0; k < iw.amp.size(); ++k) iw.amp[k] -= lambda * w.amp[k];
  return iw.norm() / w.norm();
}

cplx nu_rate_oracle(double lambda, const CoeffSet& cs, double t) {
  const auto& p = cs.params;
  const double hb = p.hbar;
  const cplx A = cs.A(t), B = cs.B(t), C = cs.C(t), D = cs.D(t),
             al = cs.alpha(t);
  const cplx w = lambda - al;
  const cplx aldot = coeff_rhs(cs.at(t), p)[4];
  const double A1 = p.eta / (4.0 * hb * hb);
  // log-derivative of the time-dependent normalization constant
  const double dbx2 = -2.0 * (std::conj(w) * aldot).real()
                      / (4.0 * hb * hb * std::norm(B));
  const double phi0_rate = -dbx2 / (4.0 * A1);
  cplx rhs = I * hb * phi0_rate;
  rhs += -I * hb / (2.0 * p.m) * (C / A + D / B);
  rhs += p.m * p.g * p.theta / (2.0 * hb) * w / B;
  rhs += -1.0 / (8.0 * p.m) * w * w * (1.0 / (A * A) + 1.0 / (B * B));
  return rhs / hb;
}

PhaseTrace nu_phase(double lambda, const CoeffSet& cs, double t0, double t1,
                    int samples) {
  if (samples < 2) throw ConfigError("nu_phase: need at least 2 samples");
  PhaseTrace tr;
  tr.times.resize(samples);
  tr.nu.resize(samples);
  const double h = (t1 - t0) / (samples - 1);
  cplx acc = 0.0;
  cplx prev = nu_rate_oracle(lambda, cs, t0);
  tr.times[0] = t0;
  tr.nu[0] = 0.0;
  for (int k = 1; k < samples; ++k) {
    const double t = t0 + k * h;
    const cplx cur = nu_rate_oracle(lambda, cs, t);
    acc += 0.5 * h * (prev + cur);
    prev = cur;
    tr.times[k] = t;
    tr.nu[k] = acc;
  }
  return tr;
}

cplx nu_closed_form(double lambda, const CoeffSet& cs, double t) {
  const double om = cs.derived.omega;
  return cs.derived.nu_rate * t
         + I / (2.0 * cs.b1) * lambda * (std::exp(-I * om * t) - 1.0);
}

cplx nu_lambda_part(const CoeffSet& cs, double t) {
  const auto& p = cs.params;
  const double om = cs.derived.omega;
  return p.m * p.g * p.theta / (2.0 * p.hbar * p.hbar) * (I / cs.b1)
         * (std::exp(-I * om * t) - 1.0);
}

PacketExponent packet_exponent(const CoeffSet& cs, double t, double kappa) {
  const auto& p = cs.params;
  const double hb = p.hbar;
  const cplx B = cs.B(t), al = cs.alpha(t);
  PacketExponent pe;
  pe.A1 = p.eta / (4.0 * hb * hb);
  const cplx l1 = -1.0 / (2.0 * hb * B);
  const cplx l0 = I * nu_lambda_part(cs, t);
  pe.Q = hb / (2.0 * kappa) * l1 * l1;
  pe.P = al / (2.0 * hb * B) + hb / kappa * l1 * l0;
  pe.rho = std::abs(pe.Q) / pe.A1;
  pe.degenerate = pe.rho >= 1.0 - 1e-12;

  Eigen::Matrix2d M;
  M << pe.A1 - pe.Q.real(), -pe.Q.imag(),
       -pe.Q.imag(), pe.A1 + pe.Q.real();
  Eigen::Vector2d r(0.5 * pe.P.real(), 0.5 * pe.P.imag());
  Eigen::Vector2d c;
  if (std::abs(M.determinant()) > 1e-12 * pe.A1 * pe.A1) {
    c = M.inverse() * r;
  } else {
    c = M.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV)
            .setThreshold(1e-10)
            .solve(r);
  }
  pe.center_x = c[0];
  pe.center_y = c[1];
  pe.sigma_major =
      pe.degenerate ? std::numeric_limits<double>::infinity()
                    : 1.0 / (2.0 * std::sqrt(pe.A1 * (1.0 - pe.rho)));
  return pe;
}

GridSpec packet_grid(int n, const CoeffSet& cs, double t, double pad_sigmas) {
  const PacketExponent pe = packet_exponent(cs, t, cs.params.kappa);
  if (pe.degenerate)
    throw ConfigError("packet_grid: density form is degenerate at this kappa");
  return auto_grid(n, pe.center_x, pe.center_y, pe.sigma_major,
                   pe.sigma_major, pad_sigmas);
}

void gauss_hermite(int n, std::vector<double>& nodes,
                   std::vector<double>& weights) {
  if (n < 2) throw ConfigError("gauss_hermite: need at least 2 nodes");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(k / 2.0);
    J(k - 1, k) = b;
    J(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(n);
  weights.resize(n);
  const double sqrt_pi = std::sqrt(M_PI);
  for (int k = 0; k < n; ++k) {
    nodes[k] = es.eigenvalues()[k];
    const double v0 = es.eigenvectors()(0, k);
    weights[k] = sqrt_pi * v0 * v0;
  }
}

namespace {

// quadrature over the eigenvalue, contour shifted through the saddle so the
// integrand is non-oscillatory near the density maximum
struct QuadResult {
  WaveFunction2D psi; // scaled by exp(-S)
  double S;
};

QuadResult quad_build(const GridSpec& g, const CoeffSet& cs, double t,
                      double kappa, int nodes) {
  const auto& p = cs.params;
  const double hb = p.hbar;
  const cplx B = cs.B(t), al = cs.alpha(t);
  const double A1 = p.eta / (4.0 * hb * hb);
  const cplx l1 = -1.0 / (2.0 * hb * B);
  const cplx l0 = I * nu_lambda_part(cs, t);
  const cplx Lx = l1, Ly = -I * l1;

  const PacketExponent pe = packet_exponent(cs, t, kappa);
  const double cx = pe.center_x, cy = pe.center_y;
  const cplx L0 = Lx * cx + Ly * cy + l0;
  const cplx lam0 = hb / kappa * L0;
  const double s = std::sqrt(2.0 * hb / kappa);

  const int n = g.n;
  QuadResult out{make_wavefunction(g, t), 0.0};

  // complex exponent without the saddle quadratic, plus its real part bound
  std::vector<cplx> pre(size_t(n) * n);
  std::vector<double> sadR(size_t(n) * n);
  double S = -std::numeric_limits<double>::infinity();
  double sad_max = 0.0;
  for (int j = 0; j < n; ++j) {
    const double y = g.y(j);
    for (int i = 0; i < n; ++i) {
      const double x = g.x(i);
      const cplx L = Lx * x + Ly * y + l0;
      const cplx base = -A1 * (x * x + y * y) + al / (2.0 * hb * B)
                        * cplx(x, -y);
      const cplx shift = lam0 * L - kappa * lam0 * lam0 / (2.0 * hb);
      const cplx leff = L - L0;
      const cplx sad = hb / (2.0 * kappa) * leff * leff;
      const size_t k = size_t(j) * n + i;
      pre[k] = base + shift;
      sadR[k] = sad.real();
      sad_max = std::max(sad_max, std::abs(sadR[k]));
      S = std::max(S, pre[k].real() + sadR[k]);
    }
  }
  if (sad_max > 600.0)
    throw OracleError("packet quadrature: saddle exponent exceeds the "
                      "separable accumulation range; shrink the domain");

  std::vector<double> u, wgt;
  gauss_hermite(nodes, u, wgt);
  std::vector<cplx> acc(size_t(n) * n, cplx(0, 0));
  std::vector<cplx> ex(n), ey(n);
  for (int q = 0; q < nodes; ++q) {
    const cplx fx = s * u[q] * Lx;
    const cplx fy = s * u[q] * Ly;
    for (int i = 0; i < n; ++i) ex[i] = std::exp(fx * (g.x(i) - cx));
    for (int j = 0; j < n; ++j) ey[j] = wgt[q] * std::exp(fy * (g.y(j) - cy));
    for (int j = 0; j < n; ++j) {
      const cplx e = ey[j];
      cplx* row = acc.data() + size_t(j) * n;
      for (int i = 0; i < n; ++i) row[i] += e * ex[i];
    }
  }
  for (size_t k = 0; k < acc.size(); ++k)
    out.psi.amp[k] = std::exp(pre[k] - S) * acc[k];
  out.S = S;
  return out;
}

double log_norm2_scaled(const WaveFunction2D& w, double S) {
  return 2.0 * S + std::log(w.norm2());
}

} // namespace

PacketBuild build_packet(const GridSpec& g, const CoeffSet& cs, double t,
                         PacketMode mode, int nodes, bool check_nodes) {
  cs.params.validate();
  const double kappa = cs.params.kappa;
  PacketBuild out;
  out.analytic = packet_exponent(cs, t, kappa);
  out.node_doubling_dev = -1.0;

  if (mode == PacketMode::closed_form) {
    const auto& p = cs.params;
    const double hb = p.hbar;
    const double om = cs.derived.omega;
    const double A1 = p.eta / (4.0 * hb * hb);
    const cplx W = std::exp(-2.0 * I * om * t)
                   / (8.0 * hb * cs.b1 * cs.b1 * kappa);
    const cplx lin = -(1.0 + cs.derived.zeta) / (2.0 * hb * om)
                     - 2.0 * I * hb * om * W;
    GaussianExponent e;
    e.cxx = -A1 + W * om * om;
    e.cyy = -A1 - W * om * om;
    e.cxy = -2.0 * I * W * om * om;
    e.bx = lin;
    e.by = -I * lin;
    e.c0 = -hb * hb * W + I * cs.derived.nu_rate * t;
    out.psi = make_wavefunction(g, t);
    const double S = fill_scaled(out.psi, e);
    out.log_norm2 = log_norm2_scaled(out.psi, S);
    out.psi.normalize();
    return out;
  }

  QuadResult qr = quad_build(g, cs, t, kappa, nodes);
  out.log_norm2 = log_norm2_scaled(qr.psi, qr.S);
  if (check_nodes) {
    QuadResult qr2 = quad_build(g, cs, t, kappa, 2 * nodes);
    qr.psi.normalize();
    qr2.psi.normalize();
    double dev = 0.0, peak = 0.0;
    for (size_t k = 0; k < qr.psi.amp.size(); ++k) {
      dev = std::max(dev, std::abs(qr.psi.amp[k] - qr2.psi.amp[k]));
      peak = std::max(peak, std::abs(qr.psi.amp[k]));
    }
    out.node_doubling_dev = dev / peak;
    if (out.node_doubling_dev > 1e-8) {
      std::ostringstream os;
      os << "packet quadrature not converged: node doubling moved the state "
         << "by " << out.node_doubling_dev;
      throw OracleError(os.str());
    }
    out.psi = std::move(qr.psi);
  } else {
    qr.psi.normalize();
    out.psi = std::move(qr.psi);
  }
  return out;
}

double packet_log_norm2(const GridSpec& g, const CoeffSet& cs, double t,
                        double kappa, int nodes) {
  if (!(kappa > 0.0)) throw ConfigError("packet_log_norm2: kappa must be positive");
  QuadResult qr = quad_build(g, cs, t, kappa, nodes);
  return log_norm2_scaled(qr.psi, qr.S);
}

} // namespace ncgw
