#include "ncgw/observables.hpp"

#include <cmath>
#include <limits>

#include "ncgw/states.hpp"

namespace ncgw {

AuxVals aux_values(const PhysicalParams& p, double t) {
  p.validate();
  const DerivedConstants d = derive_constants(p);
  const double hb = p.hbar;
  const double om = d.omega;
  const cplx etau = std::exp(-2.0 * I * om * p.tau);
  const cplx ett = std::exp(-2.0 * I * om * (t + p.tau));

  AuxVals v;
  v.a = p.eta / (4.0 * hb * hb) * (1.0 - etau);
  v.b = p.eta / (4.0 * hb * hb) * (1.0 + etau);
  v.c = p.m / (2.0 * p.eta) * (1.0 + d.zeta) + I * p.m / 2.0 * ett;
  v.d = -I * p.m / (2.0 * p.eta) * (1.0 + d.zeta) + p.m / 2.0 * ett;
  v.h = I * p.eta / (2.0 * hb * hb) * ett;
  v.k = p.m * p.m * hb * hb / (4.0 * p.eta) * ett - I * d.nu_rate * t;
  v.a0 = v.a.real();
  v.b0 = v.b.real();
  v.c0 = v.c.real();
  v.d0 = v.d.real();
  v.h0 = v.h.real();
  v.k0 = v.k.real();

  v.degenerate = false;
  v.reason.clear();
  const double tiny = 1e-12;
  if (v.a0 <= tiny) {
    v.degenerate = true;
    v.reason = "a0 <= 0";
  } else if (v.b0 <= tiny) {
    v.degenerate = true;
    v.reason = "b0 <= 0";
  }
  if (!v.degenerate) {
    v.beta0 = v.b0 - v.h0 * v.h0 / (4.0 * v.a0);
    v.beta1 = v.a0 - v.h0 * v.h0 / (4.0 * v.b0);
    if (v.beta0 <= tiny || v.beta1 <= tiny) {
      v.degenerate = true;
      v.reason = v.beta0 <= tiny ? "beta0 <= 0" : "beta1 <= 0";
    } else {
      v.gamma0 = (v.d0 - v.c0 * v.h0) / (2.0 * v.beta0);
      v.gamma1 = (v.c0 - v.d0 * v.h0) / (2.0 * v.beta1);
      v.delta0 = (v.k0 - v.c0 * v.c0 / (4.0 * v.a0))
                 - std::pow(v.d0 - v.c0 * v.h0, 2) / (4.0 * v.beta0);
      v.delta1 = (v.k0 - v.d0 * v.d0 / (4.0 * v.b0))
                 - std::pow(v.c0 - v.d0 * v.h0, 2) / (4.0 * v.beta1);
    }
  }
  if (v.degenerate) {
    v.beta0 = v.beta1 = v.gamma0 = v.gamma1 = v.delta0 = v.delta1 =
        std::numeric_limits<double>::quiet_NaN();
  }
  return v;
}

FormulaExpectations formula_expectations(const PhysicalParams& p, double t) {
  const AuxVals v = aux_values(p, t);
  FormulaExpectations e{};
  e.degenerate = v.degenerate;
  if (v.degenerate) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    e.x = e.y = e.x2 = e.y2 = e.xy = e.var_x = nan;
    e.px = e.py = e.px2 = e.py2 = e.var_px = cplx(nan, nan);
    return e;
  }
  const double hb = p.hbar;
  // the normalization identity collapses the prefactors:
  // |nu~0|^2 pi e^{-2 delta0} / (4 a0 sqrt(a0 beta0)) = 1/(2 a0),
  // and a0 beta0 = b0 beta1 exactly, so the y-family prefactor only keeps
  // the residual e^{2(delta0 - delta1)}.
  const double Px = 1.0 / (2.0 * v.a0);
  const double Py = std::exp(2.0 * (v.delta0 - v.delta1)) / (2.0 * v.b0);
  e.x = Px * (v.h0 * v.gamma0 - v.c0);
  e.y = Py * (v.h0 * v.gamma1 - v.d0);
  e.x2 = 0.5 * Px
         * (1.0 + v.h0 * v.h0 / (4.0 * v.a0 * v.beta0)
            + std::pow(v.c0 - v.h0 * v.gamma0, 2) / v.a0);
  e.y2 = 0.5 * Py
         * (1.0 + v.h0 * v.h0 / (4.0 * v.b0 * v.beta1)
            + std::pow(v.d0 - v.h0 * v.gamma1, 2) / v.b0);
  e.xy = Px * (v.c0 * v.gamma0 - v.h0 * v.gamma0 * v.gamma0
               - v.h0 / (4.0 * v.beta0));
  e.px = -hb / I * (v.c + 2.0 * v.a * e.x + v.h * e.y);
  e.py = -hb / I * (v.d + 2.0 * v.b * e.y + v.h * e.x);
  e.px2 = hb * hb
          * ((2.0 * v.a - v.c * v.c) - 4.0 * v.a * v.c * e.x
             - 2.0 * v.c * v.h * e.y - 4.0 * v.a * v.a * e.x2
             - v.h * v.h * e.y2 - 4.0 * v.a * v.h * e.xy);
  e.py2 = hb * hb
          * ((2.0 * v.b - v.d * v.d) - 4.0 * v.b * v.d * e.y
             - 2.0 * v.d * v.h * e.x - 4.0 * v.b * v.b * e.y2
             - v.h * v.h * e.x2 - 4.0 * v.b * v.h * e.xy);
  e.var_x = 1.0 / (4.0 * v.a0)
            * (1.0 + v.h0 * v.h0 / (4.0 * v.a0 * v.beta0));
  e.var_px = 2.0 * hb * hb * v.a;
  return e;
}

GridMoments grid_moments(const WaveFunction2D& w, double hbar) {
  const int n = w.grid.n;
  const double n2 = w.norm2();
  GridMoments m{};
  double sx = 0, sy = 0, sx2 = 0, sy2 = 0, sxy = 0;
  for (int j = 0; j < n; ++j) {
    const double y = w.grid.y(j);
    for (int i = 0; i < n; ++i) {
      const double x = w.grid.x(i);
      const double d = std::norm(w.amp[w.idx(i, j)]);
      sx += x * d;
      sy += y * d;
      sx2 += x * x * d;
      sy2 += y * y * d;
      sxy += x * y * d;
    }
  }
  const double cell = w.grid.dx() * w.grid.dy();
  m.x = sx * cell / n2;
  m.y = sy * cell / n2;
  m.x2 = sx2 * cell / n2;
  m.y2 = sy2 * cell / n2;
  m.xy = sxy * cell / n2;

  Fft2D fft(n);
  auto axis_moments = [&](bool along_x, double& p1, double& p2) {
    WaveFunction2D d = w;
    if (along_x)
      fft.forward_x(d.amp.data());
    else
      fft.forward_y(d.amp.data());
    const std::vector<double> ks =
        spectral_freqs(n, along_x ? w.grid.dx() : w.grid.dy());
    double s1 = 0, s2 = 0, s0 = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double k = along_x ? ks[i] : ks[j];
        const double dd = std::norm(d.amp[d.idx(i, j)]);
        s0 += dd;
        s1 += k * dd;
        s2 += k * k * dd;
      }
    p1 = hbar * s1 / s0;
    p2 = hbar * hbar * s2 / s0;
  };
  axis_moments(true, m.px, m.px2);
  axis_moments(false, m.py, m.py2);

  m.dx = std::sqrt(std::max(0.0, m.x2 - m.x * m.x));
  m.dy = std::sqrt(std::max(0.0, m.y2 - m.y * m.y));
  m.dpx = std::sqrt(std::max(0.0, m.px2 - m.px * m.px));
  m.dpy = std::sqrt(std::max(0.0, m.py2 - m.py * m.py));
  return m;
}

double law_product(const CoeffSet& cs, double t) {
  const double hb = cs.params.hbar;
  const double rho = hb / (2.0 * cs.params.kappa);
  const double Om = cs.derived.omega * (t + cs.params.tau);
  const double c2 = std::cos(2.0 * Om);
  const double p2 = hb * hb / 4.0 * (1.0 - rho * rho * c2 * c2)
                    / ((1.0 - rho * rho) * (1.0 - rho * rho));
  return std::sqrt(p2);
}

double law_sigma_x(const CoeffSet& cs, double t) {
  const auto& p = cs.params;
  const double A1 = p.eta / (4.0 * p.hbar * p.hbar);
  const double rho = p.hbar / (2.0 * p.kappa);
  const double Om = cs.derived.omega * (t + p.tau);
  const double var = (1.0 + rho * std::cos(2.0 * Om))
                     / (4.0 * A1 * (1.0 - rho * rho));
  return std::sqrt(var);
}

double f_closed_form(const PhysicalParams& p, double t) {
  const DerivedConstants d = derive_constants(p);
  const double om = d.omega;
  const double s = std::sin(om * p.tau);
  const double s2 = std::sin(2.0 * om * p.tau);
  const double st = std::sin(2.0 * om * (t + p.tau));
  return (2.0 / s) / (1.0 - st * st / (s2 * s2));
}

std::vector<UncertaintySample> scan_uncertainty(const CoeffSet& cs,
                                                const std::vector<double>& ts,
                                                int grid_n, double pad_sigmas,
                                                int nodes) {
  std::vector<UncertaintySample> out;
  out.reserve(ts.size());
  const double hb = cs.params.hbar;
  for (double t : ts) {
    UncertaintySample s{};
    s.t = t;
    const GridSpec g = packet_grid(grid_n, cs, t, pad_sigmas);
    const PacketBuild pb =
        build_packet(g, cs, t, PacketMode::lambda_quadrature, nodes, false);
    const GridMoments m = grid_moments(pb.psi, hb);
    s.product_oracle = m.dx * m.dpx;
    s.f_formula = f_closed_form(cs.params, t);
    s.flag = kFlagNone;
    if (!(s.f_formula >= 0.0) || !std::isfinite(s.f_formula)) {
      s.flag |= kFlagFormulaInvalid;
      s.product_formula = std::numeric_limits<double>::quiet_NaN();
    } else {
      s.product_formula = hb / 2.0 * std::sqrt(s.f_formula);
    }
    if (aux_values(cs.params, t).degenerate) s.flag |= kFlagDegenerate;
    out.push_back(s);
  }
  return out;
}

double golden_minimize(const std::function<double(double)>& f, double lo,
                       double hi, double tol, double* fmin) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  if (fmin) *fmin = f(xm);
  return xm;
}

std::vector<Minimum> refine_minima(const CoeffSet& cs,
                                   const std::vector<UncertaintySample>& scan,
                                   int grid_n, double pad_sigmas, int nodes,
                                   double t_tol) {
  auto eval = [&](double t) {
    const GridSpec g = packet_grid(grid_n, cs, t, pad_sigmas);
    const PacketBuild pb =
        build_packet(g, cs, t, PacketMode::lambda_quadrature, nodes, false);
    const GridMoments m = grid_moments(pb.psi, cs.params.hbar);
    return m.dx * m.dpx;
  };
  std::vector<Minimum> mins;
  for (size_t i = 1; i + 1 < scan.size(); ++i) {
    if (scan[i].product_oracle < scan[i - 1].product_oracle
        && scan[i].product_oracle < scan[i + 1].product_oracle) {
      Minimum m;
      m.t = golden_minimize(eval, scan[i - 1].t, scan[i + 1].t, t_tol,
                            &m.value);
      mins.push_back(m);
    }
  }
  return mins;
}

} // namespace ncgw
