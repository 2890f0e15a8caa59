#include "ncgw/tdse.hpp"

#include <cmath>
#include <sstream>

#include "ncgw/states.hpp"

namespace ncgw {

namespace {

struct SplitPhases {
  std::vector<cplx> v_half, rx_half, ry_half, t_full;
};

SplitPhases make_phases(const GridSpec& g, const PhysicalParams& p,
                        double dt) {
  const int n = g.n;
  const double hb = p.hbar;
  const std::vector<double> kx = spectral_freqs(n, g.dx());
  const std::vector<double> ky = spectral_freqs(n, g.dy());
  const double conf = p.eta * p.eta / (8.0 * p.m * hb * hb);
  const double rot = p.eta / (2.0 * p.m);
  const double shift = p.m * p.g * p.theta / 2.0;

  SplitPhases ph;
  ph.v_half.resize(size_t(n) * n);
  ph.rx_half.resize(size_t(n) * n);
  ph.ry_half.resize(size_t(n) * n);
  ph.t_full.resize(size_t(n) * n);
  for (int j = 0; j < n; ++j) {
    const double y = g.y(j);
    for (int i = 0; i < n; ++i) {
      const double x = g.x(i);
      const size_t k = size_t(j) * n + i;
      const double V = p.m * p.g * x + conf * (x * x + y * y);
      ph.v_half[k] = std::exp(-I * (0.5 * dt) * V / hb);
      // (eta/2m hbar) y px, diagonal in (kx, y)
      ph.rx_half[k] = std::exp(-I * (0.5 * dt) * rot * y * kx[i] / hb);
      // -((eta/2m) x + m g theta/2) py / hbar, diagonal in (x, ky)
      ph.ry_half[k] =
          std::exp(-I * (0.5 * dt) * (-(rot * x + shift)) * ky[j] / hb);
      ph.t_full[k] =
          std::exp(-I * dt * hb * (kx[i] * kx[i] + ky[j] * ky[j]) /
                   (2.0 * p.m));
    }
  }
  return ph;
}

void pointwise(std::vector<cplx>& a, const std::vector<cplx>& f) {
  for (size_t k = 0; k < a.size(); ++k) a[k] *= f[k];
}

void strang_step(WaveFunction2D& w, const SplitPhases& ph, Fft2D& fft) {
  pointwise(w.amp, ph.v_half);
  fft.forward_x(w.amp.data());
  pointwise(w.amp, ph.rx_half);
  fft.backward_x(w.amp.data());
  fft.forward_y(w.amp.data());
  pointwise(w.amp, ph.ry_half);
  fft.backward_y(w.amp.data());
  fft.forward2d(w.amp.data());
  pointwise(w.amp, ph.t_full);
  fft.backward2d(w.amp.data());
  fft.forward_y(w.amp.data());
  pointwise(w.amp, ph.ry_half);
  fft.backward_y(w.amp.data());
  fft.forward_x(w.amp.data());
  pointwise(w.amp, ph.rx_half);
  fft.backward_x(w.amp.data());
  pointwise(w.amp, ph.v_half);
}

struct SplitStepper {
  std::vector<SplitPhases> sub; // one entry for order 2, three for order 4
  void init(const GridSpec& g, const PhysicalParams& p, double dt,
            int order) {
    sub.clear();
    if (order == 2) {
      sub.push_back(make_phases(g, p, dt));
    } else if (order == 4) {
      const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
      const double w0 = 1.0 - 2.0 * w1;
      sub.push_back(make_phases(g, p, w1 * dt));
      sub.push_back(make_phases(g, p, w0 * dt));
      sub.push_back(make_phases(g, p, w1 * dt));
    } else {
      throw ConfigError("propagate: split-operator order must be 2 or 4");
    }
  }
  void step(WaveFunction2D& w, Fft2D& fft) const {
    for (const auto& ph : sub) strang_step(w, ph, fft);
  }
};

// ----- Crank-Nicolson on periodic finite differences -----

struct FdHamiltonian {
  GridSpec g;
  PhysicalParams p;

  void apply(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    const int n = g.n;
    const double hb = p.hbar;
    const double hx = g.dx(), hy = g.dy();
    const double lapx = -hb * hb / (2.0 * p.m * hx * hx);
    const double lapy = -hb * hb / (2.0 * p.m * hy * hy);
    const double rot = p.eta / (2.0 * p.m * hb);
    const double shift = p.m * p.g * p.theta / (2.0 * hb);
    const double conf = p.eta * p.eta / (8.0 * p.m * hb * hb);
    for (int j = 0; j < n; ++j) {
      const int jm = (j + n - 1) % n, jp = (j + 1) % n;
      const double y = g.y(j);
      for (int i = 0; i < n; ++i) {
        const int im = (i + n - 1) % n, ip = (i + 1) % n;
        const double x = g.x(i);
        const size_t k = size_t(j) * n + i;
        const cplx c = in[k];
        const cplx dxx = in[size_t(j) * n + ip] - 2.0 * c
                         + in[size_t(j) * n + im];
        const cplx dyy = in[size_t(jp) * n + i] - 2.0 * c
                         + in[size_t(jm) * n + i];
        const cplx dx1 = (in[size_t(j) * n + ip] - in[size_t(j) * n + im])
                         / (2.0 * hx);
        const cplx dy1 = (in[size_t(jp) * n + i] - in[size_t(jm) * n + i])
                         / (2.0 * hy);
        const cplx px = -I * hb * dx1;
        const cplx py = -I * hb * dy1;
        out[k] = lapx * dxx + lapy * dyy + rot * (y * px - x * py)
                 - shift * py
                 + (p.m * p.g * x + conf * (x * x + y * y)) * c;
      }
    }
  }
};

// Solves (1 + i mu H) out = rhs through conjugate gradients on the normal
// equations; the operator is normal, so this is CG on 1 + mu^2 H^2.
void cn_solve(const FdHamiltonian& H, double mu, const std::vector<cplx>& rhs,
              std::vector<cplx>& out, int max_iters, double tol) {
  const size_t sz = rhs.size();
  auto apply_A = [&](const std::vector<cplx>& in, std::vector<cplx>& o) {
    H.apply(in, o);
    for (size_t k = 0; k < sz; ++k) o[k] = in[k] + I * mu * o[k];
  };
  auto apply_Ad = [&](const std::vector<cplx>& in, std::vector<cplx>& o) {
    H.apply(in, o);
    for (size_t k = 0; k < sz; ++k) o[k] = in[k] - I * mu * o[k];
  };
  auto dot = [sz](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s = 0.0;
    for (size_t k = 0; k < sz; ++k) s += std::conj(a[k]) * b[k];
    return s;
  };

  std::vector<cplx> r(sz), z(sz), q(sz), tmp(sz), d(sz);
  apply_A(out, tmp);
  for (size_t k = 0; k < sz; ++k) r[k] = rhs[k] - tmp[k];
  apply_Ad(r, z);
  d = z;
  double znorm2 = dot(z, z).real();
  const double bnorm = std::sqrt(dot(rhs, rhs).real());
  for (int it = 0; it < max_iters; ++it) {
    const double rnorm = std::sqrt(dot(r, r).real());
    if (rnorm <= tol * bnorm) return;
    apply_A(d, q);
    const double alpha = znorm2 / dot(q, q).real();
    for (size_t k = 0; k < sz; ++k) {
      out[k] += alpha * d[k];
      r[k] -= alpha * q[k];
    }
    apply_Ad(r, z);
    const double znew = dot(z, z).real();
    const double beta = znew / znorm2;
    znorm2 = znew;
    for (size_t k = 0; k < sz; ++k) d[k] = z[k] + beta * d[k];
  }
  throw OracleError("crank_nicolson: linear solve failed to converge");
}

double energy_spread(const WaveFunction2D& w, const PhysicalParams& p) {
  const WaveFunction2D hw = apply_hamiltonian(w, p);
  const double n2 = w.norm2();
  const double eh = overlap(w, hw).real() / n2;
  const double eh2 = hw.norm2() / n2;
  return std::sqrt(std::max(0.0, eh2 - eh * eh));
}

} // namespace

PropagationResult propagate(
    const WaveFunction2D& w0, const PhysicalParams& p, double t_end,
    const PropagatorConfig& cfg, int dump_every,
    const std::function<void(const WaveFunction2D&)>& dump) {
  p.validate();
  w0.grid.validate();
  if (!(cfg.dt > 0.0)) throw ConfigError("propagate: dt must be positive");
  if (t_end < w0.time) throw ConfigError("propagate: t_end before start");

  const double spread = energy_spread(w0, p);
  if (cfg.dt * spread / p.hbar >= 0.1) {
    std::ostringstream os;
    os << "propagate: dt * energy spread / hbar = "
       << cfg.dt * spread / p.hbar << " >= 0.1; reduce dt";
    throw ConfigError(os.str());
  }

  PropagationResult res{w0, 0.0, 0.0, 0};
  const double norm0 = res.psi.norm();
  const double span = t_end - w0.time;
  const int full_steps = int(span / cfg.dt);
  const double rest = span - full_steps * cfg.dt;

  Fft2D fft(w0.grid.n);
  SplitStepper stepper;
  FdHamiltonian fd{w0.grid, p};
  const bool split = cfg.scheme == Scheme::split_operator_4way;
  if (split) stepper.init(w0.grid, p, cfg.dt, cfg.order);

  auto do_step = [&](double dt) {
    if (split) {
      stepper.step(res.psi, fft);
    } else {
      const double mu = dt / (2.0 * p.hbar);
      std::vector<cplx> rhs(res.psi.amp.size());
      fd.apply(res.psi.amp, rhs);
      for (size_t k = 0; k < rhs.size(); ++k)
        rhs[k] = res.psi.amp[k] - I * mu * rhs[k];
      cn_solve(fd, mu, rhs, res.psi.amp, cfg.cn_max_iters, cfg.cn_tol);
    }
  };

  for (int s = 0; s < full_steps; ++s) {
    do_step(cfg.dt);
    res.psi.time += cfg.dt;
    ++res.steps;
    if (cfg.boundary_check_every > 0
        && res.steps % cfg.boundary_check_every == 0) {
      const double edge = res.psi.boundary_peak_ratio();
      res.boundary_max = std::max(res.boundary_max, edge);
      if (edge > cfg.boundary_tol) {
        std::ostringstream os;
        os << "propagate: boundary amplitude reached " << edge
           << " of peak at t = " << res.psi.time << "; enlarge the domain";
        throw ConfigError(os.str());
      }
      res.norm_drift = std::max(res.norm_drift,
                                std::abs(res.psi.norm() - norm0));
    }
    if (dump_every > 0 && dump && res.steps % dump_every == 0) dump(res.psi);
  }
  if (rest > 1e-12 * cfg.dt) {
    if (split) stepper.init(w0.grid, p, rest, cfg.order);
    do_step(rest);
    res.psi.time = t_end;
    ++res.steps;
  }
  res.psi.time = t_end;
  res.boundary_max = std::max(res.boundary_max,
                              res.psi.boundary_peak_ratio());
  res.norm_drift = std::max(res.norm_drift, std::abs(res.psi.norm() - norm0));
  if (dump && dump_every > 0) dump(res.psi);
  return res;
}

cplx invariant_expectation(const WaveFunction2D& w, const CoeffSet& cs,
                           double t) {
  const WaveFunction2D iw = apply_invariant(w, cs, t);
  return overlap(w, iw) / w.norm2();
}

cplx hamiltonian_expectation(const WaveFunction2D& w,
                             const PhysicalParams& p) {
  const WaveFunction2D hw = apply_hamiltonian(w, p);
  return overlap(w, hw) / w.norm2();
}

EvolutionCheck verify_lr_solution(double lambda, double t_end,
                                  const CoeffSet& cs, const GridSpec& g,
                                  const PropagatorConfig& cfg) {
  const PhysicalParams& p = cs.params;
  const WaveFunction2D psi0 = phi_lambda(g, lambda, cs, 0.0);
  const cplx inv0 = invariant_expectation(psi0, cs, 0.0);
  const cplx en0 = hamiltonian_expectation(psi0, p);

  const PropagationResult run = propagate(psi0, p, t_end, cfg);

  EvolutionCheck out{};
  out.norm_drift = run.norm_drift;

  const WaveFunction2D target = phi_lambda(g, lambda, cs, t_end);
  out.fidelity_eigenstate = fidelity(run.psi, target);

  GaussianEvol comp = gaussian_from_eigenstate(lambda, cs, 0.0);
  const int comp_steps = std::max(2000, int(t_end / cfg.dt));
  comp = evolve_gaussian(comp, t_end, comp_steps, p);
  const WaveFunction2D comp_psi = gaussian_wavefunction(g, comp);
  out.fidelity_comparator = fidelity(run.psi, comp_psi);
  out.comparator_residual = tdse_residual(comp, g, p);

  const cplx inv1 = invariant_expectation(run.psi, cs, t_end);
  out.invariant_drift = std::abs(inv1 - inv0) / (1.0 + std::abs(inv0));
  const cplx en1 = hamiltonian_expectation(run.psi, p);
  out.energy_drift = std::abs(en1 - en0) / (1.0 + std::abs(en0));

  // observed center against the uniform drift of the comparator
  const DriftLaw law = drift_law(lambda, cs);
  double wsum = 0.0, ysum = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const double y = g.y(j);
    for (int i = 0; i < g.n; ++i) {
      const double w2 = std::norm(run.psi.amp[run.psi.idx(i, j)]);
      wsum += w2;
      ysum += y * w2;
    }
  }
  out.center_y_shift = ysum / wsum - (law.y0 + law.vy * t_end);
  return out;
}

} // namespace ncgw
