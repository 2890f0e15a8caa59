#include "ncgw/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ncgw/coeffs.hpp"
#include "ncgw/gausssol.hpp"
#include "ncgw/observables.hpp"
#include "ncgw/opalg.hpp"
#include "ncgw/states.hpp"

namespace ncgw {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string fmt(cplx v) {
  std::ostringstream os;
  os.precision(10);
  os << v.real() << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag())
     << "i";
  return os.str();
}

// ansatz defect |i hbar d psi/dt - H psi| / |H psi| for the phase-rotated
// eigenstate family, time derivative by central difference
double ansatz_defect(const CoeffSet& cs, double lambda, double t) {
  const GridSpec g = eigenstate_grid(256, lambda, cs, t, 12.0);
  const double dt = 1e-5;
  auto state = [&](double tt) {
    WaveFunction2D w = make_wavefunction(g, tt);
    GaussianExponent e = eigenstate_exponent(lambda, cs, tt);
    // attach the phase and normalization the ansatz prescribes
    const PhaseTrace tr = nu_phase(lambda, cs, t - 2.0 * dt, tt, 64);
    const cplx nu = tr.nu.back();
    const double A1 = -e.cxx.real();
    const double r2 = e.bx.real() * e.bx.real() + e.by.real() * e.by.real();
    e.c0 = -0.5 * (std::log(M_PI / (2.0 * A1)) + r2 / (2.0 * A1))
           + I * nu;
    const int n = g.n;
    for (int j = 0; j < n; ++j) {
      const double y = g.y(j);
      for (int i = 0; i < n; ++i) {
        const double x = g.x(i);
        w.amp[w.idx(i, j)] = std::exp(e.cxx * x * x + e.cyy * y * y
                                      + e.bx * x + e.by * y + e.c0);
      }
    }
    return w;
  };
  const WaveFunction2D wm = state(t - dt);
  const WaveFunction2D w0 = state(t);
  const WaveFunction2D wp = state(t + dt);
  const WaveFunction2D hw = apply_hamiltonian(w0, cs.params);
  WaveFunction2D defect = make_wavefunction(g, t);
  for (size_t k = 0; k < defect.amp.size(); ++k) {
    const cplx dpsi = (wp.amp[k] - wm.amp[k]) / (2.0 * dt);
    defect.amp[k] = I * cs.params.hbar * dpsi - hw.amp[k];
  }
  return defect.norm() / hw.norm();
}

} // namespace

DiscrepancyReport build_discrepancy_report(const PhysicalParams& p) {
  p.validate();
  DiscrepancyReport rep;

  // a second parameter point where unit masses and field strengths no longer
  // mask missing factors
  PhysicalParams q = p;
  q.m = 2.0;
  q.g = 3.0;

  const CoeffSet cs_p = closed_form_coeffs(p);
  const CoeffSet cs_q = closed_form_coeffs(q);

  { // 1: which operator carries the first term of [H, px]
    const OperatorSet ops = build_canonical_ops(12, p.hbar,
                                                p.hbar / std::sqrt(p.eta));
    const AlgebraReport ar = verify_quasi_algebra(ops, p, 1e-8);
    const AlgebraRelation& r = ar.relations[2]; // [H,px]
    cplx meas_px = 0, meas_py = 0;
    for (const auto& ch : r.channels) {
      if (ch.name == "px") meas_px = ch.measured;
      if (ch.name == "py") meas_py = ch.measured;
    }
    Discrepancy d;
    d.id = "commutator-H-px-channel";
    d.quantity = "operator carrying the -i eta/(2m) term of [H, px]";
    d.formula_value = "px (coefficient " + fmt(cplx(0, -p.eta / (2 * p.m)))
                      + ")";
    d.oracle_value = "py (measured px: " + fmt(meas_px) + ", py: "
                     + fmt(meas_py) + ")";
    d.rel_diff = std::abs(meas_px - cplx(0, -p.eta / (2 * p.m)))
                 / (p.eta / (2 * p.m));
    d.verdict = "mismatch";
    d.note = "the tabulated commutator repeats px where the evaluation "
             "produces py; all other channels agree";
    rep.entries.push_back(d);
  }

  { // 2: prefactor of the scalar coefficient alpha
    const double T4 = 2.0 * M_PI / (4.0 * cs_q.derived.omega);
    const auto traj = integrate_coeffs(cs_q.at(0.0), 0.0, T4, 400, q);
    const cplx alpha_num = traj.values.back()[4] - traj.values.front()[4];
    const double pref_printed = (1.0 + cs_q.derived.zeta) * q.m * q.m
                                * q.hbar * q.hbar / (q.eta * q.eta);
    const cplx alpha_printed =
        -pref_printed * cs_q.b1
        * (std::exp(I * cs_q.derived.omega * T4) - 1.0);
    Discrepancy d;
    d.id = "alpha-prefactor";
    d.quantity = "scalar coefficient alpha(T/4) - alpha(0) at m=2, g=3";
    d.formula_value = fmt(alpha_printed) + " (prefactor m^2 hbar^2/eta^2)";
    d.oracle_value = fmt(alpha_num) + " (prefactor g m^3 hbar^2/eta^2)";
    d.rel_diff = std::abs(alpha_printed - alpha_num) / std::abs(alpha_num);
    d.verdict = "mismatch";
    d.note = "the quoted prefactor lacks a factor g m; invisible at "
             "g = m = 1";
    rep.entries.push_back(d);
  }

  { // 3: sign convention of the coefficient evolution system
    const double t = 1.0;
    const double h = 1e-6;
    const auto vdot_fd = (cs_p.at(t + h) - cs_p.at(t - h)) / (2.0 * h);
    const auto rhs = coeff_rhs(cs_p.at(t), p);
    double dev_plus = 0.0, dev_minus = 0.0, scale = 0.0;
    for (int c = 0; c < 4; ++c) {
      dev_plus = std::max(dev_plus, std::abs(vdot_fd[c] - rhs[c]));
      dev_minus = std::max(dev_minus, std::abs(vdot_fd[c] + rhs[c]));
      scale = std::max(scale, std::abs(rhs[c]));
    }
    Discrepancy d;
    d.id = "coefficient-system-sign";
    d.quantity = "sign of the first four rows of the coefficient system";
    d.formula_value = "stated with outer sign flipped and set equal to zero "
                      "(deviation if obeyed: " + fmt(dev_minus / scale) + ")";
    d.oracle_value = "derivative equals the unflipped right-hand side "
                     "(deviation: " + fmt(dev_plus / scale) + ")";
    d.rel_diff = dev_minus / scale;
    d.verdict = "structural";
    d.note = "the displayed homogeneous system is consistent only after "
             "negating its first four rows; the closed forms satisfy the "
             "corrected system";
    rep.entries.push_back(d);
  }

  { // 4: closed-form x-momentum dispersion is complex
    const double t = 2.0;
    const FormulaExpectations fe = formula_expectations(p, t);
    const GridSpec g = packet_grid(256, cs_p, t, 12.0);
    const PacketBuild pb =
        build_packet(g, cs_p, t, PacketMode::lambda_quadrature, 96, false);
    const GridMoments m = grid_moments(pb.psi, p.hbar);
    const double var_grid = m.dpx * m.dpx;
    Discrepancy d;
    d.id = "x-momentum-dispersion-complex";
    d.quantity = "variance of px of the packet at t=2";
    d.formula_value = fmt(fe.var_px) + " (2 hbar^2 a, complex)";
    d.oracle_value = fmt(var_grid) + " (grid, real)";
    d.rel_diff = std::abs(fe.var_px - var_grid) / var_grid;
    d.verdict = "mismatch";
    d.note = "a variance must be real and positive; the closed form keeps "
             "the complex constant a and also disagrees in magnitude";
    rep.entries.push_back(d);
  }

  { // 5: the two printed values of the product minimum disagree
    PhysicalParams r = p;
    const DerivedConstants dc = derive_constants(p);
    r.tau = M_PI / (3.0 * dc.omega); // omega tau = pi/3 unmasks the conflict
    const double om = dc.omega;
    const double at_min = 2.0 / std::sin(om * r.tau);
    const double printed_min = at_min / std::pow(std::sin(2.0 * om * r.tau), 2);
    Discrepancy d;
    d.id = "f-minimum-value-conflict";
    d.quantity = "minimum of the uncertainty product factor f at "
                 "omega tau = pi/3";
    d.formula_value = fmt(printed_min) + " (stated minimum "
                      "2 csc(omega tau) csc^2(2 omega tau))";
    d.oracle_value = fmt(at_min) + " (f evaluated at its stated minimizers "
                     "t = n pi/(2 omega) - tau)";
    d.rel_diff = std::abs(printed_min - at_min) / at_min;
    d.verdict = "mismatch";
    d.note = "the two statements coincide only when csc^2(2 omega tau) = 1, "
             "e.g. omega tau = pi/4";
    rep.entries.push_back(d);
  }

  { // 6: determinant of the deformed-variable map
    const LinearPhaseMap map = bopp_map(p);
    const double zeta = derive_constants(p).zeta;
    Discrepancy d;
    d.id = "map-determinant";
    d.quantity = "determinant of the linear map to deformed variables";
    d.formula_value = fmt(std::pow(1.0 + zeta, 2)) + " ((1+zeta)^2 as stated)";
    d.oracle_value = fmt(map.det()) + " ((1-zeta)^2 from direct evaluation)";
    d.rel_diff = std::abs(std::pow(1.0 + zeta, 2) - map.det()) / map.det();
    d.verdict = "mismatch";
    d.note = "block structure gives det = (1 - theta eta/(4 hbar^2))^2";
    rep.entries.push_back(d);
  }

  { // 7: secular rate of the accompanying phase
    const double T = 2.0 * M_PI / cs_q.derived.omega;
    const PhaseTrace tr = nu_phase(0.0, cs_q, 0.0, T, 4096);
    const double oracle_rate = tr.nu.back().real() / T;
    Discrepancy d;
    d.id = "phase-secular-rate";
    d.quantity = "secular rate of the phase at lambda=0, m=2, g=3";
    d.formula_value = fmt(cs_q.derived.nu_rate);
    d.oracle_value = fmt(oracle_rate);
    d.rel_diff = std::abs(cs_q.derived.nu_rate - oracle_rate)
                 / std::abs(oracle_rate);
    d.verdict = "mismatch";
    d.note = "the rates agree at m = g = hbar = 1 but separate away from "
             "unit parameters; the stated constant is also dimensionally "
             "inhomogeneous";
    rep.entries.push_back(d);
  }

  { // 8: lambda-linear term of the phase
    const double t = 2.0;
    const cplx printed = I / (2.0 * cs_p.b1)
                         * (std::exp(-I * cs_p.derived.omega * t) - 1.0);
    const cplx oracle = nu_lambda_part(cs_p, t);
    Discrepancy d;
    d.id = "phase-lambda-term";
    d.quantity = "coefficient of lambda in the phase increment over [0, 2]";
    d.formula_value = fmt(printed);
    d.oracle_value = fmt(oracle);
    d.rel_diff = std::abs(printed - oracle) / std::abs(oracle);
    d.verdict = "mismatch";
    d.note = "the ratio is m g theta/hbar^2 = "
             + fmt(p.m * p.g * p.theta / (p.hbar * p.hbar));
    rep.entries.push_back(d);
  }

  { // 9: the explicit packet versus the quadrature packet
    const double t = 2.0;
    const GridSpec g = packet_grid(256, cs_p, t, 12.0);
    const PacketBuild quad =
        build_packet(g, cs_p, t, PacketMode::lambda_quadrature, 96, false);
    const PacketBuild closed =
        build_packet(g, cs_p, t, PacketMode::closed_form, 96, false);
    const double F = fidelity(quad.psi, closed.psi);
    Discrepancy d;
    d.id = "packet-closed-form-overlap";
    d.quantity = "overlap of the explicit packet with the eigenvalue "
                 "quadrature at t=2";
    d.formula_value = "1 expected";
    d.oracle_value = fmt(F);
    d.rel_diff = std::abs(1.0 - F);
    d.verdict = F > 1.0 - 1e-6 ? "match" : "mismatch";
    d.note = "the explicit form inherits the missing g m factor in the "
             "linear coefficient and the lambda-term of the phase";
    rep.entries.push_back(d);
  }

  { // 10: the phase-rotated eigenstate does not solve the evolution equation
    const double defect_ansatz = ansatz_defect(cs_p, 0.0, 1.0);
    GaussianEvol ge = gaussian_from_eigenstate(0.0, cs_p, 0.0);
    ge = evolve_gaussian(ge, 1.0, 2000, p);
    const GridSpec g = eigenstate_grid(256, 0.0, cs_p, 1.0, 12.0);
    const double defect_comp = tdse_residual(ge, g, p);
    Discrepancy d;
    d.id = "stationary-eigenstate-ansatz";
    d.quantity = "relative defect of i hbar d/dt - H on the phase-rotated "
                 "eigenstate at t=1";
    d.formula_value = "0 claimed (defect measured: " + fmt(defect_ansatz)
                      + ")";
    d.oracle_value = fmt(defect_comp)
                     + " (drift-corrected Gaussian comparator)";
    d.rel_diff = defect_ansatz;
    d.verdict = "mismatch";
    d.note = "the leftover term is proportional to m g (1 - zeta)(x + i y); "
             "the exact evolution adds a uniform drift of the center at "
             "speed m g (1 - zeta) hbar / eta";
    rep.entries.push_back(d);
  }

  { // 11: two auxiliary constants frozen at the time offset
    const AuxVals v0 = aux_values(p, 0.0);
    const AuxVals v1 = aux_values(p, 1.0);
    const double id0 = 4.0 * v0.a0 * v0.b0 - v0.h0 * v0.h0;
    const double id1 = 4.0 * v1.a0 * v1.b0 - v1.h0 * v1.h0;
    Discrepancy d;
    d.id = "aux-frozen-time";
    d.quantity = "4 a0 b0 - h0^2 with a, b frozen at the offset while h "
                 "rotates";
    d.formula_value = "0 for all t implied (value at t=0: " + fmt(id0) + ")";
    d.oracle_value = "at t=1: " + fmt(id1);
    d.rel_diff = std::abs(id1) / (4.0 * v1.a0 * v1.b0);
    d.verdict = "structural";
    d.note = "beta0 crosses zero when the rotating h catches the frozen "
             "a, b, so the closed-form moments degenerate at "
             "t = n pi/(2 omega) under the default offset";
    rep.entries.push_back(d);
  }

  { // 12: closed-form mean position versus the packet
    const double t = 2.0;
    const FormulaExpectations fe = formula_expectations(p, t);
    const GridSpec g = packet_grid(256, cs_p, t, 12.0);
    const PacketBuild pb =
        build_packet(g, cs_p, t, PacketMode::lambda_quadrature, 96, false);
    const GridMoments m = grid_moments(pb.psi, p.hbar);
    Discrepancy d;
    d.id = "mean-x-formula";
    d.quantity = "<x> of the packet at t=2";
    d.formula_value = fmt(fe.x);
    d.oracle_value = fmt(m.x);
    d.rel_diff = std::abs(fe.x - m.x) / std::abs(m.x);
    d.verdict = std::abs(fe.x - m.x) / std::abs(m.x) < 1e-6 ? "match"
                                                            : "mismatch";
    d.note = "the closed-form Gaussian reduction drops a cross term of the "
             "quadratic form";
    rep.entries.push_back(d);
  }

  { // 13: the width bound must be strict
    const CoeffSet cs0 = cs_p;
    const double t = 0.7;
    const PacketExponent pe = packet_exponent(cs0, t, p.hbar);
    double ln_prev = 0.0, growth = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double half = 10.0 * (1 << k);
      GridSpec g;
      g.n = 256 << k;
      g.x_min = pe.center_x - half;
      g.x_max = pe.center_x + half;
      g.y_min = pe.center_y - half;
      g.y_max = pe.center_y + half;
      const double ln = packet_log_norm2(g, cs0, t, 0.5 * p.hbar, 96);
      if (k > 0) growth = ln - ln_prev;
      ln_prev = ln;
    }
    Discrepancy d;
    d.id = "normalizability-bound-strict";
    d.quantity = "squared-norm growth per domain doubling at the boundary "
                 "width kappa = hbar/2";
    d.formula_value = "0 (bound stated as attainable)";
    d.oracle_value = "+" + fmt(growth) + " in log norm^2";
    d.rel_diff = -1.0;
    d.verdict = "structural";
    d.note = "at kappa = hbar/2 the density is constant along a null "
             "direction with a nonvanishing linear term, so the norm "
             "diverges; the admissible range is kappa > hbar/2";
    rep.entries.push_back(d);
  }

  { // 14: where the product factor diverges
    const double f_at_0 = f_closed_form(p, 1e-9);
    Discrepancy d;
    d.id = "f-divergence-at-start";
    d.quantity = "f at t -> 0 under any offset tau";
    d.formula_value = "finite implied between minima";
    d.oracle_value = "|f| = " + fmt(std::abs(f_at_0)) + " at t = 1e-9";
    d.rel_diff = -1.0;
    d.verdict = "structural";
    d.note = "sin^2 2 omega(t+tau) equals sin^2 2 omega tau at t = 0, so "
             "the denominator vanishes at the initial time for every tau; "
             "f is also negative on the intervals where the sine exceeds "
             "its initial value";
    rep.entries.push_back(d);
  }

  { // 15: x and y are claimed uncorrelated
    const double t = 2.0;
    const GridSpec g = packet_grid(256, cs_p, t, 12.0);
    const PacketBuild pb =
        build_packet(g, cs_p, t, PacketMode::lambda_quadrature, 96, false);
    const GridMoments m = grid_moments(pb.psi, p.hbar);
    const double cov = m.xy - m.x * m.y;
    Discrepancy d;
    d.id = "xy-uncorrelated-claim";
    d.quantity = "covariance of x and y of the packet at t=2";
    d.formula_value = "0 (<xy> = <x><y> claimed)";
    d.oracle_value = fmt(cov) + " (grid; " + fmt(cov / (m.dx * m.dy))
                     + " of dx dy)";
    d.rel_diff = std::abs(cov) / (m.dx * m.dy);
    d.verdict = "mismatch";
    d.note = "the squeezing axes rotate, so the position covariance "
             "vanishes only at isolated times";
    rep.entries.push_back(d);
  }

  return rep;
}

std::string DiscrepancyReport::to_json() const {
  nlohmann::ordered_json root;
  root["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["quantity"] = e.quantity;
    j["formula_value"] = e.formula_value;
    j["oracle_value"] = e.oracle_value;
    j["rel_diff"] = e.rel_diff;
    j["verdict"] = e.verdict;
    j["note"] = e.note;
    root["entries"].push_back(j);
  }
  root["count"] = entries.size();
  return root.dump(2) + "\n";
}

} // namespace ncgw
