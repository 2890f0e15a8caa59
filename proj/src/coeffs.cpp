#include "ncgw/coeffs.hpp"

#include <algorithm>
#include <cmath>

namespace ncgw {

cplx CoeffSet::B(double t) const {
  return b1 / derived.omega * std::exp(I * rot * derived.omega * t);
}

cplx CoeffSet::C(double t) const {
  return -params.eta / (2.0 * params.hbar) * B(t);
}

cplx CoeffSet::D(double t) const {
  return params.eta / (2.0 * params.hbar) * A(t);
}

cplx CoeffSet::alpha(double t) const {
  const auto& p = params;
  const double pref = (1.0 + derived.zeta) * p.g * p.m * p.m * p.m * p.hbar
                      * p.hbar / (p.eta * p.eta);
  return -pref * b1 * std::exp(I * rot * derived.omega * t);
}

Eigen::Vector<cplx, 5> CoeffSet::at(double t) const {
  Eigen::Vector<cplx, 5> v;
  v << A(t), B(t), C(t), D(t), alpha(t);
  return v;
}

CoeffSet closed_form_coeffs(const PhysicalParams& p, ModeBranch branch) {
  p.validate();
  CoeffSet cs;
  cs.params = p;
  cs.derived = derive_constants(p);
  cs.branch = branch;
  cs.rot = branch == ModeBranch::printed ? 1.0 : -1.0;
  cs.b1 = cs.derived.b1_mod * std::exp(I * cs.rot * cs.derived.omega * p.tau);
  return cs;
}

Eigen::Vector<cplx, 5> coeff_rhs(const Eigen::Vector<cplx, 5>& v,
                                 const PhysicalParams& p) {
  const cplx A = v[0], B = v[1], C = v[2], D = v[3];
  const double e2 = p.eta / (2.0 * p.m * p.hbar);
  const double e4 = p.eta * p.eta / (4.0 * p.m * p.hbar * p.hbar);
  Eigen::Vector<cplx, 5> dv;
  dv[0] = e2 * B - C / p.m;
  dv[1] = -e2 * A - D / p.m;
  dv[2] = e4 * A + e2 * D;
  dv[3] = e4 * B - e2 * C;
  dv[4] = p.m * p.g * A + p.m * p.g * p.theta / (2.0 * p.hbar) * D;
  return dv;
}

CoeffTrajectory integrate_coeffs(const Eigen::Vector<cplx, 5>& v0, double t0,
                                 double t1, int steps,
                                 const PhysicalParams& p) {
  p.validate();
  if (steps < 1) throw ConfigError("integrate_coeffs: steps must be positive");
  const double period = 2.0 * M_PI * p.m * p.hbar / p.eta;
  const double span = std::abs(t1 - t0);
  if (span > 0.0 && steps < 100.0 * span / period)
    throw ConfigError("integrate_coeffs: fewer than 100 steps per mode period");

  CoeffTrajectory traj;
  traj.times.reserve(steps + 1);
  traj.values.reserve(steps + 1);
  const double h = (t1 - t0) / steps;
  Eigen::Vector<cplx, 5> v = v0;
  traj.times.push_back(t0);
  traj.values.push_back(v);
  for (int i = 0; i < steps; ++i) {
    const Eigen::Vector<cplx, 5> k1 = coeff_rhs(v, p);
    const Eigen::Vector<cplx, 5> k2 = coeff_rhs(v + 0.5 * h * k1, p);
    const Eigen::Vector<cplx, 5> k3 = coeff_rhs(v + 0.5 * h * k2, p);
    const Eigen::Vector<cplx, 5> k4 = coeff_rhs(v + h * k3, p);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.times.push_back(t0 + (i + 1) * h);
    traj.values.push_back(v);
  }
  return traj;
}

CoeffCheck cross_check(const CoeffSet& cs, const CoeffTrajectory& traj,
                       double tol) {
  CoeffCheck chk{};
  double scale[5] = {0, 0, 0, 0, 0};
  for (size_t k = 0; k < traj.times.size(); ++k) {
    const auto ref = cs.at(traj.times[k]);
    for (int c = 0; c < 5; ++c)
      scale[c] = std::max(scale[c], std::abs(ref[c]));
  }
  for (size_t k = 0; k < traj.times.size(); ++k) {
    const auto ref = cs.at(traj.times[k]);
    for (int c = 0; c < 5; ++c) {
      const double dev = std::abs(traj.values[k][c] - ref[c])
                         / std::max(scale[c], 1e-300);
      chk.max_rel_dev[c] = std::max(chk.max_rel_dev[c], dev);
    }
  }
  chk.worst = *std::max_element(chk.max_rel_dev, chk.max_rel_dev + 5);
  chk.pass = chk.worst < tol;
  return chk;
}

} // namespace ncgw
