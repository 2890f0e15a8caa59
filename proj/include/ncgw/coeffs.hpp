#pragma once

#include <vector>

#include "ncgw/params.hpp"

namespace ncgw {

// Which sign of the rotating-mode pairing to use when collapsing the general
// two-constant solution to a single mode. "printed" ties the constants so the
// coefficients rotate with e^{+i omega t}; "alternate" uses the opposite tie,
// which flips the rotation sense and renders the associated eigenfunctions
// non-normalizable.
enum class ModeBranch { printed, alternate };

// Closed-form coefficients of the linear invariant
//   I(t) = A px + B py + C x + D y + alpha.
struct CoeffSet {
  PhysicalParams params;
  DerivedConstants derived;
  ModeBranch branch = ModeBranch::printed;
  cplx b1;          // mode constant, sqrt(eta)/(m hbar) * e^{i omega tau}
  double rot = 1.0; // +1 printed, -1 alternate

  cplx B(double t) const;
  cplx A(double t) const { return -I * rot * B(t); }
  cplx C(double t) const;
  cplx D(double t) const;
  cplx alpha(double t) const;
  Eigen::Vector<cplx, 5> at(double t) const; // (A, B, C, D, alpha)
};

CoeffSet closed_form_coeffs(const PhysicalParams& p,
                            ModeBranch branch = ModeBranch::printed);

// Right-hand side of the first-order system the invariance condition imposes
// on v = (A, B, C, D, alpha).
Eigen::Vector<cplx, 5> coeff_rhs(const Eigen::Vector<cplx, 5>& v,
                                 const PhysicalParams& p);

struct CoeffTrajectory {
  std::vector<double> times;
  std::vector<Eigen::Vector<cplx, 5>> values;
};

// Fixed-step RK4. Requires at least 100 steps per mode period 2 pi m hbar/eta.
CoeffTrajectory integrate_coeffs(const Eigen::Vector<cplx, 5>& v0, double t0,
                                 double t1, int steps,
                                 const PhysicalParams& p);

struct CoeffCheck {
  double max_rel_dev[5]; // per component, over the trajectory
  double worst;
  bool pass;
};

CoeffCheck cross_check(const CoeffSet& cs, const CoeffTrajectory& traj,
                       double tol);

} // namespace ncgw
