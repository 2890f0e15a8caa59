#pragma once

#include <string>
#include <vector>

#include "ncgw/coeffs.hpp"
#include "ncgw/params.hpp"

namespace ncgw {

// Two-mode position/momentum operators on a truncated oscillator basis of
// n_cut levels per mode (total dimension n_cut^2). Basis index is
// i_x * n_cut + i_y. Truncation artifacts live in the outer levels; checks
// compare matrix elements on the interior set {i_x < n_cut/2, i_y < n_cut/2}.
struct OperatorSet {
  int n_cut;
  int interior; // n_cut / 2
  double hbar;
  double length_scale;
  Eigen::MatrixXcd x, y, px, py;
  std::vector<int> interior_idx; // flattened indices of the interior set
};

OperatorSet build_canonical_ops(int n_cut, double hbar, double length_scale);

// Gather the interior sub-block of a full matrix.
Eigen::MatrixXcd interior_block(const Eigen::MatrixXcd& full,
                                const OperatorSet& ops);

// Deformed Hamiltonian after the phase-space map: kinetic term, angular
// coupling, linear potential with momentum shift, induced harmonic confinement.
Eigen::MatrixXcd compose_hamiltonian(const OperatorSet& ops,
                                     const PhysicalParams& p);

struct AlgebraChannel {
  std::string name;          // "x", "y", "px", "py", "1"
  cplx formula;              // coefficient in the closed-form table under test
  cplx oracle;               // coefficient rederived independently
  cplx measured;             // least-squares fit from the matrix commutator
};

struct AlgebraRelation {
  std::string relation;            // e.g. "[H,px]"
  std::vector<AlgebraChannel> channels;
  double fit_residual;             // relative Frobenius residual of the fit
  bool closes;                     // commutator spanned by {x,y,px,py,1}
  bool matches_oracle;
  bool matches_formula;
};

struct AlgebraReport {
  std::vector<AlgebraRelation> relations;
  double tol;
  bool all_close;          // every relation closes and matches the oracle
  int formula_mismatches;  // channels where the tabulated coefficient fails
};

AlgebraReport verify_quasi_algebra(const OperatorSet& ops,
                                   const PhysicalParams& p, double tol);

// Least-squares decomposition of an interior block over interior blocks of
// {x, y, px, py, Id}; returns coefficients and the relative residual.
struct SpanFit {
  Eigen::Vector<cplx, 5> coeff;
  double residual;
};
SpanFit fit_in_span(const Eigen::MatrixXcd& target_interior,
                    const OperatorSet& ops);

Eigen::MatrixXcd build_invariant(const OperatorSet& ops, const CoeffSet& cs,
                                 double t);

// Precomputes [u, H] blocks once so the defect of d/dt I + [I, H]/(i hbar)
// can be sampled at many times in O(dim^2) each.
class InvarianceChecker {
 public:
  InvarianceChecker(const OperatorSet& ops, const PhysicalParams& p);
  double residual(const CoeffSet& cs, double t) const;

 private:
  double hbar_;
  PhysicalParams params_;
  Eigen::MatrixXcd gen_int_[4];  // x, y, px, py interior blocks
  Eigen::MatrixXcd comm_int_[4]; // [x,H], [y,H], [px,H], [py,H] interior
  int dim_;
};

struct LadderReport {
  double cross_dev;        // largest |[J_i, J_j^+]| entry for i != j
  double diag_dev[2];      // relative deviation of [J_i, J_i^+] from target
  double target;           // m^2 hbar^2 |B1|^2 / eta
  double recompose_dev;    // | J1 + J2 + alpha - I |_F on the interior
  bool pass;
};

LadderReport ladder_check(const OperatorSet& ops, const CoeffSet& cs, double t,
                          double tol);

} // namespace ncgw
