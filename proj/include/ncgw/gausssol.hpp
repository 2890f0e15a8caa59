#pragma once

#include "ncgw/coeffs.hpp"
#include "ncgw/grid.hpp"
#include "ncgw/states.hpp"

namespace ncgw {

// Exact evolution of a coherent Gaussian exp(-A1 (x^2+y^2) + bx x + by y + c)
// under the deformed Hamiltonian: A1 = eta/(4 hbar^2) is a fixed point of the
// width flow, the linear coefficients close on themselves, and c carries the
// accumulated phase and normalization.
struct GaussianEvol {
  double A1;
  cplx bx, by, c;
  double time;
};

// Initial data matching e^{i nu(t0)=0} Phi_lambda at time t0; per-lambda
// normalized with zero phase constant.
GaussianEvol gaussian_from_eigenstate(double lambda, const CoeffSet& cs,
                                      double t0);

// RHS of the closed ODE system for (bx, by, c).
void gaussian_rhs(const GaussianEvol& s, const PhysicalParams& p, cplx& dbx,
                  cplx& dby, cplx& dc);

GaussianEvol evolve_gaussian(const GaussianEvol& s0, double t1, int steps,
                             const PhysicalParams& p);

WaveFunction2D gaussian_wavefunction(const GridSpec& g, const GaussianEvol& s);

// Center drift of the comparator: x stays put, y moves at
// m g (1 - zeta) hbar / eta, uniformly.
struct DriftLaw {
  double vy;
  double x0, y0;
};
DriftLaw drift_law(double lambda, const CoeffSet& cs);

// Relative defect |i hbar dpsi/dt - H psi| / |H psi| of the comparator
// evaluated spectrally on the grid; the time derivative comes from the ODE.
double tdse_residual(const GaussianEvol& s, const GridSpec& g,
                     const PhysicalParams& p);

// Apply the Hamiltonian spectrally to an arbitrary grid state.
WaveFunction2D apply_hamiltonian(const WaveFunction2D& w,
                                 const PhysicalParams& p);

} // namespace ncgw
