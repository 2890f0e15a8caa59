#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ncgw/coeffs.hpp"
#include "ncgw/grid.hpp"

namespace ncgw {

// Auxiliary constants entering the closed-form expectation values. The first
// two are frozen at the time offset tau while the rest carry t + tau; the
// subscript-0 quantities are real parts.
struct AuxVals {
  cplx a, b, c, d, h, k;
  double a0, b0, c0, d0, h0, k0;
  double beta0, beta1, gamma0, gamma1, delta0, delta1;
  bool degenerate;     // a0, b0, beta0 or beta1 vanished or went negative
  std::string reason;
};

AuxVals aux_values(const PhysicalParams& p, double t);

// Closed-form expectation values of the packet, evaluated with the
// normalization folded in symbolically so the e^{delta} factors cancel
// before exponentiation. Momentum entries come out complex.
struct FormulaExpectations {
  double x, y, x2, y2, xy;
  cplx px, py, px2, py2;
  double var_x;   // (1/4a0)(1 + h0^2/(4 a0 beta0))
  cplx var_px;    // 2 hbar^2 a
  bool degenerate;
};

FormulaExpectations formula_expectations(const PhysicalParams& p, double t);

// Grid moments of a normalized state; momentum moments are spectral.
struct GridMoments {
  double x, y, x2, y2, xy;
  double px, py, px2, py2;
  double dx, dy, dpx, dpy; // standard deviations
};

GridMoments grid_moments(const WaveFunction2D& w, double hbar = 1.0);

// (Delta x Delta px)^2 = (hbar^2/4)(1 - rho^2 cos^2 2 Omega)/(1-rho^2)^2
// with rho = hbar/(2 kappa) and Omega = omega (t + tau); the exact law for
// the quadrature packet, used as a cross-check on grid moments.
double law_product(const CoeffSet& cs, double t);
double law_sigma_x(const CoeffSet& cs, double t);

// f(t) = 2 csc(omega tau) / (1 - csc^2(2 omega tau) sin^2(2 omega (t+tau)))
double f_closed_form(const PhysicalParams& p, double t);

enum UncertaintyFlag {
  kFlagNone = 0,
  kFlagFormulaInvalid = 1, // f negative or divergent: no real product there
  kFlagDegenerate = 2,     // auxiliary constants degenerate
};

struct UncertaintySample {
  double t;
  double product_oracle;   // grid Delta x * Delta px of the packet
  double product_formula;  // (hbar/2) sqrt(f) where defined, else NaN
  double f_formula;
  int flag;
};

std::vector<UncertaintySample> scan_uncertainty(const CoeffSet& cs,
                                                const std::vector<double>& ts,
                                                int grid_n, double pad_sigmas,
                                                int nodes);

struct Minimum {
  double t;
  double value;
};

// Interior local minima of the scan, each refined by golden-section search
// on the continuous grid-evaluated product.
std::vector<Minimum> refine_minima(const CoeffSet& cs,
                                   const std::vector<UncertaintySample>& scan,
                                   int grid_n, double pad_sigmas, int nodes,
                                   double t_tol);

double golden_minimize(const std::function<double(double)>& f, double lo,
                       double hi, double tol, double* fmin = nullptr);

} // namespace ncgw
