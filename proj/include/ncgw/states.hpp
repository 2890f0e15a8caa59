#pragma once

#include "ncgw/coeffs.hpp"
#include "ncgw/grid.hpp"

namespace ncgw {

// exp(cxx x^2 + cyy y^2 + cxy xy + bx x + by y + c0)
struct GaussianExponent {
  cplx cxx{0, 0}, cyy{0, 0}, cxy{0, 0}, bx{0, 0}, by{0, 0}, c0{0, 0};
};

void fill_gaussian(WaveFunction2D& w, const GaussianExponent& e);

// Exponent of the invariant eigenfunction with eigenvalue lambda at time t.
// Throws OracleError when the quadratic part is not negative definite
// (alternate mode branch), naming the offending coefficient ratios.
GaussianExponent eigenstate_exponent(double lambda, const CoeffSet& cs,
                                     double t);

// Normalized eigenfunction on the grid, phase fixed to zero at the grid
// center point (n/2, n/2).
WaveFunction2D phi_lambda(const GridSpec& g, double lambda, const CoeffSet& cs,
                          double t);

// Density center and per-axis width of the eigenfunction.
struct EigenstateShape {
  double cx, cy, sigma;
};
EigenstateShape eigenstate_shape(double lambda, const CoeffSet& cs, double t);

// Grid sized to hold the lambda eigenstate with the requested padding.
GridSpec eigenstate_grid(int n, double lambda, const CoeffSet& cs, double t,
                         double pad_sigmas);

// Apply I(t) = A px + B py + C x + D y + alpha spectrally. Requires boundary
// amplitude below 1e-12 of the peak.
WaveFunction2D apply_invariant(const WaveFunction2D& w, const CoeffSet& cs,
                               double t);

// |I psi - lambda psi| / |psi|
double eigen_residual(const WaveFunction2D& w, double lambda,
                      const CoeffSet& cs, double t);

// Complex phase nu(t) accompanying the eigenfunction so that e^{i nu} Phi
// satisfies the evolution equation claimed for it; nu(t0) = 0. Integrated by
// the trapezoid rule from the rate expression.
struct PhaseTrace {
  std::vector<double> times;
  std::vector<cplx> nu;
};

cplx nu_rate_oracle(double lambda, const CoeffSet& cs, double t);
PhaseTrace nu_phase(double lambda, const CoeffSet& cs, double t0, double t1,
                    int samples);

// The closed-form phase under test: rate nu_rate plus an oscillating term
// linear in lambda. Returned as nu(t) - nu(0).
cplx nu_closed_form(double lambda, const CoeffSet& cs, double t);

// Coefficient of lambda in the oracle phase, integrated from 0 to t.
cplx nu_lambda_part(const CoeffSet& cs, double t);

// ----- superposed packet over the eigenvalue with Gaussian weight
//       exp(-kappa lambda^2 / (2 hbar)) -----

enum class PacketMode { closed_form, lambda_quadrature };

// Analytic reduction of the lambda integral: exponent
// -A1 |z|^2 + Q zbar^2 + P zbar + const with z = x + i y.
struct PacketExponent {
  double A1;
  cplx Q, P;
  double rho;                  // |Q| / A1; squeezing ratio
  double center_x, center_y;   // stationary point of the density
  double sigma_major;          // widest density direction
  bool degenerate;             // rho >= 1: density form singular
};

PacketExponent packet_exponent(const CoeffSet& cs, double t, double kappa);

GridSpec packet_grid(int n, const CoeffSet& cs, double t, double pad_sigmas);

struct PacketBuild {
  WaveFunction2D psi;          // normalized
  double log_norm2;            // log of the squared norm before normalizing
  PacketExponent analytic;
  double node_doubling_dev;    // -1 when the check was skipped
};

// nodes is the Gauss-Hermite count for lambda_quadrature; check_nodes doubles
// it and errors above 1e-8 relative deviation.
PacketBuild build_packet(const GridSpec& g, const CoeffSet& cs, double t,
                         PacketMode mode, int nodes = 96,
                         bool check_nodes = false);

// Squared-norm logarithm of the unnormalized quadrature packet on an explicit
// grid and width; used for square-integrability probes below the validated
// kappa range.
double packet_log_norm2(const GridSpec& g, const CoeffSet& cs, double t,
                        double kappa, int nodes = 96);

// Gauss-Hermite nodes and weights for integrals against exp(-u^2).
void gauss_hermite(int n, std::vector<double>& nodes,
                   std::vector<double>& weights);

} // namespace ncgw
