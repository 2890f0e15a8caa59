#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ncgw {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a numerical cross-check fails, as opposed to bad user input.
struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PhysicalParams {
  double m = 1.0;      // mass
  double g = 1.0;      // field strength
  double hbar = 1.0;
  double theta = 0.05; // position-position deformation
  double eta = 0.1;    // momentum-momentum deformation
  double tau = 0.0;    // time offset entering the mode phase
  double kappa = 1.0;  // packet width in the eigenvalue integral

  void validate() const;
};

struct DerivedConstants {
  double zeta;       // theta*eta / (4 hbar^2)
  double hbar_eff;   // hbar * (1 + zeta)
  double omega;      // eta / (m hbar)
  double b1_mod;     // sqrt(eta) / (m hbar)
  double nu_rate;    // m^2 g theta/(2 eta) + m^2 g theta^2/(8 hbar^2) - eta/(2 m hbar)
  bool strong_deformation; // zeta >= 0.1, perturbative regime doubtful
};

DerivedConstants derive_constants(const PhysicalParams& p);

// Linear map from canonical (x, y, px, py) to the deformed quadruple.
struct LinearPhaseMap {
  Eigen::Matrix4d entries; // row i = deformed operator i in the canonical basis
  double det() const { return entries.determinant(); }
};

LinearPhaseMap bopp_map(double theta, double eta, double hbar);
inline LinearPhaseMap bopp_map(const PhysicalParams& p) {
  return bopp_map(p.theta, p.eta, p.hbar);
}

// Antisymmetric table T(i,j) = [u_i, u_j] for a quadruple u that is a linear
// combination of canonical operators; canonical table assumed.
Eigen::Matrix4cd induced_commutators(const LinearPhaseMap& map, double hbar);

// The deformed algebra the map is supposed to realize:
// [x', y'] = i theta, [px', py'] = i eta, [x_i', p_j'] = i hbar (1 + zeta) delta_ij.
Eigen::Matrix4cd deformed_commutator_table(const PhysicalParams& p);

// Largest absolute entry of (a - b) over max(1, largest absolute entry of b).
double table_deviation(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b);

} // namespace ncgw
