#include "ncgw/params.hpp"

#include <cmath>
#include <sstream>

namespace ncgw {

void PhysicalParams::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(m > 0.0)) fail("m must be positive");
  if (!(hbar > 0.0)) fail("hbar must be positive");
  if (!(g >= 0.0)) fail("g must be non-negative");
  if (!(theta >= 0.0)) fail("theta must be non-negative");
  if (!(eta > 0.0)) fail("eta must be positive: the mode frequency eta/(m hbar) degenerates at eta = 0");
  if (!(kappa >= 0.5 * hbar)) {
    std::ostringstream os;
    os << "kappa = " << kappa << " below hbar/2 = " << 0.5 * hbar
       << ": superposed packet is not square-integrable";
    fail(os.str());
  }
  if (!std::isfinite(tau)) fail("tau must be finite");
}

DerivedConstants derive_constants(const PhysicalParams& p) {
  DerivedConstants d{};
  d.zeta = p.theta * p.eta / (4.0 * p.hbar * p.hbar);
  d.hbar_eff = p.hbar * (1.0 + d.zeta);
  d.omega = p.eta / (p.m * p.hbar);
  d.b1_mod = std::sqrt(p.eta) / (p.m * p.hbar);
  d.nu_rate = p.m * p.m * p.g * p.theta / (2.0 * p.eta)
            + p.m * p.m * p.g * p.theta * p.theta / (8.0 * p.hbar * p.hbar)
            - p.eta / (2.0 * p.m * p.hbar);
  d.strong_deformation = d.zeta >= 0.1;
  return d;
}

LinearPhaseMap bopp_map(double theta, double eta, double hbar) {
  LinearPhaseMap m;
  const double t2 = theta / (2.0 * hbar);
  const double e2 = eta / (2.0 * hbar);
  // rows: x', y', px', py'; columns: x, y, px, py
  m.entries << 1.0, 0.0, 0.0, -t2,
               0.0, 1.0, t2, 0.0,
               0.0, e2, 1.0, 0.0,
               -e2, 0.0, 0.0, 1.0;
  return m;
}

Eigen::Matrix4cd induced_commutators(const LinearPhaseMap& map, double hbar) {
  // canonical table in the same ordering
  Eigen::Matrix4cd canon = Eigen::Matrix4cd::Zero();
  canon(0, 2) = I * hbar;
  canon(1, 3) = I * hbar;
  canon(2, 0) = -I * hbar;
  canon(3, 1) = -I * hbar;
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cplx acc = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          acc += map.entries(i, a) * map.entries(j, b) * canon(a, b);
      out(i, j) = acc;
    }
  return out;
}

Eigen::Matrix4cd deformed_commutator_table(const PhysicalParams& p) {
  const double zeta = p.theta * p.eta / (4.0 * p.hbar * p.hbar);
  const cplx hb = I * p.hbar * (1.0 + zeta);
  Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
  t(0, 1) = I * p.theta;
  t(1, 0) = -I * p.theta;
  t(2, 3) = I * p.eta;
  t(3, 2) = -I * p.eta;
  t(0, 2) = hb;
  t(2, 0) = -hb;
  t(1, 3) = hb;
  t(3, 1) = -hb;
  return t;
}

double table_deviation(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

} // namespace ncgw
