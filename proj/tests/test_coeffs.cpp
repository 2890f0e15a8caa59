#include <doctest.h>

#include <cmath>

#include "ncgw/coeffs.hpp"

using namespace ncgw;

namespace {
const double kPeriod = 62.83185307179586; // 2 pi / omega at the reference point
}

TEST_SUITE("coeffs") {

TEST_CASE("closed forms at t = 0, zero offset") {
  const CoeffSet cs = closed_form_coeffs(PhysicalParams{});
  const auto v = cs.at(0.0);
  // b1 = sqrt(eta)/(m hbar), B(0) = b1/omega
  CHECK(std::abs(v[1] - cplx(3.1622776601683795, 0.0)) < 1e-12);
  CHECK(std::abs(v[0] - cplx(0.0, -3.1622776601683795)) < 1e-12);
  CHECK(std::abs(v[2] - cplx(-0.15811388300841897, 0.0)) < 1e-12);
  CHECK(std::abs(v[3] - cplx(0.0, 0.15811388300841897)) < 1e-12);
  CHECK(std::abs(v[4] - cplx(-31.662305072435895, 0.0)) < 1e-10);
}

TEST_CASE("mode normalization carries the offset phase") {
  PhysicalParams p;
  p.tau = 3.0;
  const CoeffSet cs = closed_form_coeffs(p);
  CHECK(std::abs(cs.b1 - 0.31622776601683794 * std::exp(I * 0.1 * 3.0))
        < 1e-14);
}

TEST_CASE("closed forms satisfy the evolution system") {
  for (const ModeBranch branch :
       {ModeBranch::printed, ModeBranch::alternate}) {
    const CoeffSet cs = closed_form_coeffs(PhysicalParams{}, branch);
    for (const double t : {0.0, 1.7, 14.0, 40.0}) {
      const double h = 1e-6;
      const auto vdot = (cs.at(t + h) - cs.at(t - h)) / (2.0 * h);
      const auto rhs = coeff_rhs(cs.at(t), cs.params);
      for (int i = 0; i < 5; ++i)
        CHECK(std::abs(vdot[i] - rhs[i])
              < 1e-6 * std::max(1.0, std::abs(rhs[i])));
    }
  }
}

TEST_CASE("alpha to B ratio is constant") {
  PhysicalParams p;
  p.m = 2.0;
  p.g = 3.0;
  const CoeffSet cs = closed_form_coeffs(p);
  const double expected = -(1.0 + cs.derived.zeta) * p.g * p.m * p.m * p.hbar
                          / p.eta;
  for (const double t : {0.0, 5.0, 31.0}) {
    const auto v = cs.at(t);
    CHECK(std::abs(v[4] / v[1] - expected) < 1e-10 * std::abs(expected));
  }
}

TEST_CASE("coefficients are periodic") {
  const CoeffSet cs = closed_form_coeffs(PhysicalParams{});
  const auto v0 = cs.at(0.25);
  const auto v1 = cs.at(0.25 + kPeriod);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(v0[i] - v1[i]) < 1e-10 * std::max(1.0, std::abs(v0[i])));
}

TEST_CASE("integration matches closed forms over three periods") {
  const CoeffSet cs = closed_form_coeffs(PhysicalParams{});
  const auto traj =
      integrate_coeffs(cs.at(0.0), 0.0, 3.0 * kPeriod, 20000, cs.params);
  const CoeffCheck chk = cross_check(cs, traj, 1e-6);
  CHECK(chk.pass);
  CHECK(chk.worst < 1e-8);
}

TEST_CASE("too coarse a step is rejected") {
  const CoeffSet cs = closed_form_coeffs(PhysicalParams{});
  CHECK_THROWS_AS(
      integrate_coeffs(cs.at(0.0), 0.0, 3.0 * kPeriod, 150, cs.params),
      ConfigError);
}

TEST_CASE("branches differ by the rotation sense") {
  const CoeffSet a = closed_form_coeffs(PhysicalParams{},
                                        ModeBranch::printed);
  const CoeffSet b = closed_form_coeffs(PhysicalParams{},
                                        ModeBranch::alternate);
  // with a real normalization the two branches are complex conjugates
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(a.at(2.0)[i] - std::conj(b.at(2.0)[i])) < 1e-10);
}

} // TEST_SUITE
