#include <doctest.h>

#include <cmath>
#include <random>

#include "ncgw/params.hpp"

using namespace ncgw;

TEST_SUITE("params") {

TEST_CASE("defaults validate") {
  PhysicalParams p;
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("invalid parameters are rejected") {
  PhysicalParams p;
  p.m = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.eta = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.hbar = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.kappa = 0.49;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.tau = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.theta = -0.1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("derived constants at the reference point") {
  const DerivedConstants dc = derive_constants(PhysicalParams{});
  CHECK(dc.zeta == doctest::Approx(0.00125).epsilon(1e-15));
  CHECK(dc.hbar_eff == doctest::Approx(1.00125).epsilon(1e-15));
  CHECK(dc.omega == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(dc.b1_mod == doctest::Approx(0.31622776601683794).epsilon(1e-15));
  CHECK(dc.nu_rate == doctest::Approx(0.2003125).epsilon(1e-14));
  CHECK_FALSE(dc.strong_deformation);

  PhysicalParams strong;
  strong.theta = 1.0;
  strong.eta = 0.5;
  CHECK(derive_constants(strong).strong_deformation);
}

TEST_CASE("map entries and determinant") {
  const PhysicalParams p;
  const LinearPhaseMap map = bopp_map(p);
  // x' = x - (theta/2 hbar) py
  CHECK(map.entries(0, 0) == doctest::Approx(1.0));
  CHECK(map.entries(0, 3) == doctest::Approx(-0.025).epsilon(1e-15));
  // px' = (eta/2 hbar) y + px
  CHECK(map.entries(2, 1) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(map.entries(2, 2) == doctest::Approx(1.0));
  CHECK(map.det() == doctest::Approx(0.9975015625).epsilon(1e-14));
}

TEST_CASE("determinant follows (1 - zeta)^2") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const double theta = 0.4 * u(rng);
    const double eta = 0.02 + 0.6 * u(rng);
    const double hbar = 0.5 + 1.5 * u(rng);
    const double zeta = theta * eta / (4.0 * hbar * hbar);
    const LinearPhaseMap map = bopp_map(theta, eta, hbar);
    CHECK(map.det()
          == doctest::Approx((1.0 - zeta) * (1.0 - zeta)).epsilon(1e-13));
  }
}

TEST_CASE("induced commutators realize the deformed table") {
  const PhysicalParams p;
  const auto induced = induced_commutators(bopp_map(p), p.hbar);
  const auto target = deformed_commutator_table(p);
  CHECK(table_deviation(induced, target) < 1e-15);
  CHECK(std::abs(induced(0, 1).real()) < 1e-16);
  CHECK(std::abs(induced(0, 1).imag() - p.theta) < 1e-16);
  CHECK(std::abs(induced(2, 3).imag() - p.eta) < 1e-16);
  const double scale = p.hbar * (1.0 + 0.00125);
  CHECK(std::abs(induced(0, 2).imag() - scale) < 1e-15);
  CHECK(std::abs(induced(1, 3).imag() - scale) < 1e-15);
  CHECK(std::abs(induced(0, 3)) < 1e-16); // [x', py'] = 0
}

TEST_CASE("table reproduction over random parameters") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    PhysicalParams p;
    p.m = 0.3 + 2.7 * u(rng);
    p.g = 5.0 * u(rng);
    p.hbar = 0.5 + 1.5 * u(rng);
    p.theta = 0.2 * u(rng);
    p.eta = 0.02 + 0.48 * u(rng);
    p.kappa = p.hbar;
    const auto induced = induced_commutators(bopp_map(p), p.hbar);
    const auto target = deformed_commutator_table(p);
    CHECK(table_deviation(induced, target) < 1e-12);
  }
}

} // TEST_SUITE
