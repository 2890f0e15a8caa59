#include <doctest.h>

#include <cmath>

#include "ncgw/gausssol.hpp"
#include "ncgw/observables.hpp"
#include "ncgw/states.hpp"

using namespace ncgw;

TEST_SUITE("gausssol") {

TEST_CASE("initial comparator reproduces the eigenfunction") {
  const CoeffSet cs = closed_form_coeffs(PhysicalParams{});
  const GaussianEvol s = gaussian_from_eigenstate(0.0, cs, 0.0);
  const GridSpec g = eigenstate_grid(256, 0.0, cs, 0.0, 12.0);
  const WaveFunction2D a = gaussian_wavefunction(g, s);
  const WaveFunction2D b = phi_lambda(g, 0.0, cs, 0.0);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fidelity(a, b) > 1.0 - 1e-12);
}

TEST_CASE("evolved comparator stays an exact solution") {
  const PhysicalParams p;
  const CoeffSet cs = closed_form_coeffs(p);
  GaussianEvol s = gaussian_from_eigenstate(0.0, cs, 0.0);
  s = evolve_gaussian(s, 1.0, 2000, p);

  const DriftLaw law = drift_law(0.0, cs);
  const double cx = s.bx.real() / (2.0 * s.A1);
  const double cy = s.by.real() / (2.0 * s.A1);
  CHECK(cx == doctest::Approx(law.x0).epsilon(1e-8));
  CHECK(cy == doctest::Approx(law.y0 + law.vy * 1.0).epsilon(1e-8));

  const GridSpec g = auto_grid(256, cx, cy, 3.17, 3.17, 12.0);
  CHECK(tdse_residual(s, g, p) < 1e-6);
  CHECK(gaussian_wavefunction(g, s).norm()
        == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("drift speed follows the deformation-corrected free fall") {
  const CoeffSet cs = closed_form_coeffs(PhysicalParams{});
  const DriftLaw law = drift_law(0.0, cs);
  // m g (1 - zeta) hbar / eta at the reference point
  CHECK(law.vy == doctest::Approx(9.9875).epsilon(1e-12));
  CHECK(law.x0 == doctest::Approx(-100.125).epsilon(1e-9));
  CHECK(std::abs(law.y0) < 1e-9);
}

TEST_CASE("width is a fixed point of the evolution") {
  const PhysicalParams p;
  const CoeffSet cs = closed_form_coeffs(p);
  GaussianEvol s = gaussian_from_eigenstate(0.0, cs, 0.0);
  const double a1_0 = s.A1;
  s = evolve_gaussian(s, 3.0, 4000, p);
  CHECK(std::abs(s.A1 - a1_0) < 1e-10);
  CHECK(a1_0 == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("phase-rotated eigenstate drifts away from the comparator") {
  const PhysicalParams p;
  const CoeffSet cs = closed_form_coeffs(p);
  GaussianEvol s = gaussian_from_eigenstate(0.0, cs, 0.0);
  s = evolve_gaussian(s, 1.0, 2000, p);
  const double cy = s.by.real() / (2.0 * s.A1);
  const GridSpec g = auto_grid(256, s.bx.real() / (2.0 * s.A1), cy / 2.0,
                               3.17, 3.17 + cy, 10.0);
  const WaveFunction2D evolved = gaussian_wavefunction(g, s);
  const WaveFunction2D frozen = phi_lambda(g, 0.0, cs, 1.0);
  CHECK(fidelity(evolved, frozen) < 0.9);
}

} // TEST_SUITE
