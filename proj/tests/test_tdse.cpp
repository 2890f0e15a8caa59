#include <doctest.h>

#include <cmath>

#include "ncgw/states.hpp"
#include "ncgw/tdse.hpp"

using namespace ncgw;

namespace {

PhysicalParams fast_params() {
  PhysicalParams p;
  p.eta = 1.0; // omega = 1, one period = 2 pi
  return p;
}

} // namespace

TEST_SUITE("tdse") {

TEST_CASE("invariant expectation recovers the eigenvalue") {
  const PhysicalParams p = fast_params();
  const CoeffSet cs = closed_form_coeffs(p);
  for (const double lambda : {0.0, 3.0}) {
    const GridSpec g = eigenstate_grid(128, lambda, cs, 0.0, 12.0);
    const WaveFunction2D w = phi_lambda(g, lambda, cs, 0.0);
    const cplx iv = invariant_expectation(w, cs, 0.0);
    CHECK(std::abs(iv - lambda) < 1e-6);
  }
}

TEST_CASE("short propagation: conservation yes, shape invariance no") {
  const PhysicalParams p = fast_params();
  const CoeffSet cs = closed_form_coeffs(p);
  const double t_end = 2.0 * M_PI / 20.0;
  PropagatorConfig cfg;
  cfg.dt = 2.0 * M_PI / 2000.0;

  const GridSpec g = auto_grid(128, -1.0125, 0.16, 1.0, 1.2, 12.0);
  const EvolutionCheck chk = verify_lr_solution(0.0, t_end, cs, g, cfg);

  CHECK(chk.norm_drift < 1e-10);
  CHECK(chk.invariant_drift < 1e-8);
  CHECK(chk.energy_drift < 1e-8);
  CHECK(chk.fidelity_comparator > 1.0 - 1e-6);
  CHECK(chk.comparator_residual < 1e-6);
  CHECK(std::abs(chk.center_y_shift) < 1e-5);
  // the phase-rotated eigenstate is left behind by the drift
  CHECK(chk.fidelity_eigenstate < 0.995);
  CHECK(chk.fidelity_eigenstate > 0.9);
}

TEST_CASE("crank-nicolson fallback tracks the split propagator") {
  const PhysicalParams p = fast_params();
  const CoeffSet cs = closed_form_coeffs(p);
  const GridSpec g = auto_grid(64, -1.0125, 0.0, 1.0, 1.0, 10.0);
  const WaveFunction2D w0 = phi_lambda(g, 0.0, cs, 0.0);

  PropagatorConfig split_cfg;
  split_cfg.dt = 0.01;
  const PropagationResult a = propagate(w0, p, 0.1, split_cfg);

  PropagatorConfig cn_cfg;
  cn_cfg.dt = 0.01;
  cn_cfg.scheme = Scheme::crank_nicolson;
  const PropagationResult b = propagate(w0, p, 0.1, cn_cfg);

  CHECK(a.norm_drift < 1e-10);
  CHECK(b.norm_drift < 1e-8);
  CHECK(fidelity(a.psi, b.psi) > 1.0 - 1e-3);
}

TEST_CASE("oversized steps are rejected up front") {
  const PhysicalParams p = fast_params();
  const CoeffSet cs = closed_form_coeffs(p);
  const GridSpec g = auto_grid(64, -1.0125, 0.0, 1.0, 1.0, 10.0);
  const WaveFunction2D w0 = phi_lambda(g, 0.0, cs, 0.0);
  PropagatorConfig cfg;
  cfg.dt = 1.0;
  CHECK_THROWS_AS(propagate(w0, p, 2.0, cfg), ConfigError);
  cfg.dt = 0.01;
  cfg.order = 3;
  CHECK_THROWS_AS(propagate(w0, p, 0.1, cfg), ConfigError);
}

TEST_CASE("escape through the boundary stops the run") {
  const PhysicalParams p = fast_params();
  const CoeffSet cs = closed_form_coeffs(p);
  GridSpec g;
  g.n = 64;
  g.x_min = -11.0125;
  g.x_max = 8.9875;
  g.y_min = -10.0;
  g.y_max = 10.0;
  const WaveFunction2D w0 = phi_lambda(g, 0.0, cs, 0.0);
  PropagatorConfig cfg;
  cfg.dt = 2.0 * M_PI / 1000.0;
  // the state falls at speed about 0.99 and reaches the wall long before t=6
  CHECK_THROWS_AS(propagate(w0, p, 6.0, cfg), ConfigError);
}

TEST_CASE("dump hook fires on schedule") {
  const PhysicalParams p = fast_params();
  const CoeffSet cs = closed_form_coeffs(p);
  const GridSpec g = auto_grid(64, -1.0125, 0.0, 1.0, 1.0, 10.0);
  const WaveFunction2D w0 = phi_lambda(g, 0.0, cs, 0.0);
  PropagatorConfig cfg;
  cfg.dt = 0.0078125; // exactly representable so the step count is exact
  int calls = 0;
  double last_time = -1.0;
  const PropagationResult res =
      propagate(w0, p, 20.0 * cfg.dt, cfg, 5, [&](const WaveFunction2D& w) {
        ++calls;
        CHECK(w.time > last_time);
        last_time = w.time;
      });
  CHECK(res.steps == 20);
  CHECK(calls == 4);
}

} // TEST_SUITE
