#pragma once

#include <functional>

#include "ncgw/coeffs.hpp"
#include "ncgw/gausssol.hpp"
#include "ncgw/grid.hpp"

namespace ncgw {

enum class Scheme { split_operator_4way, crank_nicolson };

struct PropagatorConfig {
  double dt = 0.0;           // required
  Scheme scheme = Scheme::split_operator_4way;
  int order = 4;             // 2 or 4 (split-operator composition)
  int boundary_check_every = 10;
  double boundary_tol = 1e-10;
  int cn_max_iters = 4000;
  double cn_tol = 1e-10;
};

struct PropagationResult {
  WaveFunction2D psi;
  double norm_drift;      // |norm - initial norm| maximum over the run
  double boundary_max;    // worst boundary/peak ratio seen
  int steps;
};

// Evolve to t_end with fixed steps of dt (last step shortened). Before
// stepping, verifies dt times the spectral energy spread of the initial state
// is below 0.1 hbar. The dump hook, when set, is called after every
// dump_every steps with the current state.
PropagationResult propagate(
    const WaveFunction2D& w0, const PhysicalParams& p, double t_end,
    const PropagatorConfig& cfg, int dump_every = 0,
    const std::function<void(const WaveFunction2D&)>& dump = {});

// <psi| I(t) |psi> / <psi|psi>
cplx invariant_expectation(const WaveFunction2D& w, const CoeffSet& cs,
                           double t);

// <psi| H |psi> / <psi|psi>
cplx hamiltonian_expectation(const WaveFunction2D& w, const PhysicalParams& p);

// Propagates e^{i nu} Phi_lambda from t0=0 to t_end and reports how the
// evolved state compares against (a) the phase-rotated eigenstate at t_end
// and (b) the drift-corrected Gaussian comparator, plus conservation
// diagnostics.
struct EvolutionCheck {
  double fidelity_eigenstate;   // vs e^{i nu(t_end)} Phi_lambda(t_end)
  double fidelity_comparator;   // vs exactly evolved Gaussian
  double comparator_residual;   // TDSE defect of the comparator at t_end
  double invariant_drift;       // |<I>(t_end) - <I>(0)| / (1 + |<I>(0)|)
  double norm_drift;
  double energy_drift;          // same, for <H>
  double center_y_shift;        // observed minus drift-law prediction
};

EvolutionCheck verify_lr_solution(double lambda, double t_end,
                                  const CoeffSet& cs, const GridSpec& g,
                                  const PropagatorConfig& cfg);

} // namespace ncgw
