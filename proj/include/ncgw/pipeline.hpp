#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ncgw/coeffs.hpp"
#include "ncgw/io.hpp"
#include "ncgw/tdse.hpp"

namespace ncgw {

// Closed-form coefficient set for the configured branch.
CoeffSet config_coeffs(const RunConfig& c);

// Validation summary: derived constants, deformed commutator table deviation,
// map determinant, and branch admissibility.
void cmd_validate(const RunConfig& c, std::ostream& out);

// Renderers shared by the CLI and the determinism checks; each returns the
// complete file content.
std::string coeffs_csv(const RunConfig& c);
std::string expectations_csv(const RunConfig& c);
std::string uncertainty_csv(const RunConfig& c);
std::string discrepancies_json(const RunConfig& c);

void write_discrepancy_summary(const RunConfig& c, std::ostream& out);

// Initial states for `state` and `evolve`; kind is "packet" or "eigenstate".
WaveFunction2D build_cli_state(const RunConfig& c, const std::string& kind,
                               double lambda, double t);

struct EvolveOutcome {
  PropagationResult prop;
  cplx invariant_before, invariant_after;
  cplx energy_before, energy_after;
  double fidelity_vs_eigenstate; // -1 when the initial state is not one
  int dumps_written;
};

EvolveOutcome run_evolve(const RunConfig& c, const std::string& kind,
                         double lambda, double t_end, double dt,
                         const std::string& scheme, int dump_every,
                         std::ostream& log);

struct PipelineResult {
  std::vector<std::string> written;
};

// coeffs.csv, expectations.csv, uncertainty.csv, discrepancies.json, and the
// SVG plots, all under the configured output directory.
PipelineResult run_pipeline(const RunConfig& c, std::ostream& log);

} // namespace ncgw
