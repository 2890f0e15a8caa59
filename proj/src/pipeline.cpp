#include "ncgw/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "ncgw/observables.hpp"
#include "ncgw/opalg.hpp"
#include "ncgw/report.hpp"
#include "ncgw/states.hpp"

namespace fs = std::filesystem;

namespace ncgw {

namespace {

std::string out_path(const RunConfig& c, const std::string& name) {
  return (fs::path(c.output_dir) / name).string();
}

} // namespace

CoeffSet config_coeffs(const RunConfig& c) {
  return closed_form_coeffs(c.params, c.alternate_branch
                                          ? ModeBranch::alternate
                                          : ModeBranch::printed);
}

void cmd_validate(const RunConfig& c, std::ostream& out) {
  c.validate();
  const DerivedConstants dc = derive_constants(c.params);
  out << "deformation zeta          " << format_g17(dc.zeta) << "\n"
      << "effective hbar            " << format_g17(dc.hbar_eff) << "\n"
      << "mode frequency omega      " << format_g17(dc.omega) << "\n"
      << "mode period 2 pi / omega  " << format_g17(2.0 * M_PI / dc.omega)
      << "\n"
      << "|B1| normalization        " << format_g17(dc.b1_mod) << "\n"
      << "phase secular rate        " << format_g17(dc.nu_rate) << "\n";
  if (dc.strong_deformation)
    out << "warning: theta eta / (4 hbar^2) >= 0.1; deformation corrections "
           "are not small here\n";

  const LinearPhaseMap map = bopp_map(c.params);
  const auto induced = induced_commutators(map, c.params.hbar);
  const auto target = deformed_commutator_table(c.params);
  out << "map determinant           " << format_g17(map.det()) << "\n"
      << "commutator table dev      "
      << format_g17(table_deviation(induced, target)) << "\n";

  const CoeffSet cs = config_coeffs(c);
  out << "branch                    "
      << (c.alternate_branch ? "alternate" : "printed") << "\n";
  try {
    (void)eigenstate_exponent(0.0, cs, 0.0);
    out << "eigenstate decay          negative definite, normalizable\n";
  } catch (const OracleError& e) {
    out << "eigenstate decay          REJECTED: " << e.what() << "\n";
  }
  out << "config hash               " << c.config_hash() << "\n"
      << "configuration ok\n";
}

std::string coeffs_csv(const RunConfig& c) {
  const CoeffSet cs = config_coeffs(c);
  const auto ts = c.times.sample_times();
  std::vector<std::vector<double>> rows;
  rows.reserve(ts.size());
  for (double t : ts) {
    const auto v = cs.at(t);
    std::vector<double> r{t};
    for (int i = 0; i < 5; ++i) {
      r.push_back(v[i].real());
      r.push_back(v[i].imag());
    }
    rows.push_back(std::move(r));
  }
  return render_csv({"t", "re_A", "im_A", "re_B", "im_B", "re_C", "im_C",
                     "re_D", "im_D", "re_alpha", "im_alpha"},
                    rows, c.config_hash());
}

std::string expectations_csv(const RunConfig& c) {
  const CoeffSet cs = config_coeffs(c);
  const auto ts = c.times.sample_times();
  std::vector<std::vector<double>> rows;
  rows.reserve(ts.size());
  for (double t : ts) {
    const FormulaExpectations fe = formula_expectations(c.params, t);
    const GridSpec g = packet_grid(c.grid.n, cs, t, c.grid.padding_sigmas);
    const PacketBuild pb = build_packet(g, cs, t, PacketMode::lambda_quadrature,
                                        c.packet_nodes, false);
    const GridMoments m = grid_moments(pb.psi, c.params.hbar);
    rows.push_back({t, fe.x, fe.y, fe.var_x, fe.var_px.real(),
                    fe.var_px.imag(), m.x, m.y, m.dx * m.dx, m.dpx * m.dpx,
                    m.xy - m.x * m.y, fe.degenerate ? 1.0 : 0.0});
  }
  return render_csv(
      {"t", "x_formula", "y_formula", "var_x_formula", "var_px_re_formula",
       "var_px_im_formula", "x_oracle", "y_oracle", "var_x_oracle",
       "var_px_oracle", "cov_xy_oracle", "degenerate_flag"},
      rows, c.config_hash());
}

std::string uncertainty_csv(const RunConfig& c) {
  const CoeffSet cs = config_coeffs(c);
  const auto samples =
      scan_uncertainty(cs, c.times.sample_times(), c.grid.n,
                       c.grid.padding_sigmas, c.packet_nodes);
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples)
    rows.push_back({s.t, s.product_oracle, s.product_formula, s.f_formula,
                    static_cast<double>(s.flag)});
  return render_csv({"t", "product_oracle", "product_formula", "f_formula",
                     "flag"},
                    rows, c.config_hash());
}

std::string discrepancies_json(const RunConfig& c) {
  return build_discrepancy_report(c.params).to_json();
}

void write_discrepancy_summary(const RunConfig& c, std::ostream& out) {
  const DiscrepancyReport rep = build_discrepancy_report(c.params);
  out << rep.entries.size() << " findings\n";
  for (const auto& e : rep.entries) {
    out << "[" << e.verdict << "] " << e.id << "\n"
        << "    " << e.quantity << "\n"
        << "    closed form: " << e.formula_value << "\n"
        << "    oracle:      " << e.oracle_value << "\n";
    if (e.rel_diff >= 0.0)
      out << "    relative difference: " << format_g17(e.rel_diff) << "\n";
    out << "    " << e.note << "\n";
  }
}

WaveFunction2D build_cli_state(const RunConfig& c, const std::string& kind,
                               double lambda, double t) {
  const CoeffSet cs = config_coeffs(c);
  if (kind == "packet") {
    const GridSpec g = packet_grid(c.grid.n, cs, t, c.grid.padding_sigmas);
    return build_packet(g, cs, t, PacketMode::lambda_quadrature,
                        c.packet_nodes, true)
        .psi;
  }
  if (kind == "eigenstate") {
    const GridSpec g =
        eigenstate_grid(c.grid.n, lambda, cs, t, c.grid.padding_sigmas);
    return phi_lambda(g, lambda, cs, t);
  }
  throw ConfigError("state kind must be \"packet\" or \"eigenstate\"");
}

EvolveOutcome run_evolve(const RunConfig& c, const std::string& kind,
                         double lambda, double t_end, double dt,
                         const std::string& scheme, int dump_every,
                         std::ostream& log) {
  const CoeffSet cs = config_coeffs(c);
  PropagatorConfig cfg;
  cfg.dt = dt;
  if (scheme == "split4") {
    cfg.scheme = Scheme::split_operator_4way;
    cfg.order = 4;
  } else if (scheme == "split2") {
    cfg.scheme = Scheme::split_operator_4way;
    cfg.order = 2;
  } else if (scheme == "cn") {
    cfg.scheme = Scheme::crank_nicolson;
  } else {
    throw ConfigError("scheme must be split4, split2 or cn");
  }

  WaveFunction2D w0 = build_cli_state(c, kind, lambda, c.times.t0);
  EvolveOutcome out{};
  out.invariant_before = invariant_expectation(w0, cs, w0.time);
  out.energy_before = hamiltonian_expectation(w0, c.params);

  int dumps = 0;
  std::function<void(const WaveFunction2D&)> dump;
  if (dump_every > 0)
    dump = [&](const WaveFunction2D& w) {
      std::ostringstream name;
      name << "evolve_" << dumps;
      write_wavefunction(out_path(c, name.str()), w);
      ++dumps;
    };
  fs::create_directories(c.output_dir);
  out.prop = propagate(w0, c.params, t_end, cfg, dump_every, dump);
  out.dumps_written = dumps;
  out.invariant_after = invariant_expectation(out.prop.psi, cs,
                                              out.prop.psi.time);
  out.energy_after = hamiltonian_expectation(out.prop.psi, c.params);
  out.fidelity_vs_eigenstate = -1.0;
  if (kind == "eigenstate") {
    const WaveFunction2D ref =
        phi_lambda(out.prop.psi.grid, lambda, cs, out.prop.psi.time);
    out.fidelity_vs_eigenstate = fidelity(out.prop.psi, ref);
  }

  log << "steps                " << out.prop.steps << "\n"
      << "norm drift           " << format_g17(out.prop.norm_drift) << "\n"
      << "boundary max         " << format_g17(out.prop.boundary_max) << "\n"
      << "<I> before           " << format_g17(out.invariant_before.real())
      << " + " << format_g17(out.invariant_before.imag()) << "i\n"
      << "<I> after            " << format_g17(out.invariant_after.real())
      << " + " << format_g17(out.invariant_after.imag()) << "i\n"
      << "<I> drift            "
      << format_g17(std::abs(out.invariant_after - out.invariant_before))
      << "\n"
      << "<H> drift            "
      << format_g17(std::abs(out.energy_after - out.energy_before)) << "\n";
  if (out.fidelity_vs_eigenstate >= 0.0)
    log << "fidelity vs shape    " << format_g17(out.fidelity_vs_eigenstate)
        << "\n";
  if (dump_every > 0) log << "dumps written        " << dumps << "\n";
  return out;
}

PipelineResult run_pipeline(const RunConfig& c, std::ostream& log) {
  c.validate();
  fs::create_directories(c.output_dir);
  PipelineResult res;
  const auto emit = [&](const std::string& name, const std::string& content) {
    const std::string p = out_path(c, name);
    write_file_atomic(p, content);
    res.written.push_back(p);
    log << "wrote " << p << "\n";
  };

  emit("coeffs.csv", coeffs_csv(c));
  emit("expectations.csv", expectations_csv(c));
  emit("uncertainty.csv", uncertainty_csv(c));
  emit("discrepancies.json", discrepancies_json(c));

  const CoeffSet cs = config_coeffs(c);
  const auto ts = c.times.sample_times();

  { // uncertainty product plot
    const auto samples = scan_uncertainty(cs, ts, c.grid.n,
                                          c.grid.padding_sigmas,
                                          c.packet_nodes);
    Series oracle{"grid product", "#1f77b4", {}, {}};
    Series formula{"closed form", "#ff7f0e", {}, {}};
    Series bound{"hbar/2", "#999999", {}, {}};
    for (const auto& s : samples) {
      oracle.x.push_back(s.t);
      oracle.y.push_back(s.product_oracle);
      formula.x.push_back(s.t);
      formula.y.push_back(s.product_formula);
      bound.x.push_back(s.t);
      bound.y.push_back(0.5 * c.params.hbar);
    }
    const std::string p = out_path(c, "uncertainty.svg");
    write_svg_lines(p, "position-momentum uncertainty product", "t",
                    "dx dpx", {oracle, formula, bound});
    res.written.push_back(p);
    log << "wrote " << p << "\n";
  }

  { // coefficient moduli plot
    const char* names[5] = {"|A|", "|B|", "|C|", "|D|", "|alpha|"};
    const char* colors[5] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                             "#9467bd"};
    std::vector<Series> series;
    for (int i = 0; i < 5; ++i) series.push_back({names[i], colors[i], {}, {}});
    for (double t : ts) {
      const auto v = cs.at(t);
      for (int i = 0; i < 5; ++i) {
        series[static_cast<size_t>(i)].x.push_back(t);
        series[static_cast<size_t>(i)].y.push_back(std::abs(v[i]));
      }
    }
    const std::string p = out_path(c, "coeffs.svg");
    write_svg_lines(p, "invariant coefficient moduli", "t", "modulus",
                    series);
    res.written.push_back(p);
    log << "wrote " << p << "\n";
  }

  { // density snapshots at the start and midpoint
    const double mid = 0.5 * (c.times.t0 + c.times.t1);
    const double snaps[2] = {c.times.t0, mid};
    const char* names[2] = {"density_t0.svg", "density_mid.svg"};
    for (int k = 0; k < 2; ++k) {
      const GridSpec g = packet_grid(c.grid.n, cs, snaps[k],
                                     c.grid.padding_sigmas);
      const PacketBuild pb = build_packet(g, cs, snaps[k],
                                          PacketMode::lambda_quadrature,
                                          c.packet_nodes, false);
      std::ostringstream title;
      title << "packet density, t = " << snaps[k];
      const std::string p = out_path(c, names[k]);
      write_svg_heatmap(p, title.str(), pb.psi);
      res.written.push_back(p);
      log << "wrote " << p << "\n";
    }
  }
  return res;
}

} // namespace ncgw
