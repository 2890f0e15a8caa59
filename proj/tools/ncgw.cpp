#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "ncgw/observables.hpp"
#include "ncgw/pipeline.hpp"
#include "ncgw/states.hpp"

namespace {

ncgw::RunConfig load_or_default(const std::string& path) {
  if (!path.empty()) return ncgw::RunConfig::load(path);
  ncgw::RunConfig c;
  if (const char* env = std::getenv("NCGW_FIXTURES"))
    if (*env) c.fixtures_dir = env;
  return c;
}

// Seeded Gaussian with random center, momentum and width; used to exercise
// the propagator on states that are not special to the model.
ncgw::WaveFunction2D random_state(const ncgw::RunConfig& c, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> center(-3.0, 3.0);
  std::uniform_real_distribution<double> momentum(-1.0, 1.0);
  std::uniform_real_distribution<double> width(0.8, 1.5);
  const double cx = center(rng), cy = center(rng);
  const double px = momentum(rng), py = momentum(rng);
  const double sx = width(rng), sy = width(rng);

  const ncgw::GridSpec g =
      ncgw::auto_grid(c.grid.n, cx, cy, 2.0 * sx, 2.0 * sy,
                      c.grid.padding_sigmas);
  ncgw::WaveFunction2D w = ncgw::make_wavefunction(g, c.times.t0);
  const ncgw::cplx i_hb = ncgw::I / c.params.hbar;
  for (int j = 0; j < g.n; ++j) {
    const double y = g.y(j);
    for (int i = 0; i < g.n; ++i) {
      const double x = g.x(i);
      const double qx = x - cx, qy = y - cy;
      w.amp[w.idx(i, j)] =
          std::exp(-qx * qx / (4.0 * sx * sx) - qy * qy / (4.0 * sy * sy)
                   + i_hb * (px * x + py * y));
    }
  }
  w.normalize();
  return w;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant, eigenstate, packet and uncertainty toolkit for a "
               "falling particle on a noncommutative plane"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  unsigned seed = 0;
  int grid_n = 0;
  double tau_override = std::numeric_limits<double>::quiet_NaN();
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory override");
  app.add_option("--seed", seed, "seed for the random state kind");
  app.add_option("--grid", grid_n, "grid size override (power of two)");
  app.add_option("--tau", tau_override, "time offset override");

  auto* c_validate = app.add_subcommand(
      "validate", "check the configuration and print derived constants");
  auto* c_coeffs = app.add_subcommand(
      "coeffs", "emit the invariant coefficients over the time window");
  auto* c_state = app.add_subcommand("state", "build one state and dump it");
  auto* c_expect = app.add_subcommand(
      "expect", "emit closed-form and grid expectation values");
  auto* c_unc = app.add_subcommand(
      "uncertainty", "emit the uncertainty product trace");
  auto* c_evolve = app.add_subcommand("evolve", "propagate a state in time");
  auto* c_report = app.add_subcommand(
      "report", "emit the closed-form versus oracle findings");
  auto* c_pipeline = app.add_subcommand(
      "pipeline", "run every emitter into the output directory");

  std::string state_kind = "packet";
  double state_lambda = 0.0, state_t = std::numeric_limits<double>::quiet_NaN();
  for (CLI::App* s : {c_state, c_evolve}) {
    s->add_option("--kind", state_kind,
                  "packet, eigenstate or random (with --seed)");
    s->add_option("--lambda", state_lambda, "eigenvalue for kind=eigenstate");
  }
  c_state->add_option("--t", state_t, "build time (default: times.t0)");

  double t_end = std::numeric_limits<double>::quiet_NaN();
  double dt = 0.0;
  std::string scheme = "split4";
  int dump_every = 0;
  c_evolve->add_option("--t-end", t_end, "final time")->required();
  c_evolve->add_option("--dt", dt, "time step (default: period/1000)");
  c_evolve->add_option("--scheme", scheme, "split4, split2 or cn");
  c_evolve->add_option("--dump-every", dump_every,
                       "write a wavefunction dump every N steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ncgw::RunConfig c = load_or_default(config_path);
    if (!out_dir.empty()) c.output_dir = out_dir;
    if (grid_n > 0) c.grid.n = grid_n;
    if (std::isfinite(tau_override)) c.params.tau = tau_override;
    c.validate();
    namespace fs = std::filesystem;

    if (*c_validate) {
      ncgw::cmd_validate(c, std::cout);
    } else if (*c_coeffs) {
      const std::string p = (fs::path(c.output_dir) / "coeffs.csv").string();
      ncgw::write_file_atomic(p, ncgw::coeffs_csv(c));
      std::cout << "wrote " << p << "\n";
    } else if (*c_expect) {
      const std::string p =
          (fs::path(c.output_dir) / "expectations.csv").string();
      ncgw::write_file_atomic(p, ncgw::expectations_csv(c));
      std::cout << "wrote " << p << "\n";
    } else if (*c_unc) {
      const std::string p =
          (fs::path(c.output_dir) / "uncertainty.csv").string();
      ncgw::write_file_atomic(p, ncgw::uncertainty_csv(c));
      std::cout << "wrote " << p << "\n";
    } else if (*c_report) {
      const std::string p =
          (fs::path(c.output_dir) / "discrepancies.json").string();
      ncgw::write_file_atomic(p, ncgw::discrepancies_json(c));
      std::cout << "wrote " << p << "\n";
      ncgw::write_discrepancy_summary(c, std::cout);
    } else if (*c_state) {
      const double t = std::isfinite(state_t) ? state_t : c.times.t0;
      const ncgw::WaveFunction2D w =
          state_kind == "random" ? random_state(c, seed)
                                 : ncgw::build_cli_state(c, state_kind,
                                                         state_lambda, t);
      const std::string base = (fs::path(c.output_dir) / "state").string();
      ncgw::write_wavefunction(base, w);
      ncgw::write_svg_heatmap(base + ".svg", "state density", w);
      const ncgw::GridMoments m = ncgw::grid_moments(w, c.params.hbar);
      std::cout << "wrote " << base << ".bin/.json/.svg\n"
                << "center (" << ncgw::format_g17(m.x) << ", "
                << ncgw::format_g17(m.y) << "), widths ("
                << ncgw::format_g17(m.dx) << ", " << ncgw::format_g17(m.dy)
                << ")\n";
    } else if (*c_evolve) {
      if (dt <= 0.0) {
        const double period =
            2.0 * M_PI / ncgw::derive_constants(c.params).omega;
        dt = period / 1000.0;
      }
      if (state_kind == "random") {
        ncgw::PropagatorConfig cfg;
        cfg.dt = dt;
        cfg.order = scheme == "split2" ? 2 : 4;
        if (scheme == "cn") cfg.scheme = ncgw::Scheme::crank_nicolson;
        const ncgw::WaveFunction2D w0 = random_state(c, seed);
        const ncgw::CoeffSet cs = ncgw::config_coeffs(c);
        const ncgw::cplx i0 = ncgw::invariant_expectation(w0, cs, w0.time);
        const auto res = ncgw::propagate(w0, c.params, t_end, cfg);
        const ncgw::cplx i1 =
            ncgw::invariant_expectation(res.psi, cs, res.psi.time);
        std::cout << "steps        " << res.steps << "\n"
                  << "norm drift   " << ncgw::format_g17(res.norm_drift)
                  << "\n"
                  << "<I> drift    " << ncgw::format_g17(std::abs(i1 - i0))
                  << "\n";
      } else {
        ncgw::run_evolve(c, state_kind, state_lambda, t_end, dt, scheme,
                         dump_every, std::cout);
      }
    } else if (*c_pipeline) {
      ncgw::run_pipeline(c, std::cout);
    }
    return 0;
  } catch (const ncgw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ncgw::OracleError& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
