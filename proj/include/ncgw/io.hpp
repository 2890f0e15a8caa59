#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ncgw/grid.hpp"
#include "ncgw/params.hpp"

namespace ncgw {

struct GridConfig {
  int n = 256;
  double padding_sigmas = 12.0;
};

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 62.83185307179586;
  int samples = 97;

  std::vector<double> sample_times() const;
};

// Run-wide configuration, loadable from a JSON file. Unknown keys are
// rejected so typos fail loudly instead of silently using defaults.
struct RunConfig {
  PhysicalParams params;
  GridConfig grid;
  TimeGrid times;
  int packet_nodes = 96;
  bool alternate_branch = false;
  std::string fixtures_dir = "fixtures";
  std::string output_dir = "out";

  static RunConfig from_json_text(const std::string& text);
  // Reads the file, then applies the NCGW_FIXTURES environment override.
  static RunConfig load(const std::string& path);

  void validate() const;

  // Deterministic serialization (fixed key order); config_hash() is the
  // FNV-1a 64-bit hash of this text, printed as 16 hex digits.
  std::string canonical_text() const;
  std::string config_hash() const;
};

uint64_t fnv1a64(std::string_view s);
std::string hex64(uint64_t v);

// %.17g, round-trip exact for doubles.
std::string format_g17(double v);

// Writes content to path via a temporary file and an atomic rename so no
// partially written file is ever observable under the final name.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// CSV with a header row and a leading comment line carrying the config hash.
std::string render_csv(const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows,
                       const std::string& config_hash);
void write_csv(const std::string& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows,
               const std::string& config_hash);

// Wavefunction dump: base_path + ".bin" holds little-endian (Re, Im) double
// pairs, row-major with x fastest; base_path + ".json" is the sidecar
// {n, x_min, x_max, y_min, y_max, time}.
void write_wavefunction(const std::string& base_path,
                        const WaveFunction2D& w);
WaveFunction2D read_wavefunction(const std::string& base_path);

struct Series {
  std::string label;
  std::string color; // "#rrggbb"
  std::vector<double> x, y;
};

// Simple line chart; NaN samples break the polyline.
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

// |psi|^2 heatmap, block-averaged down to at most max_cells per axis.
void write_svg_heatmap(const std::string& path, const std::string& title,
                       const WaveFunction2D& w, int max_cells = 64);

enum class FixtureStatus { created, matched, mismatched };

// Golden-fixture helper: writes content if the fixture is absent, otherwise
// byte-compares against it.
FixtureStatus check_fixture(const std::string& dir, const std::string& name,
                            const std::string& content);

} // namespace ncgw
