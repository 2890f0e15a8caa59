#include "ncgw/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace ncgw {

namespace {

void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const char* where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) { ok = true; break; }
    if (!ok)
      throw ConfigError(std::string("config: unknown key \"") + item.key()
                        + "\" in " + where);
  }
}

double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError(std::string("config: \"") + key + "\" must be a number");
  return j[key].get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    throw ConfigError(std::string("config: \"") + key
                      + "\" must be an integer");
  return j[key].get<int>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean())
    throw ConfigError(std::string("config: \"") + key + "\" must be a bool");
  return j[key].get<bool>();
}

std::string get_str(const json& j, const char* key, std::string fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string())
    throw ConfigError(std::string("config: \"") + key + "\" must be a string");
  return j[key].get<std::string>();
}

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Ramp3 {
  // three-stop linear color ramp
  int r[3], g[3], b[3];
  std::string at(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    const int seg = t < 0.5 ? 0 : 1;
    const double u = (t - 0.5 * seg) * 2.0;
    const auto mix = [&](const int* c) {
      return static_cast<int>(std::lround(c[seg] + u * (c[seg + 1] - c[seg])));
    };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(r), mix(g), mix(b));
    return buf;
  }
};

} // namespace

std::vector<double> TimeGrid::sample_times() const {
  std::vector<double> ts(static_cast<size_t>(samples));
  for (int i = 0; i < samples; ++i)
    ts[static_cast<size_t>(i)] =
        t0 + (t1 - t0) * static_cast<double>(i)
                 / static_cast<double>(samples - 1);
  return ts;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  expect_keys(j,
              {"params", "grid", "times", "packet_nodes", "alternate_branch",
               "fixtures_dir", "output_dir"},
              "top level");

  RunConfig c;
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw ConfigError("config: \"params\" must be an object");
    expect_keys(p, {"m", "g", "hbar", "theta", "eta", "tau", "kappa"},
                "params");
    c.params.m = get_num(p, "m", c.params.m);
    c.params.g = get_num(p, "g", c.params.g);
    c.params.hbar = get_num(p, "hbar", c.params.hbar);
    c.params.theta = get_num(p, "theta", c.params.theta);
    c.params.eta = get_num(p, "eta", c.params.eta);
    c.params.tau = get_num(p, "tau", c.params.tau);
    c.params.kappa = get_num(p, "kappa", c.params.kappa);
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) throw ConfigError("config: \"grid\" must be an object");
    expect_keys(g, {"n", "padding_sigmas"}, "grid");
    c.grid.n = get_int(g, "n", c.grid.n);
    c.grid.padding_sigmas = get_num(g, "padding_sigmas", c.grid.padding_sigmas);
  }
  if (j.contains("times")) {
    const json& t = j["times"];
    if (!t.is_object()) throw ConfigError("config: \"times\" must be an object");
    expect_keys(t, {"t0", "t1", "samples"}, "times");
    c.times.t0 = get_num(t, "t0", c.times.t0);
    c.times.t1 = get_num(t, "t1", c.times.t1);
    c.times.samples = get_int(t, "samples", c.times.samples);
  }
  c.packet_nodes = get_int(j, "packet_nodes", c.packet_nodes);
  c.alternate_branch = get_bool(j, "alternate_branch", c.alternate_branch);
  c.fixtures_dir = get_str(j, "fixtures_dir", c.fixtures_dir);
  c.output_dir = get_str(j, "output_dir", c.output_dir);
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  RunConfig c = from_json_text(read_file(path));
  if (const char* env = std::getenv("NCGW_FIXTURES"))
    if (*env) c.fixtures_dir = env;
  c.validate();
  return c;
}

void RunConfig::validate() const {
  params.validate();
  if (grid.n < 64 || (grid.n & (grid.n - 1)) != 0)
    throw ConfigError("config: grid.n must be a power of two, at least 64");
  if (!(grid.padding_sigmas >= 8.0))
    throw ConfigError("config: grid.padding_sigmas must be at least 8");
  if (times.samples < 2) throw ConfigError("config: times.samples < 2");
  if (!(times.t1 > times.t0)) throw ConfigError("config: times.t1 <= t0");
  if (!std::isfinite(times.t0) || !std::isfinite(times.t1))
    throw ConfigError("config: times must be finite");
  if (packet_nodes < 16 || packet_nodes > 2048)
    throw ConfigError("config: packet_nodes out of range [16, 2048]");
  if (fixtures_dir.empty() || output_dir.empty())
    throw ConfigError("config: directories must be non-empty");
}

std::string RunConfig::canonical_text() const {
  ordered_json j;
  j["params"] = {{"m", params.m},       {"g", params.g},
                 {"hbar", params.hbar}, {"theta", params.theta},
                 {"eta", params.eta},   {"tau", params.tau},
                 {"kappa", params.kappa}};
  j["grid"] = {{"n", grid.n}, {"padding_sigmas", grid.padding_sigmas}};
  j["times"] = {{"t0", times.t0}, {"t1", times.t1}, {"samples", times.samples}};
  j["packet_nodes"] = packet_nodes;
  j["alternate_branch"] = alternate_branch;
  j["fixtures_dir"] = fixtures_dir;
  j["output_dir"] = output_dir;
  return j.dump();
}

std::string RunConfig::config_hash() const {
  return hex64(fnv1a64(canonical_text()));
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("io: cannot open " + tmp.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("io: short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("io: rename failed for " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("io: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string render_csv(const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows,
                       const std::string& config_hash) {
  std::string out = "# config " + config_hash + "\n";
  for (size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& r : rows) {
    if (r.size() != columns.size())
      throw ConfigError("csv: row width does not match header");
    for (size_t c = 0; c < r.size(); ++c) {
      if (c) out += ',';
      out += format_g17(r[c]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows,
               const std::string& config_hash) {
  write_file_atomic(path, render_csv(columns, rows, config_hash));
}

void write_wavefunction(const std::string& base_path,
                        const WaveFunction2D& w) {
  static_assert(std::endian::native == std::endian::little,
                "dump format is little-endian");
  ordered_json side;
  side["n"] = w.grid.n;
  side["x_min"] = w.grid.x_min;
  side["x_max"] = w.grid.x_max;
  side["y_min"] = w.grid.y_min;
  side["y_max"] = w.grid.y_max;
  side["time"] = w.time;
  write_file_atomic(base_path + ".json", side.dump(2) + "\n");

  std::string bytes(w.amp.size() * sizeof(cplx), '\0');
  std::memcpy(bytes.data(), w.amp.data(), bytes.size());
  write_file_atomic(base_path + ".bin", bytes);
}

WaveFunction2D read_wavefunction(const std::string& base_path) {
  json side;
  try {
    side = json::parse(read_file(base_path + ".json"));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("io: bad sidecar: ") + e.what());
  }
  GridSpec g;
  g.n = get_int(side, "n", 0);
  g.x_min = get_num(side, "x_min", 0.0);
  g.x_max = get_num(side, "x_max", 0.0);
  g.y_min = get_num(side, "y_min", 0.0);
  g.y_max = get_num(side, "y_max", 0.0);
  g.validate();
  WaveFunction2D w = make_wavefunction(g, get_num(side, "time", 0.0));
  const std::string bytes = read_file(base_path + ".bin");
  if (bytes.size() != w.amp.size() * sizeof(cplx))
    throw ConfigError("io: dump size does not match sidecar grid");
  std::memcpy(w.amp.data(), bytes.data(), bytes.size());
  return w;
}

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
  const double W = 860, H = 520;
  const double L = 70, R = 830, T = 46, B = 462;

  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  bool any = false;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        x_lo = x_hi = s.x[i];
        y_lo = y_hi = s.y[i];
        any = true;
      } else {
        x_lo = std::min(x_lo, s.x[i]);
        x_hi = std::max(x_hi, s.x[i]);
        y_lo = std::min(y_lo, s.y[i]);
        y_hi = std::max(y_hi, s.y[i]);
      }
    }
  if (x_hi - x_lo <= 0) { x_lo -= 1; x_hi += 1; }
  if (y_hi - y_lo <= 0) { y_lo -= 1; y_hi += 1; }
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const auto X = [&](double v) {
    return L + (v - x_lo) / (x_hi - x_lo) * (R - L);
  };
  const auto Y = [&](double v) {
    return B - (v - y_lo) / (y_hi - y_lo) * (B - T);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
     << "\">\n"
     << "<rect width=\"" << W << "\" height=\"" << H
     << "\" fill=\"#ffffff\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << xml_escape(title) << "</text>\n";

  os << "<g stroke=\"#444444\" stroke-width=\"1\" fill=\"none\">\n"
     << "<path d=\"M" << L << " " << T << " L" << L << " " << B << " L" << R
     << " " << B << "\"/>\n</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / ticks;
    const double fy = y_lo + (y_hi - y_lo) * i / ticks;
    os << "<line x1=\"" << fmt_coord(X(fx)) << "\" y1=\"" << B << "\" x2=\""
       << fmt_coord(X(fx)) << "\" y2=\"" << B + 5
       << "\" stroke=\"#444444\"/>\n";
    os << "<text x=\"" << fmt_coord(X(fx)) << "\" y=\"" << B + 18
       << "\" text-anchor=\"middle\">" << fmt_tick(fx) << "</text>\n";
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << fmt_coord(Y(fy))
       << "\" x2=\"" << L << "\" y2=\"" << fmt_coord(Y(fy))
       << "\" stroke=\"#444444\"/>\n";
    os << "<text x=\"" << L - 9 << "\" y=\"" << fmt_coord(Y(fy) + 4)
       << "\" text-anchor=\"end\">" << fmt_tick(fy) << "</text>\n";
  }
  os << "<text x=\"" << (L + R) / 2 << "\" y=\"" << H - 14
     << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(x_label)
     << "</text>\n";
  os << "<text x=\"" << L << "\" y=\"" << T - 8
     << "\" text-anchor=\"start\" font-size=\"13\">" << xml_escape(y_label)
     << "</text>\n</g>\n";

  double legend_y = T + 14;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.6\" points=\"";
    bool in_seg = false;
    std::string pts;
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        if (in_seg) {
          os << pts << "\"/>\n<polyline fill=\"none\" stroke=\"" << s.color
             << "\" stroke-width=\"1.6\" points=\"";
          pts.clear();
          in_seg = false;
        }
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += fmt_coord(X(s.x[i])) + "," + fmt_coord(Y(s.y[i]));
      in_seg = true;
    }
    os << pts << "\"/>\n";
    os << "<line x1=\"" << R - 150 << "\" y1=\"" << legend_y << "\" x2=\""
       << R - 124 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
       << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << R - 118 << "\" y=\"" << legend_y + 4
       << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">"
       << xml_escape(s.label) << "</text>\n";
    legend_y += 18;
  }
  os << "</svg>\n";
  write_file_atomic(path, os.str());
}

void write_svg_heatmap(const std::string& path, const std::string& title,
                       const WaveFunction2D& w, int max_cells) {
  const int n = w.grid.n;
  const int factor = std::max(1, (n + max_cells - 1) / max_cells);
  const int cells = n / factor;

  std::vector<double> dens(static_cast<size_t>(cells) * cells, 0.0);
  double vmax = 0.0;
  for (int cj = 0; cj < cells; ++cj)
    for (int ci = 0; ci < cells; ++ci) {
      double acc = 0.0;
      for (int j = cj * factor; j < (cj + 1) * factor; ++j)
        for (int i = ci * factor; i < (ci + 1) * factor; ++i)
          acc += std::norm(w.amp[w.idx(i, j)]);
      acc /= factor * factor;
      dens[static_cast<size_t>(cj) * cells + ci] = acc;
      vmax = std::max(vmax, acc);
    }
  if (vmax <= 0) vmax = 1.0;

  const Ramp3 ramp{{13, 204, 240}, {8, 71, 249}, {135, 120, 33}};
  const double W = 640, H = 700, L = 60, T = 46;
  const double side = 520;
  const double cw = side / cells;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
     << "\">\n<rect width=\"" << W << "\" height=\"" << H
     << "\" fill=\"#ffffff\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << xml_escape(title) << "</text>\n";
  for (int cj = 0; cj < cells; ++cj)
    for (int ci = 0; ci < cells; ++ci) {
      const double v = dens[static_cast<size_t>(cj) * cells + ci] / vmax;
      // y grows upward in physical coordinates, downward in SVG
      os << "<rect x=\"" << fmt_coord(L + ci * cw) << "\" y=\""
         << fmt_coord(T + (cells - 1 - cj) * cw) << "\" width=\""
         << fmt_coord(cw + 0.5) << "\" height=\"" << fmt_coord(cw + 0.5)
         << "\" fill=\"" << ramp.at(v) << "\"/>\n";
    }
  os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n"
     << "<text x=\"" << L << "\" y=\"" << T + side + 20 << "\">x: "
     << fmt_tick(w.grid.x_min) << " to " << fmt_tick(w.grid.x_max)
     << "</text>\n"
     << "<text x=\"" << L << "\" y=\"" << T + side + 40 << "\">y: "
     << fmt_tick(w.grid.y_min) << " to " << fmt_tick(w.grid.y_max)
     << "</text>\n"
     << "<text x=\"" << L << "\" y=\"" << T + side + 60 << "\">t = "
     << fmt_tick(w.time) << ", peak density " << fmt_tick(vmax)
     << "</text>\n</g>\n</svg>\n";
  write_file_atomic(path, os.str());
}

FixtureStatus check_fixture(const std::string& dir, const std::string& name,
                            const std::string& content) {
  fs::create_directories(dir);
  const fs::path p = fs::path(dir) / name;
  if (!fs::exists(p)) {
    write_file_atomic(p.string(), content);
    return FixtureStatus::created;
  }
  return read_file(p.string()) == content ? FixtureStatus::matched
                                          : FixtureStatus::mismatched;
}

} // namespace ncgw
