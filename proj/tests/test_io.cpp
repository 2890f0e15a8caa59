#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "ncgw/io.hpp"

using namespace ncgw;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path()
           / ("ncgw_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str(const std::string& name) const {
    return (path / name).string();
  }
};

} // namespace

TEST_SUITE("io") {

TEST_CASE("hash primitives") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hex64(0xaf63dc4c8601ec8cull) == "af63dc4c8601ec8c");
  CHECK(hex64(0) == "0000000000000000");
}

TEST_CASE("configuration round trip and hashing") {
  RunConfig c;
  c.params.eta = 0.25;
  c.times.samples = 33;
  const std::string text = c.canonical_text();
  const RunConfig back = RunConfig::from_json_text(text);
  CHECK(back.canonical_text() == text);
  CHECK(back.config_hash() == c.config_hash());
  CHECK(back.params.eta == 0.25);
  CHECK(back.times.samples == 33);

  RunConfig other = c;
  other.params.eta = 0.26;
  CHECK(other.config_hash() != c.config_hash());
}

TEST_CASE("strict parsing") {
  CHECK_THROWS_AS(RunConfig::from_json_text("{\"typo\": 1}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text("{\"params\": {\"mass\": 1}}"),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text("{\"params\": {\"m\": \"x\"}}"),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text("[1,2]"), ConfigError);
  CHECK_NOTHROW(RunConfig::from_json_text("{}"));
}

TEST_CASE("config validation bounds") {
  RunConfig c;
  c.grid.n = 100;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.grid.padding_sigmas = 4.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.times.samples = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.times.t1 = c.times.t0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.packet_nodes = 8;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("environment override for the fixtures directory") {
  TempDir tmp;
  const std::string cfg = tmp.str("c.json");
  write_file_atomic(cfg, "{\"fixtures_dir\": \"from_file\"}\n");
  ::setenv("NCGW_FIXTURES", "from_env", 1);
  CHECK(RunConfig::load(cfg).fixtures_dir == "from_env");
  ::unsetenv("NCGW_FIXTURES");
  CHECK(RunConfig::load(cfg).fixtures_dir == "from_file");
}

TEST_CASE("sample times are inclusive and uniform") {
  TimeGrid t;
  t.t0 = 1.0;
  t.t1 = 3.0;
  t.samples = 5;
  const auto ts = t.sample_times();
  REQUIRE(ts.size() == 5);
  CHECK(ts.front() == 1.0);
  CHECK(ts.back() == 3.0);
  CHECK(ts[2] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("csv rendering") {
  const std::string text = render_csv({"t", "v"}, {{0.0, 1.5}, {1.0, -2.0}},
                                      "deadbeefdeadbeef");
  CHECK(text
        == "# config deadbeefdeadbeef\nt,v\n0,1.5\n1,-2\n");
  CHECK_THROWS_AS(render_csv({"t"}, {{1.0, 2.0}}, "h"), ConfigError);
}

TEST_CASE("atomic write leaves no temporary behind") {
  TempDir tmp;
  const std::string p = tmp.str("out.txt");
  write_file_atomic(p, "payload");
  CHECK(read_file(p) == "payload");
  CHECK_FALSE(fs::exists(p + ".tmp"));
  write_file_atomic(p, "payload2");
  CHECK(read_file(p) == "payload2");
}

TEST_CASE("wavefunction dump round trip") {
  TempDir tmp;
  GridSpec g;
  g.n = 64;
  g.x_min = -3.0;
  g.x_max = 3.0;
  g.y_min = -2.0;
  g.y_max = 2.0;
  WaveFunction2D w = make_wavefunction(g, 1.25);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      w.amp[w.idx(i, j)] = cplx(std::sin(0.1 * i), std::cos(0.2 * j));

  const std::string base = tmp.str("wf");
  write_wavefunction(base, w);
  const WaveFunction2D r = read_wavefunction(base);
  CHECK(r.grid.n == 64);
  CHECK(r.grid.x_min == -3.0);
  CHECK(r.time == 1.25);
  double dev = 0.0;
  for (size_t k = 0; k < w.amp.size(); ++k)
    dev = std::max(dev, std::abs(w.amp[k] - r.amp[k]));
  CHECK(dev == 0.0);
}

TEST_CASE("svg writers emit well-formed documents") {
  TempDir tmp;
  Series s{"series", "#1f77b4", {0.0, 1.0, 2.0, 3.0},
           {1.0, std::nan(""), 2.0, 0.5}};
  const std::string lp = tmp.str("lines.svg");
  write_svg_lines(lp, "title", "t", "value", {s});
  const std::string lines = read_file(lp);
  CHECK(lines.find("<svg") == 0);
  CHECK(lines.rfind("</svg>\n") == lines.size() - 7);
  CHECK(lines.find("nan") == std::string::npos);

  GridSpec g;
  g.n = 64;
  g.x_min = -1.0;
  g.x_max = 1.0;
  g.y_min = -1.0;
  g.y_max = 1.0;
  WaveFunction2D w = make_wavefunction(g, 0.0);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const double x = g.x(i), y = g.y(j);
      w.amp[w.idx(i, j)] = std::exp(-4.0 * (x * x + y * y));
    }
  const std::string hp = tmp.str("heat.svg");
  write_svg_heatmap(hp, "density", w, 32);
  const std::string heat = read_file(hp);
  CHECK(heat.find("<svg") == 0);
  CHECK(heat.find("<rect") != std::string::npos);
}

TEST_CASE("fixture lifecycle") {
  TempDir tmp;
  const std::string dir = tmp.str("fx");
  CHECK(check_fixture(dir, "a.csv", "1,2\n") == FixtureStatus::created);
  CHECK(check_fixture(dir, "a.csv", "1,2\n") == FixtureStatus::matched);
  CHECK(check_fixture(dir, "a.csv", "1,3\n") == FixtureStatus::mismatched);
}

} // TEST_SUITE
