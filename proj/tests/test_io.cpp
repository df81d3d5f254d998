#include "lzsim/config.hpp"
#include "lzsim/output.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace lzsim;
namespace fs = std::filesystem;

namespace {

const char *kMinimal = R"({
  "device": {
    "left": {"slope_ghz_per_mphi0": 1.0, "offsets_ghz": [0.0]},
    "right": {"slope_ghz_per_mphi0": -1.0, "offsets_ghz": [0.0]},
    "delta_ghz": [[0.1]],
    "gamma2_ghz": 0.5
  },
  "sweep": {
    "flux_mphi0": {"min": -1, "max": 1},
    "amp_mphi0": {"min": 0, "max": 2, "count": 5},
    "drive_freq_ghz": 0.16
  }
})";

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path temp_path(const std::string &name) {
  return fs::temp_directory_path() / ("lzsim_test_" + name);
}

std::string config_error_where(const std::string &text) {
  try {
    parse_config(text);
  } catch (const ConfigError &e) {
    return e.where();
  }
  return "<no error>";
}

PopulationMap tiny_map(std::vector<double> flux, std::vector<double> amp, std::vector<double> v) {
  PopulationMap m;
  m.flux_values = std::move(flux);
  m.amp_values = std::move(amp);
  m.values = std::move(v);
  return m;
}

} // namespace

TEST_CASE("load_config: bundled demo device") {
  const Config c = load_config(LZSIM_DATA_DIR "/demo_device.json");
  CHECK(validate(c.device.diagram, c.device.relax).empty());
  CHECK(c.device.diagram.left.count() == 3);
  CHECK(c.device.diagram.right.count() == 3);
  CHECK(c.device.relax.interwell_mode == InterwellMode::Downhill);
  CHECK(c.sweep.flux_axis.count == 401);
  CHECK(c.sweep.amp_axis.count == 401);
  CHECK(c.sweep.omega == ghz_to_rad_per_ns(0.16));
  // Drive slope defaults to the slope of epsilon against flux.
  CHECK(c.device.drive_slope == doctest::Approx(ghz_to_rad_per_ns(3.0)));
}

TEST_CASE("load_config: GHz to rad/ns conversion") {
  const Config c = parse_config(kMinimal);
  // gamma2/2pi = 0.5 GHz -> gamma2 = pi rad/ns.
  CHECK(c.device.gamma2 == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(c.device.diagram.delta(0, 0) == doctest::Approx(2 * M_PI * 0.1).epsilon(1e-15));
  CHECK(c.device.diagram.left.slope == doctest::Approx(2 * M_PI).epsilon(1e-15));
  CHECK(c.sweep.omega == doctest::Approx(2 * M_PI * 0.16).epsilon(1e-15));
  CHECK(c.sweep.flux_axis.count == 401);
  CHECK(c.sweep.amp_axis.count == 5);
  CHECK(c.sweep.observable == Observable::left_well());
  CHECK(c.device.relax.intra_left.rows() == 1);
  CHECK(c.echo["device"]["relaxation"]["interwell_mode"] == "fixed");
}

TEST_CASE("load_config: schema violations name the field") {
  std::string text = kMinimal;
  text.replace(text.find("[[0.1]]"), 7, "[[-0.1]]");
  CHECK(config_error_where(text) == "device.delta_ghz[0][0]");

  text = kMinimal;
  text.replace(text.find("\"gamma2_ghz\""), 12, "\"gamma_two\"");
  CHECK(config_error_where(text) == "device.gamma_two");

  text = kMinimal;
  text.replace(text.find("0.16"), 4, "\"fast\"");
  CHECK(config_error_where(text) == "sweep.drive_freq_ghz");

  text = kMinimal;
  text.replace(text.find("\"count\": 5"), 10, "\"count\": 0");
  CHECK(config_error_where(text) == "sweep.amp_mphi0.count");

  text = kMinimal;
  text.replace(text.find("-1.0"), 4, "1.0");
  CHECK(config_error_where(text) == "device.right.slope");

  CHECK(config_error_where(R"({"device": {}, "sweep": {}})") == "device.left");
}

TEST_CASE("load_config: syntax errors carry line and column") {
  const std::string where = config_error_where("{\n  \"device\": [1,\n  }\n");
  CHECK(where == "3:3");
  CHECK_THROWS_AS(load_config("/nonexistent/lzsim.json"), ConfigError);
}

TEST_CASE("property: config round trip") {
  for (const std::string text : {std::string(kMinimal), read_file(LZSIM_DATA_DIR "/demo_device.json")}) {
    const Config a = parse_config(text);
    const Config b = parse_config(dump_config(a));
    CHECK(a.device.diagram.left.offsets == b.device.diagram.left.offsets);
    CHECK(a.device.diagram.right.offsets == b.device.diagram.right.offsets);
    CHECK(a.device.diagram.left.slope == b.device.diagram.left.slope);
    CHECK(a.device.diagram.delta == b.device.diagram.delta);
    CHECK(a.device.relax.intra_left == b.device.relax.intra_left);
    CHECK(a.device.relax.inter_rl == b.device.relax.inter_rl);
    CHECK(a.device.gamma2 == b.device.gamma2);
    CHECK(a.device.drive_slope == b.device.drive_slope);
    CHECK(a.sweep.omega == b.sweep.omega);
    CHECK(a.sweep.flux_axis.count == b.sweep.flux_axis.count);
    CHECK(dump_config(a) == dump_config(b));
  }
}

TEST_CASE("parse_observable") {
  CHECK(parse_observable("pl") == Observable::left_well());
  CHECK(parse_observable("pr") == Observable::right_well());
  CHECK(parse_observable("level:4") == Observable::state(4));
  CHECK_THROWS_AS(parse_observable("level:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_observable("level:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_observable("PL"), std::invalid_argument);
  CHECK(to_string(Observable::state(2)) == "level:2");
}

TEST_CASE("write_csv: one cell") {
  std::ostringstream out;
  write_csv(tiny_map({0.25}, {1.0}, {0.5}), out);
  CHECK(out.str() == "# flux_mPhi0,1\n0.25,0.5\n");
}

TEST_CASE("write_csv: layout and bitwise round trip") {
  // 2 amplitudes x 3 flux values.
  auto map = tiny_map({-1.0, 0.0, 1.0}, {0.0, 0.1}, {0.1, 1.0 / 3.0, 2.0 / 3.0,  //
                                                      0.7, std::nextafter(0.2, 1.0), 1e-300});
  map.values[1] = std::numeric_limits<double>::quiet_NaN();
  const auto path = temp_path("roundtrip.csv");
  write_csv(map, path);

  const std::string text = read_file(path);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.rfind("# flux_mPhi0,0,0.10000000000000001\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);

  const auto back = read_csv(path);
  CHECK(back.flux_values == map.flux_values);
  CHECK(back.amp_values == map.amp_values);
  REQUIRE(back.values.size() == map.values.size());
  for (std::size_t k = 0; k < map.values.size(); ++k) {
    if (std::isnan(map.values[k]))
      CHECK(std::isnan(back.values[k]));
    else
      CHECK(back.values[k] == map.values[k]);
  }
  fs::remove(path);
}

TEST_CASE("pgm_pixel rounding") {
  CHECK(pgm_pixel(1.0) == 255);
  CHECK(pgm_pixel(0.5) == 128);
  CHECK(pgm_pixel(0.0) == 0);
  CHECK(pgm_pixel(std::numeric_limits<double>::quiet_NaN()) == 0);
  CHECK(pgm_pixel(-1e-9) == 0);
  CHECK(pgm_pixel(1.0 + 1e-9) == 255);
  CHECK(pgm_pixel(2.0 / 255.0) == 2);
}

namespace {

// Strict plain-PGM reader: magic, whitespace-separated header, maxval, exactly
// width*height samples in range, nothing after.
struct Pgm {
  std::size_t width = 0, height = 0;
  std::vector<int> pixels;
};

Pgm parse_pgm_strict(const std::string &text) {
  std::istringstream in(text);
  std::string magic;
  in >> magic;
  if (magic != "P2")
    throw std::runtime_error("bad magic");
  Pgm img;
  int maxval = 0;
  if (!(in >> img.width >> img.height >> maxval) || maxval != 255)
    throw std::runtime_error("bad header");
  int v = 0;
  while (in >> v) {
    if (v < 0 || v > maxval)
      throw std::runtime_error("sample out of range");
    img.pixels.push_back(v);
  }
  if (!in.eof())
    throw std::runtime_error("garbage in raster");
  if (img.pixels.size() != img.width * img.height)
    throw std::runtime_error("wrong sample count");
  return img;
}

} // namespace

TEST_CASE("write_pgm: conformance and row order") {
  auto map = tiny_map({-1.0, 0.0, 1.0}, {0.0, 0.5}, {0.0, 0.5, 1.0,  //
                                                     std::numeric_limits<double>::quiet_NaN(), 0.25, 0.75});
  std::ostringstream out;
  write_pgm(map, out);
  const Pgm img = parse_pgm_strict(out.str());
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  // Largest amplitude first.
  CHECK(img.pixels == std::vector<int>{0, 64, 191, 0, 128, 255});
  CHECK(out.str().rfind("P2\n3 2\n255\n", 0) == 0);
}

TEST_CASE("write_manifest") {
  auto map = tiny_map({0.0, 1.0}, {0.5}, {0.2, std::numeric_limits<double>::quiet_NaN()});
  map.failures.push_back({0, 1, "boom"});
  map.metadata = R"({"sweep": {"drive_freq_ghz": 0.16}})";
  const auto path = temp_path("manifest.json");
  write_manifest(map, path);
  const auto doc = nlohmann::json::parse(read_file(path));
  CHECK(doc["tool"] == "lzsim");
  CHECK(doc["failures"].size() == 1);
  CHECK(doc["failures"][0]["flux_mphi0"] == 1.0);
  CHECK(doc["config"]["sweep"]["drive_freq_ghz"] == 0.16);
  CHECK(doc["axes"]["flux_mphi0"]["count"] == 2);
  CHECK(doc.contains("timestamp"));
  fs::remove(path);
}
