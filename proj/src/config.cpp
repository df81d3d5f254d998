#include "lzsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace lzsim {

using nlohmann::json;

namespace {

std::string index_path(const std::string &path, std::size_t k) {
  return path + "[" + std::to_string(k) + "]";
}

std::string key_path(const std::string &path, const std::string &key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown(const json &obj, const std::string &path,
                    std::initializer_list<const char *> allowed) {
  if (!obj.is_object())
    throw ConfigError(path, "expected an object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto &item : obj.items())
    if (!known.count(item.key()))
      throw ConfigError(key_path(path, item.key()), "unknown key");
}

const json &require(const json &obj, const std::string &path, const char *key) {
  const auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigError(key_path(path, key), "missing required field");
  return *it;
}

double number(const json &v, const std::string &path) {
  if (!v.is_number())
    throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d))
    throw ConfigError(path, "must be finite");
  return d;
}

double nonnegative(const json &v, const std::string &path) {
  const double d = number(v, path);
  if (d < 0.0)
    throw ConfigError(path, "must be >= 0, got " + v.dump());
  return d;
}

double positive(const json &v, const std::string &path) {
  const double d = number(v, path);
  if (!(d > 0.0))
    throw ConfigError(path, "must be > 0, got " + v.dump());
  return d;
}

std::size_t count(const json &v, const std::string &path) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ConfigError(path, "expected an integer >= 1");
  return static_cast<std::size_t>(v.get<long long>());
}

std::vector<double> ghz_vector(const json &v, const std::string &path, bool nonneg) {
  if (!v.is_array())
    throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string p = index_path(path, k);
    out.push_back(ghz_to_rad_per_ns(nonneg ? nonnegative(v[k], p) : number(v[k], p)));
  }
  return out;
}

RateTable ghz_table(const json &v, const std::string &path) {
  if (!v.is_array())
    throw ConfigError(path, "expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < v.size(); ++r) {
    rows.push_back(ghz_vector(v[r], index_path(path, r), true));
    if (rows.back().size() != rows.front().size())
      throw ConfigError(index_path(path, r), "row length differs from row 0");
  }
  return RateTable(rows);
}

json zero_table(std::size_t rows, std::size_t cols) {
  return json(std::vector<std::vector<double>>(rows, std::vector<double>(cols, 0.0)));
}

WellLevels read_well(const json &v, const std::string &path) {
  reject_unknown(v, path, {"slope_ghz_per_mphi0", "offsets_ghz"});
  WellLevels well;
  const std::string sp = key_path(path, "slope_ghz_per_mphi0");
  well.slope = ghz_to_rad_per_ns(number(require(v, path, "slope_ghz_per_mphi0"), sp));
  well.offsets = ghz_vector(require(v, path, "offsets_ghz"), key_path(path, "offsets_ghz"), false);
  return well;
}

Axis read_axis(json &v, const std::string &path) {
  reject_unknown(v, path, {"min", "max", "count"});
  Axis axis;
  axis.min = number(require(v, path, "min"), key_path(path, "min"));
  axis.max = number(require(v, path, "max"), key_path(path, "max"));
  if (!v.contains("count"))
    v["count"] = 401;
  axis.count = count(v["count"], key_path(path, "count"));
  if (axis.min > axis.max)
    throw ConfigError(path, "min must not exceed max");
  return axis;
}

DeviceConfig read_device(json &v) {
  const std::string path = "device";
  reject_unknown(v, path,
                 {"left", "right", "delta_ghz", "gamma2_ghz", "drive_slope_ghz_per_mphi0",
                  "relaxation"});
  DeviceConfig dev;
  dev.diagram.left = read_well(require(v, path, "left"), "device.left");
  dev.diagram.right = read_well(require(v, path, "right"), "device.right");
  dev.diagram.delta = ghz_table(require(v, path, "delta_ghz"), "device.delta_ghz");
  dev.gamma2 = ghz_to_rad_per_ns(positive(require(v, path, "gamma2_ghz"), "device.gamma2_ghz"));


  const std::size_t nl = dev.diagram.left.count();
  const std::size_t nr = dev.diagram.right.count();
  if (!v.contains("relaxation"))
    v["relaxation"] = json::object();
  json &rv = v["relaxation"];
  const std::string rp = "device.relaxation";
  reject_unknown(rv, rp,
                 {"intra_left_ghz", "intra_right_ghz", "inter_lr_ghz", "inter_rl_ghz",
                  "interwell_mode"});
  const auto table = [&](const char *key, std::size_t rows, std::size_t cols) {
    if (!rv.contains(key))
      rv[key] = zero_table(rows, cols);
    return ghz_table(rv[key], key_path(rp, key));
  };
  dev.relax.intra_left = table("intra_left_ghz", nl, nl);
  dev.relax.intra_right = table("intra_right_ghz", nr, nr);
  dev.relax.inter_lr = table("inter_lr_ghz", nl, nr);
  dev.relax.inter_rl = table("inter_rl_ghz", nr, nl);

  if (!rv.contains("interwell_mode"))
    rv["interwell_mode"] = "fixed";
  const json &mode = rv["interwell_mode"];
  if (mode == "fixed")
    dev.relax.interwell_mode = InterwellMode::Fixed;
  else if (mode == "downhill")
    dev.relax.interwell_mode = InterwellMode::Downhill;
  else
    throw ConfigError(key_path(rp, "interwell_mode"), "expected \"fixed\" or \"downhill\"");

  static const std::pair<const char *, const char *> renames[] = {
      {"left", "device.left"},
      {"right", "device.right"},
      {"delta", "device.delta_ghz"},
      {"relaxation.intra_left", "device.relaxation.intra_left_ghz"},
      {"relaxation.intra_right", "device.relaxation.intra_right_ghz"},
      {"relaxation.inter_lr", "device.relaxation.inter_lr_ghz"},
      {"relaxation.inter_rl", "device.relaxation.inter_rl_ghz"},
  };
  const auto violations = validate(dev.diagram, dev.relax);
  if (!violations.empty()) {
    std::string where = violations.front().field;
    for (const auto &[from, to] : renames)
      if (where.rfind(from, 0) == 0) {
        where = to + where.substr(std::string(from).size());
        break;
      }
    std::string what = violations.front().message;
    if (violations.size() > 1)
      what += " (and " + std::to_string(violations.size() - 1) + " more)";
    throw ConfigError(where, what);
  }

  if (!v.contains("drive_slope_ghz_per_mphi0"))
    v["drive_slope_ghz_per_mphi0"] =
        std::abs(v["left"]["slope_ghz_per_mphi0"].get<double>() -
                 v["right"]["slope_ghz_per_mphi0"].get<double>());
  dev.drive_slope = ghz_to_rad_per_ns(
      positive(v["drive_slope_ghz_per_mphi0"], "device.drive_slope_ghz_per_mphi0"));
  return dev;
}

SweepSpec read_sweep(json &v, const DeviceConfig &dev) {
  const std::string path = "sweep";
  reject_unknown(v, path, {"flux_mphi0", "amp_mphi0", "drive_freq_ghz", "observable"});
  SweepSpec spec;
  if (!v.contains("flux_mphi0"))
    throw ConfigError("sweep.flux_mphi0", "missing required field");
  spec.flux_axis = read_axis(v["flux_mphi0"], "sweep.flux_mphi0");
  if (!v.contains("amp_mphi0"))
    throw ConfigError("sweep.amp_mphi0", "missing required field");
  spec.amp_axis = read_axis(v["amp_mphi0"], "sweep.amp_mphi0");
  if (spec.amp_axis.min < 0.0)
    throw ConfigError("sweep.amp_mphi0.min", "must be >= 0");
  spec.omega =
      ghz_to_rad_per_ns(positive(require(v, path, "drive_freq_ghz"), "sweep.drive_freq_ghz"));
  spec.drive_slope = dev.drive_slope;
  if (!v.contains("observable"))
    v["observable"] = "pl";
  if (!v["observable"].is_string())
    throw ConfigError("sweep.observable", "expected a string");
  try {
    spec.observable = parse_observable(v["observable"].get<std::string>());
  } catch (const std::invalid_argument &e) {
    throw ConfigError("sweep.observable", e.what());
  }
  if (spec.observable.kind == Observable::Kind::Level &&
      spec.observable.level >= dev.diagram.state_count())
    throw ConfigError("sweep.observable", "level index out of range");
  return spec;
}

// nlohmann reports a byte offset; turn it into line:column.
std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

} // namespace

Observable parse_observable(std::string_view text) {
  if (text == "pl")
    return Observable::left_well();
  if (text == "pr")
    return Observable::right_well();
  constexpr std::string_view prefix = "level:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view digits = text.substr(prefix.size());
    std::size_t k = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && end == digits.data() + digits.size() && !digits.empty())
      return Observable::state(k);
  }
  throw std::invalid_argument("observable must be pl, pr or level:K, got \"" +
                              std::string(text) + "\"");
}

std::string to_string(const Observable &obs) {
  switch (obs.kind) {
  case Observable::Kind::LeftWell:
    return "pl";
  case Observable::Kind::RightWell:
    return "pr";
  case Observable::Kind::Level:
    return "level:" + std::to_string(obs.level);
  }
  return {};
}

Config parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw ConfigError(position(text, e.byte), std::string("parse error: ") + e.what());
  }
  reject_unknown(doc, "", {"device", "sweep"});
  if (!doc.contains("device"))
    throw ConfigError("device", "missing required field");
  if (!doc.contains("sweep"))
    throw ConfigError("sweep", "missing required field");

  Config config;
  config.device = read_device(doc["device"]);
  config.sweep = read_sweep(doc["sweep"], config.device);
  config.echo = std::move(doc);
  return config;
}

Config load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string dump_config(const Config &config) { return config.echo.dump(2) + "\n"; }

} // namespace lzsim
