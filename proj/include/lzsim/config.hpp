#pragma once

#include "lzsim/level_diagram.hpp"
#include "lzsim/sweep.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lzsim {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// GHz (ordinary frequency) -> rad/ns (angular frequency).
constexpr double ghz_to_rad_per_ns(double ghz) noexcept { return kTwoPi * ghz; }
constexpr double rad_per_ns_to_ghz(double w) noexcept { return w / kTwoPi; }

/// Malformed or invalid configuration. where() is a JSON field path such as
/// "device.delta_ghz[0][1]" or a "line:column" position for syntax errors.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string where, const std::string &what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

  const std::string &where() const noexcept { return where_; }

private:
  std::string where_;
};

/// Device model in internal units (rad/ns).
struct DeviceConfig {
  LevelDiagram diagram;
  RelaxationSpec relax;
  double gamma2 = 1.0;
  /// Drive energy amplitude per mPhi0 of flux amplitude, rad/ns per mPhi0.
  double drive_slope = 1.0;
};

struct Config {
  DeviceConfig device;
  SweepSpec sweep;
  /// The document as understood, defaults filled in, in input (GHz) units.
  nlohmann::json echo;
};

Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path &path);

/// Pretty-printed echo; parse_config(dump_config(c)) reproduces c exactly.
std::string dump_config(const Config &config);

/// "pl", "pr" or "level:K".
Observable parse_observable(std::string_view text);
std::string to_string(const Observable &obs);

} // namespace lzsim
