#pragma once

#include "lzsim/sweep.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace lzsim {

/// %.17g: enough digits to round-trip any binary64 value.
std::string format_number(double v);

/// Transposed map as CSV: header "# flux_mPhi0,<amp_0>,<amp_1>,...", then
/// one row per flux value (ascending) holding the values for every amplitude.
void write_csv(const PopulationMap &map, std::ostream &out);
void write_csv(const PopulationMap &map, const std::filesystem::path &path);

/// Inverse of write_csv (values, flux and amplitude axes only).
PopulationMap read_csv(const std::filesystem::path &path);

/// Plain PGM (P2), maxval 255, width = flux count, height = amplitude count,
/// largest amplitude on the first row. pixel = floor(v*255 + 0.5) clamped to
/// [0, 255]; NaN maps to 0.
void write_pgm(const PopulationMap &map, std::ostream &out);
void write_pgm(const PopulationMap &map, const std::filesystem::path &path);

int pgm_pixel(double value);

/// JSON run record: tool version, UTC timestamp, axes, failures and the
/// config echo stored in map.metadata.
void write_manifest(const PopulationMap &map, const std::filesystem::path &path);

} // namespace lzsim
