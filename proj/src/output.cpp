#include "lzsim/output.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef LZSIM_VERSION
#define LZSIM_VERSION "unknown"
#endif

namespace lzsim {

namespace {

std::ofstream open_output(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  out.exceptions(std::ios::failbit | std::ios::badbit);
  return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
  out.flush();
  if (!out)
    throw std::ios_base::failure("write to " + path.string() + " failed");
}

double parse_number(const std::string &field) {
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size())
    throw std::runtime_error("bad number in CSV: " + field);
  return v;
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ','))
    out.push_back(field);
  return out;
}

} // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const PopulationMap &map, std::ostream &out) {
  out << "# flux_mPhi0";
  for (double a : map.amp_values)
    out << ',' << format_number(a);
  out << '\n';
  for (std::size_t f = 0; f < map.cols(); ++f) {
    out << format_number(map.flux_values[f]);
    for (std::size_t a = 0; a < map.rows(); ++a)
      out << ',' << format_number(map.at(a, f));
    out << '\n';
  }
}

void write_csv(const PopulationMap &map, const std::filesystem::path &path) {
  auto out = open_output(path);
  write_csv(map, out);
  finish(out, path);
}

PopulationMap read_csv(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::ios_base::failure("cannot open " + path.string());
  std::string line;
  const std::string prefix = "# flux_mPhi0";
  if (!std::getline(in, line) || line.rfind(prefix, 0) != 0)
    throw std::runtime_error("CSV header missing");
  PopulationMap map;
  for (const auto &field : split(line.substr(prefix.size() + (line.size() > prefix.size()))))
    map.amp_values.push_back(parse_number(field));

  std::vector<std::vector<double>> columns; // per flux value
  while (std::getline(in, line)) {
    auto fields = split(line);
    if (fields.size() != map.amp_values.size() + 1)
      throw std::runtime_error("CSV row has " + std::to_string(fields.size()) + " fields");
    map.flux_values.push_back(parse_number(fields[0]));
    std::vector<double> col;
    for (std::size_t k = 1; k < fields.size(); ++k)
      col.push_back(parse_number(fields[k]));
    columns.push_back(std::move(col));
  }
  map.values.assign(map.rows() * map.cols(), 0.0);
  for (std::size_t f = 0; f < map.cols(); ++f)
    for (std::size_t a = 0; a < map.rows(); ++a)
      map.values[a * map.cols() + f] = columns[f][a];
  return map;
}

int pgm_pixel(double value) {
  if (std::isnan(value))
    return 0;
  const double scaled = std::floor(value * 255.0 + 0.5);
  if (scaled <= 0.0)
    return 0;
  if (scaled >= 255.0)
    return 255;
  return static_cast<int>(scaled);
}

void write_pgm(const PopulationMap &map, std::ostream &out) {
  out << "P2\n" << map.cols() << ' ' << map.rows() << "\n255\n";
  for (std::size_t r = map.rows(); r-- > 0;) {
    for (std::size_t f = 0; f < map.cols(); ++f) {
      if (f)
        out << ' ';
      out << pgm_pixel(map.at(r, f));
    }
    out << '\n';
  }
}

void write_pgm(const PopulationMap &map, const std::filesystem::path &path) {
  auto out = open_output(path);
  write_pgm(map, out);
  finish(out, path);
}

void write_manifest(const PopulationMap &map, const std::filesystem::path &path) {
  using nlohmann::json;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  const auto axis = [](const std::vector<double> &v) {
    return json{{"min", v.empty() ? 0.0 : v.front()},
                {"max", v.empty() ? 0.0 : v.back()},
                {"count", v.size()}};
  };
  json failures = json::array();
  for (const auto &f : map.failures)
    failures.push_back({{"amp_index", f.amp_index},
                        {"flux_index", f.flux_index},
                        {"amp_mphi0", map.amp_values[f.amp_index]},
                        {"flux_mphi0", map.flux_values[f.flux_index]},
                        {"message", f.message}});
  json doc{{"tool", "lzsim"},
           {"version", LZSIM_VERSION},
           {"timestamp", stamp},
           {"axes", {{"flux_mphi0", axis(map.flux_values)}, {"amp_mphi0", axis(map.amp_values)}}},
           {"failures", failures},
           {"config", map.metadata.empty() ? json(nullptr) : json::parse(map.metadata)}};
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

} // namespace lzsim
