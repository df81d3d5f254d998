#include "lzsim/cli.hpp"

#include "lzsim/config.hpp"
#include "lzsim/errors.hpp"
#include "lzsim/lz_rate.hpp"
#include "lzsim/master_equation.hpp"
#include "lzsim/output.hpp"
#include "lzsim/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace lzsim {

namespace {

struct RateArgs {
  double delta_ghz = 0.0;
  double gamma2_ghz = 0.0;
  double eps_ghz = 0.0;
  double amp_ghz = 0.0;
  double freq_ghz = 0.0;
};

struct PointArgs {
  std::string config;
  double flux = 0.0;
  double amp = 0.0;
  std::optional<double> freq_ghz;
};

struct SweepArgs {
  std::string config;
  std::string out = "sweep";
  std::string format = "csv";
  unsigned threads = 0;
  std::optional<std::string> observable;
  std::optional<double> freq_ghz;
  std::optional<std::size_t> flux_count;
  std::optional<std::size_t> amp_count;
};

struct EvolveArgs {
  PointArgs point;
  double t_final = 100.0;
  std::optional<double> dt;
  std::size_t initial = 0;
  std::size_t samples = 200;
  std::string out;
};

std::string state_name(const LevelDiagram &diagram, std::size_t k) {
  const std::size_t nl = diagram.left.count();
  return k < nl ? "L" + std::to_string(k) : "R" + std::to_string(k - nl);
}

Config load_with_overrides(const std::string &path, const std::optional<double> &freq_ghz) {
  Config config = load_config(path);
  if (freq_ghz) {
    if (!(*freq_ghz > 0.0) || !std::isfinite(*freq_ghz))
      throw ParameterError("--freq-ghz must be positive");
    config.sweep.omega = ghz_to_rad_per_ns(*freq_ghz);
    config.echo["sweep"]["drive_freq_ghz"] = *freq_ghz;
  }
  return config;
}

RateMatrix point_matrix(const Config &config, const PointArgs &args) {
  if (!(args.amp >= 0.0))
    throw ParameterError("--amp must be nonnegative");
  const DriveField drive{args.amp * config.device.drive_slope, config.sweep.omega};
  return build_rate_matrix(config.device.diagram, config.device.relax, config.device.gamma2,
                           drive, args.flux);
}

int run_rate(const RateArgs &a, std::ostream &out) {
  const CrossingParams crossing{ghz_to_rad_per_ns(a.delta_ghz), ghz_to_rad_per_ns(a.gamma2_ghz)};
  const DriveField drive{ghz_to_rad_per_ns(a.amp_ghz), ghz_to_rad_per_ns(a.freq_ghz)};
  const double w = lz_rate(crossing, ghz_to_rad_per_ns(a.eps_ghz), drive);
  out << "W = " << format_number(w) << " rad/ns\n";
  out << "W/2pi = " << format_number(rad_per_ns_to_ghz(w)) << " GHz\n";
  return kExitOk;
}

int run_steady(const PointArgs &a, std::ostream &out) {
  const Config config = load_with_overrides(a.config, a.freq_ghz);
  const PopulationVector p = steady_state(point_matrix(config, a));
  const auto &diagram = config.device.diagram;
  out << "state,population\n";
  for (Eigen::Index k = 0; k < p.size(); ++k)
    out << state_name(diagram, static_cast<std::size_t>(k)) << ',' << format_number(p(k)) << '\n';
  const auto wells = well_populations(p, diagram);
  out << "P_L," << format_number(wells.left) << '\n';
  out << "P_R," << format_number(wells.right) << '\n';
  return kExitOk;
}

int run_sweep_cmd(const SweepArgs &a, std::ostream &out, std::ostream &err) {
  Config config = load_with_overrides(a.config, a.freq_ghz);
  if (a.observable) {
    config.sweep.observable = parse_observable(*a.observable);
    config.echo["sweep"]["observable"] = *a.observable;
  }
  if (a.flux_count) {
    config.sweep.flux_axis.count = *a.flux_count;
    config.echo["sweep"]["flux_mphi0"]["count"] = *a.flux_count;
  }
  if (a.amp_count) {
    config.sweep.amp_axis.count = *a.amp_count;
    config.echo["sweep"]["amp_mphi0"]["count"] = *a.amp_count;
  }

  SweepRun sweep(config.device.diagram, config.device.relax, config.device.gamma2, config.sweep);
  PopulationMap map = sweep.run(a.threads);
  map.metadata = config.echo.dump();

  std::filesystem::path stem(a.out);
  if (stem.extension() == ".csv" || stem.extension() == ".pgm")
    stem.replace_extension();
  const auto with_ext = [&](const char *ext) {
    std::filesystem::path p = stem;
    p += ext;
    return p;
  };
  if (a.format == "csv" || a.format == "both") {
    write_csv(map, with_ext(".csv"));
    out << "wrote " << with_ext(".csv").string() << '\n';
  }
  if (a.format == "pgm" || a.format == "both") {
    write_pgm(map, with_ext(".pgm"));
    out << "wrote " << with_ext(".pgm").string() << '\n';
  }
  write_manifest(map, with_ext(".manifest.json"));
  if (!map.failures.empty())
    err << "warning: " << map.failures.size() << " of " << map.values.size()
        << " cells failed (NaN); see " << with_ext(".manifest.json").string() << '\n';
  return kExitOk;
}

int run_evolve(const EvolveArgs &a, std::ostream &out) {
  const Config config = load_with_overrides(a.point.config, a.point.freq_ghz);
  const RateMatrix m = point_matrix(config, a.point);
  const auto &diagram = config.device.diagram;
  const auto n = static_cast<std::size_t>(m.size());
  if (a.initial >= n)
    throw ParameterError("--initial state index out of range");
  PopulationVector p0 = PopulationVector::Zero(m.size());
  p0(static_cast<Eigen::Index>(a.initial)) = 1.0;

  const double norm = m.norm_inf();
  const double dt = a.dt ? *a.dt : (norm > 0.0 ? 0.1 / norm : std::max(a.t_final, 1.0));
  const auto steps = static_cast<long long>(std::ceil(a.t_final / dt));
  const long long stride = std::max<long long>(1, steps / static_cast<long long>(std::max<std::size_t>(a.samples, 1)));

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary | std::ios::trunc);
    if (!file)
      throw std::ios_base::failure("cannot open " + a.out + " for writing");
  }
  std::ostream &sink_stream = a.out.empty() ? out : file;
  sink_stream << "# t_ns";
  for (std::size_t k = 0; k < n; ++k)
    sink_stream << ',' << state_name(diagram, k);
  sink_stream << ",P_L,P_R\n";

  long long step = 0;
  const auto emit = [&](double t, const PopulationVector &p) {
    sink_stream << format_number(t);
    for (Eigen::Index k = 0; k < p.size(); ++k)
      sink_stream << ',' << format_number(p(k));
    const auto wells = well_populations(p, diagram);
    sink_stream << ',' << format_number(wells.left) << ',' << format_number(wells.right) << '\n';
  };
  evolve(m, p0, a.t_final, dt, [&](double t, const PopulationVector &p) {
    if (step % stride == 0 || step == steps)
      emit(t, p);
    ++step;
  });
  if (file.is_open() && !file.flush())
    throw std::ios_base::failure("write to " + a.out + " failed");
  return kExitOk;
}

void add_point_options(CLI::App *cmd, PointArgs &a) {
  cmd->add_option("--config", a.config, "Device/sweep JSON config")->required();
  cmd->add_option("--flux", a.flux, "Flux detuning, mPhi0")->required();
  cmd->add_option("--amp", a.amp, "Flux-drive amplitude, mPhi0");
  cmd->add_option("--freq-ghz", a.freq_ghz, "Drive frequency omega/2pi in GHz (overrides config)");
}

} // namespace

int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Driven multilevel flux qubit: Landau-Zener rates and stationary populations",
               "lzsim"};
  app.require_subcommand(1);

  RateArgs rate;
  auto *rate_cmd = app.add_subcommand("rate", "Print the driven Landau-Zener rate W");
  rate_cmd->add_option("--delta-ghz", rate.delta_ghz, "Avoided-crossing gap Delta/2pi")->required();
  rate_cmd->add_option("--gamma2-ghz", rate.gamma2_ghz, "Dephasing rate Gamma2/2pi")->required();
  rate_cmd->add_option("--eps-ghz", rate.eps_ghz, "Energy detuning epsilon/2pi")->required();
  rate_cmd->add_option("--amp-ghz", rate.amp_ghz, "Drive amplitude A/2pi");
  rate_cmd->add_option("--freq-ghz", rate.freq_ghz, "Drive frequency omega/2pi")->required();

  PointArgs steady;
  auto *steady_cmd = app.add_subcommand("steady", "Print stationary populations at one point");
  add_point_options(steady_cmd, steady);

  SweepArgs sweep;
  auto *sweep_cmd = app.add_subcommand("sweep", "Population map over flux detuning x amplitude");
  sweep_cmd->add_option("--config", sweep.config, "Device/sweep JSON config")->required();
  sweep_cmd->add_option("--out", sweep.out, "Output path stem (.csv/.pgm/.manifest.json appended)");
  sweep_cmd->add_option("--format", sweep.format, "csv, pgm or both")
      ->check(CLI::IsMember({"csv", "pgm", "both"}));
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0 = auto)");
  sweep_cmd->add_option("--observable", sweep.observable, "pl, pr or level:K");
  sweep_cmd->add_option("--freq-ghz", sweep.freq_ghz, "Drive frequency omega/2pi (overrides config)");
  sweep_cmd->add_option("--flux-count", sweep.flux_count, "Override flux axis point count")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--amp-count", sweep.amp_count, "Override amplitude axis point count")
      ->check(CLI::PositiveNumber);

  EvolveArgs evolve_args;
  auto *evolve_cmd = app.add_subcommand("evolve", "Time trace of the populations (CSV)");
  add_point_options(evolve_cmd, evolve_args.point);
  evolve_cmd->add_option("--t-final", evolve_args.t_final, "Final time, ns");
  evolve_cmd->add_option("--dt", evolve_args.dt, "RK4 step, ns (default 0.1/||M||)");
  evolve_cmd->add_option("--initial", evolve_args.initial, "Initially occupied state index");
  evolve_cmd->add_option("--samples", evolve_args.samples, "Approximate number of output rows");
  evolve_cmd->add_option("--out", evolve_args.out, "Output CSV path (default stdout)");

  std::vector<const char *> argv;
  argv.push_back("lzsim");
  for (const auto &a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    if (code == 0)
      return kExitOk;
    err << app.help();
    return kExitUsage;
  }

  try {
    if (*rate_cmd)
      return run_rate(rate, out);
    if (*steady_cmd)
      return run_steady(steady, out);
    if (*sweep_cmd)
      return run_sweep_cmd(sweep, out, err);
    if (*evolve_cmd)
      return run_evolve(evolve_args, out);
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::ios_base::failure &e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError &e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::logic_error &e) {
    // DomainError, ParameterError and friends: the arguments were unusable.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

int cli_main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

} // namespace lzsim
