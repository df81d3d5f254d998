#include "lzsim/sweep.hpp"

#include "lzsim/errors.hpp"

#include <cmath>
#include <limits>
#include <thread>

namespace lzsim {

double Axis::value(std::size_t k) const {
  if (count <= 1)
    return min;
  const double hi = static_cast<double>(k);
  const double lo = static_cast<double>(count - 1 - k);
  return (min * lo + max * hi) / static_cast<double>(count - 1);
}

std::vector<double> Axis::values() const {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = value(k);
  return out;
}

double observe(const PopulationVector &p, const LevelDiagram &diagram, const Observable &obs) {
  switch (obs.kind) {
  case Observable::Kind::LeftWell:
    return well_populations(p, diagram).left;
  case Observable::Kind::RightWell:
    return well_populations(p, diagram).right;
  case Observable::Kind::Level:
    if (obs.level >= static_cast<std::size_t>(p.size()))
      throw ParameterError("observable level index out of range");
    return p(static_cast<Eigen::Index>(obs.level));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

void check_spec(const SweepSpec &spec, const LevelDiagram &diagram) {
  for (const Axis *axis : {&spec.flux_axis, &spec.amp_axis}) {
    if (axis->count < 1 || !(axis->min <= axis->max) || !std::isfinite(axis->min) ||
        !std::isfinite(axis->max))
      throw ParameterError("sweep axis needs finite min <= max and count >= 1");
  }
  if (spec.amp_axis.min < 0.0)
    throw ParameterError("sweep amplitude axis must be nonnegative");
  if (!(spec.omega > 0.0) || !std::isfinite(spec.omega))
    throw ParameterError("sweep drive frequency must be positive");
  if (!std::isfinite(spec.drive_slope))
    throw ParameterError("sweep drive slope must be finite");
  if (spec.observable.kind == Observable::Kind::Level &&
      spec.observable.level >= diagram.state_count())
    throw ParameterError("observable level index out of range");
}

} // namespace

SweepRun::SweepRun(LevelDiagram diagram, RelaxationSpec relax, double gamma2, SweepSpec spec)
    : diagram_(std::move(diagram)), relax_(std::move(relax)), gamma2_(gamma2),
      spec_(std::move(spec)) {
  if (const auto violations = validate(diagram_, relax_); !violations.empty())
    throw ParameterError("invalid device: " + violations.front().field + ": " +
                         violations.front().message);
  if (!(gamma2_ > 0.0) || !std::isfinite(gamma2_))
    throw DomainError("dephasing rate gamma2 must be positive");
  check_spec(spec_, diagram_);
}

double SweepRun::progress() const noexcept {
  const std::size_t total = spec_.amp_axis.count;
  return static_cast<double>(rows_done_.load(std::memory_order_acquire)) /
         static_cast<double>(total);
}

void SweepRun::run_rows(std::size_t begin, std::size_t end, PopulationMap &map,
                        std::vector<std::vector<CellFailure>> &failures,
                        const RowCallback &on_row) {
  const std::size_t cols = map.cols();
  for (std::size_t row = begin; row < end; ++row) {
    const DriveField drive{map.amp_values[row] * std::abs(spec_.drive_slope), spec_.omega};
    double *out = map.values.data() + row * cols;
    try {
      // Shared by the whole row: x = A/omega is constant along it.
      const LzRateKernel kernel(drive);
      for (std::size_t col = 0; col < cols; ++col) {
        try {
          const RateMatrix m =
              build_rate_matrix(diagram_, relax_, gamma2_, kernel, map.flux_values[col]);
          out[col] = observe(steady_state(m), diagram_, spec_.observable);
        } catch (const std::exception &e) {
          out[col] = std::numeric_limits<double>::quiet_NaN();
          failures[row].push_back({row, col, e.what()});
        }
      }
    } catch (const std::exception &e) {
      for (std::size_t col = 0; col < cols; ++col) {
        out[col] = std::numeric_limits<double>::quiet_NaN();
        failures[row].push_back({row, col, e.what()});
      }
    }
    rows_done_.fetch_add(1, std::memory_order_acq_rel);
    if (on_row)
      on_row(row);
  }
}

PopulationMap SweepRun::run(unsigned threads, const RowCallback &on_row) {
  rows_done_.store(0, std::memory_order_release);

  PopulationMap map;
  map.flux_values = spec_.flux_axis.values();
  map.amp_values = spec_.amp_axis.values();
  map.values.assign(map.rows() * map.cols(), 0.0);
  std::vector<std::vector<CellFailure>> failures(map.rows());

  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t rows = map.rows();
  const std::size_t workers = std::min<std::size_t>(threads, rows);

  if (workers <= 1) {
    run_rows(0, rows, map, failures, on_row);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t base = rows / workers;
    const std::size_t extra = rows % workers;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t end = begin + base + (w < extra ? 1 : 0);
      pool.emplace_back([this, begin, end, &map, &failures, &on_row] {
        run_rows(begin, end, map, failures, on_row);
      });
      begin = end;
    }
  }

  for (auto &row : failures)
    for (auto &f : row)
      map.failures.push_back(std::move(f));
  if (!map.values.empty() && map.failures.size() == map.values.size())
    throw SweepError("every sweep cell failed; first: " + map.failures.front().message);
  return map;
}

PopulationMap run_sweep(const LevelDiagram &diagram, const RelaxationSpec &relax, double gamma2,
                        const SweepSpec &spec, unsigned threads) {
  SweepRun sweep(diagram, relax, gamma2, spec);
  return sweep.run(threads);
}

} // namespace lzsim
