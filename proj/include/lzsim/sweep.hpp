#pragma once

#include "lzsim/level_diagram.hpp"
#include "lzsim/master_equation.hpp"

#include <atomic>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace lzsim {

/// Evenly spaced closed interval [min, max] with count points.
struct Axis {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  /// Point k. Computed as (min*(count-1-k) + max*k)/(count-1), so an axis with
  /// min == -max is exactly antisymmetric about its centre.
  double value(std::size_t k) const;
  std::vector<double> values() const;
};

struct Observable {
  enum class Kind { LeftWell, RightWell, Level };
  Kind kind = Kind::LeftWell;
  /// State index in [L0.., R0..] order when kind == Level.
  std::size_t level = 0;

  static Observable left_well() { return {Kind::LeftWell, 0}; }
  static Observable right_well() { return {Kind::RightWell, 0}; }
  static Observable state(std::size_t k) { return {Kind::Level, k}; }

  bool operator==(const Observable &) const = default;
};

/// Grid over flux detuning (mPhi0) and flux-drive amplitude (mPhi0).
struct SweepSpec {
  Axis flux_axis;
  Axis amp_axis;
  /// Drive angular frequency, rad/ns.
  double omega = 1.0;
  /// Energy amplitude per mPhi0 of flux drive, rad/ns per mPhi0.
  double drive_slope = 1.0;
  Observable observable;
};

struct CellFailure {
  std::size_t amp_index = 0;
  std::size_t flux_index = 0;
  std::string message;
};

/// values is row-major with one row per amplitude and one column per flux
/// value. Failed cells hold NaN and are listed in failures.
struct PopulationMap {
  std::vector<double> flux_values;
  std::vector<double> amp_values;
  std::vector<double> values;
  std::vector<CellFailure> failures;
  /// Serialized description of the inputs, filled in by the caller.
  std::string metadata;

  std::size_t rows() const noexcept { return amp_values.size(); }
  std::size_t cols() const noexcept { return flux_values.size(); }
  double at(std::size_t amp, std::size_t flux) const { return values[amp * cols() + flux]; }
};

/// Observable of one steady state.
double observe(const PopulationVector &p, const LevelDiagram &diagram, const Observable &obs);

/// A sweep that can be queried for progress from another thread while run()
/// executes. Rows are split into contiguous blocks, one per worker, and every
/// cell writes only its own slot, so the result does not depend on the thread
/// count.
class SweepRun {
public:
  /// Invoked by the worker that finished an amplitude row.
  using RowCallback = std::function<void(std::size_t row)>;

  SweepRun(LevelDiagram diagram, RelaxationSpec relax, double gamma2, SweepSpec spec);

  /// threads == 0 selects std::thread::hardware_concurrency().
  PopulationMap run(unsigned threads = 0, const RowCallback &on_row = {});

  /// Fraction of rows completed, in [0, 1]; never decreases during a run.
  double progress() const noexcept;

  const SweepSpec &spec() const noexcept { return spec_; }

private:
  void run_rows(std::size_t begin, std::size_t end, PopulationMap &map,
                std::vector<std::vector<CellFailure>> &failures, const RowCallback &on_row);

  LevelDiagram diagram_;
  RelaxationSpec relax_;
  double gamma2_;
  SweepSpec spec_;
  std::atomic<std::size_t> rows_done_{0};
};

inline double progress_report(const SweepRun &run) { return run.progress(); }

PopulationMap run_sweep(const LevelDiagram &diagram, const RelaxationSpec &relax, double gamma2,
                        const SweepSpec &spec, unsigned threads = 0);

} // namespace lzsim
