#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace lzsim {

/// Dense row-major table of nonnegative rates or gaps.
class RateTable {
public:
  RateTable() = default;
  RateTable(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  RateTable(std::vector<std::vector<double>> const &nested);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  bool operator==(const RateTable &) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Diabatic levels of one well: E_k(flux) = offsets[k] + slope * flux.
/// slope is in rad/ns per milli-flux-quantum; offsets in rad/ns.
struct WellLevels {
  double slope = 0.0;
  std::vector<double> offsets;

  std::size_t count() const noexcept { return offsets.size(); }
  double energy(std::size_t level, double flux) const { return offsets[level] + slope * flux; }
};

/// Both wells plus the avoided-crossing gaps delta(i, j) between |i,L> and |j,R>.
/// A zero gap marks an uncoupled pair.
struct LevelDiagram {
  WellLevels left;
  WellLevels right;
  RateTable delta;

  std::size_t state_count() const noexcept { return left.count() + right.count(); }
};

/// How the interwell relaxation tables are applied.
enum class InterwellMode {
  /// Use inter_lr / inter_rl as given at every flux point.
  Fixed,
  /// A channel is active only while it lowers the energy at the current flux
  /// detuning (zero-temperature relaxation).
  Downhill,
};

/// Incoherent relaxation rates in rad/ns.
///   intra_left(i, i')  : |i,L> -> |i',L>
///   intra_right(j, j') : |j,R> -> |j',R>
///   inter_lr(i, j)     : |i,L> -> |j,R>
///   inter_rl(j, i)     : |j,R> -> |i,L>
struct RelaxationSpec {
  RateTable intra_left;
  RateTable intra_right;
  RateTable inter_lr;
  RateTable inter_rl;
  InterwellMode interwell_mode = InterwellMode::Fixed;

  /// All-zero tables sized for the given diagram.
  static RelaxationSpec none(const LevelDiagram &diagram);
};

/// Energy detuning of the (i,L)/(j,R) pair from its avoided crossing:
/// E_{i,L}(flux) - E_{j,R}(flux). Throws std::out_of_range on bad indices.
double epsilon_ij(const LevelDiagram &diagram, double flux_detuning, std::size_t i, std::size_t j);

/// Flux detuning at which epsilon_ij vanishes.
double crossing_flux(const LevelDiagram &diagram, std::size_t i, std::size_t j);

struct Violation {
  std::string field;
  std::string message;

  bool operator==(const Violation &) const = default;
};

/// Every broken structural invariant of the pair; empty when both are usable.
std::vector<Violation> validate(const LevelDiagram &diagram, const RelaxationSpec &relax);

} // namespace lzsim
