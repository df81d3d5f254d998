#include "lzsim/level_diagram.hpp"

#include <cmath>
#include <stdexcept>

namespace lzsim {

RateTable::RateTable(std::vector<std::vector<double>> const &nested)
    : rows_(nested.size()), cols_(nested.empty() ? 0 : nested.front().size()) {
  data_.reserve(rows_ * cols_);
  for (const auto &row : nested) {
    if (row.size() != cols_)
      throw std::invalid_argument("RateTable: ragged rows");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

RelaxationSpec RelaxationSpec::none(const LevelDiagram &diagram) {
  const std::size_t nl = diagram.left.count();
  const std::size_t nr = diagram.right.count();
  return RelaxationSpec{RateTable(nl, nl), RateTable(nr, nr), RateTable(nl, nr),
                        RateTable(nr, nl), InterwellMode::Fixed};
}

double epsilon_ij(const LevelDiagram &diagram, double flux_detuning, std::size_t i,
                  std::size_t j) {
  if (i >= diagram.left.count() || j >= diagram.right.count())
    throw std::out_of_range("epsilon_ij: level index out of range");
  return diagram.left.energy(i, flux_detuning) - diagram.right.energy(j, flux_detuning);
}

double crossing_flux(const LevelDiagram &diagram, std::size_t i, std::size_t j) {
  if (i >= diagram.left.count() || j >= diagram.right.count())
    throw std::out_of_range("crossing_flux: level index out of range");
  return (diagram.right.offsets[j] - diagram.left.offsets[i]) /
         (diagram.left.slope - diagram.right.slope);
}

namespace {

void check_well(const WellLevels &well, const std::string &name, std::vector<Violation> &out) {
  if (well.count() < 1)
    out.push_back({name + ".offsets", "a well needs at least one level"});
  if (!std::isfinite(well.slope) || well.slope == 0.0)
    out.push_back({name + ".slope", "slope must be finite and nonzero"});
  for (std::size_t k = 0; k < well.count(); ++k) {
    if (!std::isfinite(well.offsets[k]))
      out.push_back({name + ".offsets[" + std::to_string(k) + "]", "not finite"});
    else if (k > 0 && !(well.offsets[k] > well.offsets[k - 1]))
      out.push_back({name + ".offsets[" + std::to_string(k) + "]",
                     "offsets must be strictly increasing"});
  }
}

void check_table(const RateTable &table, const std::string &name, std::size_t rows,
                 std::size_t cols, bool zero_diagonal, std::vector<Violation> &out) {
  if (table.rows() != rows || table.cols() != cols) {
    out.push_back({name, "dimension mismatch: expected " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ", got " + std::to_string(table.rows()) +
                             "x" + std::to_string(table.cols())});
    return;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = table(r, c);
      const std::string where = name + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      if (!std::isfinite(v) || v < 0.0)
        out.push_back({where, "must be finite and nonnegative"});
      else if (zero_diagonal && r == c && v != 0.0)
        out.push_back({where, "self-relaxation must be zero"});
    }
  }
}

} // namespace

std::vector<Violation> validate(const LevelDiagram &diagram, const RelaxationSpec &relax) {
  std::vector<Violation> out;
  check_well(diagram.left, "left", out);
  check_well(diagram.right, "right", out);
  if (diagram.left.slope == diagram.right.slope)
    out.push_back({"right.slope", "wells must have different slopes"});

  const std::size_t nl = diagram.left.count();
  const std::size_t nr = diagram.right.count();
  check_table(diagram.delta, "delta", nl, nr, false, out);
  check_table(relax.intra_left, "relaxation.intra_left", nl, nl, true, out);
  check_table(relax.intra_right, "relaxation.intra_right", nr, nr, true, out);
  check_table(relax.inter_lr, "relaxation.inter_lr", nl, nr, false, out);
  check_table(relax.inter_rl, "relaxation.inter_rl", nr, nl, false, out);
  return out;
}

} // namespace lzsim
