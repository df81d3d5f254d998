#pragma once

#include "lzsim/level_diagram.hpp"
#include "lzsim/lz_rate.hpp"

#include <Eigen/Dense>

#include <functional>
#include <utility>

namespace lzsim {

/// Occupation probabilities ordered [L0 .. L(nl-1), R0 .. R(nr-1)].
using PopulationVector = Eigen::VectorXd;

/// Generator of dP/dt = M P over the same state ordering. Off-diagonal
/// entries are rates (to <- from); each diagonal entry is minus the sum of
/// the rest of its column.
class RateMatrix {
public:
  RateMatrix() = default;
  explicit RateMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd &entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  double operator()(Eigen::Index to, Eigen::Index from) const { return entries_(to, from); }

  /// Max absolute row sum.
  double norm_inf() const;

private:
  Eigen::MatrixXd entries_;
};

/// Rate matrix at one operating point. The kernel carries the drive, so a
/// sweep row can reuse its Bessel weights across flux values.
RateMatrix build_rate_matrix(const LevelDiagram &diagram, const RelaxationSpec &relax,
                             double gamma2, const LzRateKernel &kernel, double flux_detuning);

RateMatrix build_rate_matrix(const LevelDiagram &diagram, const RelaxationSpec &relax,
                             double gamma2, const DriveField &drive, double flux_detuning);

/// Unique stationary distribution of M.
///
/// Solves M' P = e_last where M' is M with its last row replaced by ones,
/// after checking that M has rank n-1. Throws DisconnectedChainError when the
/// stationary space is not one-dimensional and NumericalError when the
/// residual or the sign of the result cannot be trusted.
PopulationVector steady_state(const RateMatrix &m);

/// Called with (t, P(t)) at t = 0 and after every step.
using TraceSink = std::function<void(double, const PopulationVector &)>;

/// Fixed-step classic RK4 from p0 to t_final with step no larger than dt.
/// Requires dt <= 0.1 / ||M||_inf. Negative entries within 1e-10 are clipped
/// to zero in the returned vector only.
PopulationVector evolve(const RateMatrix &m, const PopulationVector &p0, double t_final,
                        double dt, const TraceSink &sink = {});

struct WellPopulations {
  double left = 0.0;
  double right = 0.0;
};

WellPopulations well_populations(const PopulationVector &p, const LevelDiagram &diagram);

} // namespace lzsim
