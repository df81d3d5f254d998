#include "lzsim/master_equation.hpp"

#include "lzsim/errors.hpp"

#include <cmath>
#include <string>

namespace lzsim {

namespace {

constexpr double kNegativeTolerance = 1e-10;
constexpr double kSumTolerance = 1e-9;

void add_rate(Eigen::MatrixXd &m, Eigen::Index to, Eigen::Index from, double rate) {
  if (rate != 0.0)
    m(to, from) += rate;
}

void check_population(const PopulationVector &p, Eigen::Index n) {
  if (p.size() != n)
    throw ParameterError("population vector has " + std::to_string(p.size()) +
                         " entries, rate matrix has " + std::to_string(n));
  if (!p.allFinite() || p.minCoeff() < -kNegativeTolerance)
    throw ParameterError("population vector has negative or non-finite entries");
  if (std::abs(p.sum() - 1.0) > kSumTolerance)
    throw ParameterError("population vector does not sum to one");
}

PopulationVector clip_output(PopulationVector p) {
  if (p.minCoeff() < -kNegativeTolerance)
    throw NumericalError("population went negative beyond tolerance: " +
                         std::to_string(p.minCoeff()));
  return p.cwiseMax(0.0);
}

} // namespace

RateMatrix::RateMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw ParameterError("rate matrix must be square");
}

double RateMatrix::norm_inf() const {
  if (entries_.size() == 0)
    return 0.0;
  return entries_.cwiseAbs().rowwise().sum().maxCoeff();
}

RateMatrix build_rate_matrix(const LevelDiagram &diagram, const RelaxationSpec &relax,
                             double gamma2, const LzRateKernel &kernel, double flux_detuning) {
  const auto nl = static_cast<Eigen::Index>(diagram.left.count());
  const auto nr = static_cast<Eigen::Index>(diagram.right.count());
  const Eigen::Index n = nl + nr;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);

  for (Eigen::Index i = 0; i < nl; ++i) {
    for (Eigen::Index j = 0; j < nr; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      const double eps = epsilon_ij(diagram, flux_detuning, ui, uj);
      const double w = kernel(CrossingParams{diagram.delta(ui, uj), gamma2}, eps);
      add_rate(m, nl + j, i, w);
      add_rate(m, i, nl + j, w);

      bool down_lr = true;
      bool down_rl = true;
      if (relax.interwell_mode == InterwellMode::Downhill) {
        down_lr = eps > 0.0;
        down_rl = eps < 0.0;
      }
      if (down_lr)
        add_rate(m, nl + j, i, relax.inter_lr(ui, uj));
      if (down_rl)
        add_rate(m, i, nl + j, relax.inter_rl(uj, ui));
    }
  }
  for (Eigen::Index a = 0; a < nl; ++a)
    for (Eigen::Index b = 0; b < nl; ++b)
      if (a != b)
        add_rate(m, b, a, relax.intra_left(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
  for (Eigen::Index a = 0; a < nr; ++a)
    for (Eigen::Index b = 0; b < nr; ++b)
      if (a != b)
        add_rate(m, nl + b, nl + a,
                 relax.intra_right(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));

  for (Eigen::Index c = 0; c < n; ++c) {
    double out = 0.0;
    for (Eigen::Index r = 0; r < n; ++r)
      if (r != c)
        out += m(r, c);
    m(c, c) = -out;
  }
  return RateMatrix(std::move(m));
}

RateMatrix build_rate_matrix(const LevelDiagram &diagram, const RelaxationSpec &relax,
                             double gamma2, const DriveField &drive, double flux_detuning) {
  return build_rate_matrix(diagram, relax, gamma2, LzRateKernel(drive), flux_detuning);
}

PopulationVector steady_state(const RateMatrix &rm) {
  const Eigen::MatrixXd &m = rm.entries();
  const Eigen::Index n = rm.size();
  if (n == 0)
    throw ParameterError("steady_state: empty rate matrix");
  const double norm = rm.norm_inf();
  if (!std::isfinite(norm))
    throw NumericalError("steady_state: rate matrix has non-finite entries");
  if (norm == 0.0)
    throw DisconnectedChainError("steady_state: zero rate matrix has no unique stationary state");

  const Eigen::FullPivLU<Eigen::MatrixXd> rank_lu(m);
  const double threshold = 1e-12 * norm;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (std::abs(rank_lu.matrixLU()(k, k)) > threshold)
      ++rank;
  if (rank < n - 1)
    throw DisconnectedChainError("steady_state: stationary space has dimension " +
                                 std::to_string(n - rank) + " (disconnected chain)");

  Eigen::MatrixXd augmented = m;
  augmented.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  PopulationVector p = augmented.partialPivLu().solve(rhs);

  const double residual = (m * p).cwiseAbs().maxCoeff();
  if (!p.allFinite() || residual > 1e-10 * std::max(1.0, norm))
    throw NumericalError("steady_state: residual " + std::to_string(residual) +
                         " exceeds tolerance");
  return clip_output(std::move(p));
}

PopulationVector evolve(const RateMatrix &rm, const PopulationVector &p0, double t_final,
                        double dt, const TraceSink &sink) {
  const Eigen::MatrixXd &m = rm.entries();
  check_population(p0, rm.size());
  if (!(t_final >= 0.0) || !std::isfinite(t_final))
    throw ParameterError("evolve: t_final must be finite and nonnegative");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ParameterError("evolve: dt must be positive");
  const double norm = rm.norm_inf();
  if (norm > 0.0 && dt > 0.1 / norm)
    throw ParameterError("evolve: dt=" + std::to_string(dt) + " exceeds stability limit " +
                         std::to_string(0.1 / norm));

  PopulationVector p = p0;
  if (sink)
    sink(0.0, p);
  const auto steps = static_cast<long long>(std::ceil(t_final / dt));
  if (steps == 0)
    return clip_output(std::move(p));
  const double h = t_final / static_cast<double>(steps);

  PopulationVector k1(p.size()), k2(p.size()), k3(p.size()), k4(p.size());
  for (long long s = 1; s <= steps; ++s) {
    k1.noalias() = m * p;
    k2.noalias() = m * (p + 0.5 * h * k1);
    k3.noalias() = m * (p + 0.5 * h * k2);
    k4.noalias() = m * (p + h * k3);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (sink)
      sink(h * static_cast<double>(s), p);
  }
  return clip_output(std::move(p));
}

WellPopulations well_populations(const PopulationVector &p, const LevelDiagram &diagram) {
  const auto nl = static_cast<Eigen::Index>(diagram.left.count());
  const auto nr = static_cast<Eigen::Index>(diagram.right.count());
  if (p.size() != nl + nr)
    throw ParameterError("well_populations: vector size does not match diagram");
  return {p.head(nl).sum(), p.tail(nr).sum()};
}

} // namespace lzsim
