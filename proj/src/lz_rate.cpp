#include "lzsim/lz_rate.hpp"

#include "lzsim/errors.hpp"

#include <cmath>

namespace lzsim {
namespace {

void check_drive(const DriveField &drive) {
  if (!(drive.omega > 0.0) || !std::isfinite(drive.omega))
    throw DomainError("drive frequency must be positive and finite");
  if (!(drive.amplitude >= 0.0) || !std::isfinite(drive.amplitude))
    throw DomainError("drive amplitude must be nonnegative and finite");
  if (!std::isfinite(drive.x()))
    throw DomainError("drive amplitude/frequency ratio is not finite");
}

void check_crossing(const CrossingParams &crossing) {
  if (!(crossing.gamma2 > 0.0) || !std::isfinite(crossing.gamma2))
    throw DomainError("dephasing rate gamma2 must be positive and finite");
  if (!(crossing.delta >= 0.0) || !std::isfinite(crossing.delta))
    throw DomainError("avoided-crossing gap must be nonnegative and finite");
}

} // namespace

int truncation_order(double x) {
  return static_cast<int>(std::ceil(x + 12.0 * std::cbrt(x + 1.0) + 15.0));
}

LzRateKernel::LzRateKernel(const DriveField &drive) : drive_(drive) {
  check_drive(drive);
  cutoff_ = truncation_order(drive.x());
  const BesselWindow window(drive.x(), cutoff_);
  weights_.reserve(static_cast<std::size_t>(cutoff_) + 1);
  for (double j : window.nonnegative())
    weights_.push_back(j * j);
}

double LzRateKernel::operator()(const CrossingParams &crossing, double epsilon) const {
  check_crossing(crossing);
  if (crossing.delta == 0.0)
    return 0.0;
  const double g = crossing.gamma2;
  const double g2 = g * g;
  const double w = drive_.omega;

  // n and -n share J_n^2; pairing them makes W(eps) == W(-eps) bit for bit.
  double sum = weights_[0] / (epsilon * epsilon + g2);
  for (int n = 1; n <= cutoff_; ++n) {
    const double weight = weights_[static_cast<std::size_t>(n)];
    if (weight == 0.0)
      continue;
    const double lo = epsilon - n * w;
    const double hi = epsilon + n * w;
    sum += weight * (1.0 / (lo * lo + g2) + 1.0 / (hi * hi + g2));
  }
  return 0.5 * crossing.delta * crossing.delta * g * sum;
}

double lz_rate(const CrossingParams &crossing, double epsilon, const DriveField &drive) {
  check_crossing(crossing);
  return LzRateKernel(drive)(crossing, epsilon);
}

std::vector<double> rate_profile(const CrossingParams &crossing, const DriveField &drive,
                                 std::span<const double> epsilons) {
  check_crossing(crossing);
  const LzRateKernel kernel(drive);
  std::vector<double> out;
  out.reserve(epsilons.size());
  for (double eps : epsilons)
    out.push_back(kernel(crossing, eps));
  return out;
}

} // namespace lzsim
