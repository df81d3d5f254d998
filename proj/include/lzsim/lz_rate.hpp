#pragma once

#include "lzsim/bessel.hpp"

#include <span>
#include <vector>

namespace lzsim {

// All energies and rates are angular frequencies in rad/ns.

/// ac flux drive: energy amplitude A and angular frequency omega.
struct DriveField {
  double amplitude = 0.0;
  double omega = 1.0;

  double x() const noexcept { return amplitude / omega; }
};

/// One avoided crossing: gap delta and dephasing rate gamma2 (= 1/T2).
struct CrossingParams {
  double delta = 0.0;
  double gamma2 = 1.0;
};

/// Sideband cutoff N such that sum_{|n|>N} J_n(x)^2 < 1e-14.
int truncation_order(double x);

/// Photon-assisted Landau-Zener rate for a fixed drive.
///
/// Holds the Bessel weights J_n(x)^2, n = 0..N, so that many detunings and
/// crossings can share one evaluation of the sideband amplitudes:
///
///   W(eps) = delta^2/2 * sum_n gamma2 J_n(x)^2 / ((eps - n omega)^2 + gamma2^2)
class LzRateKernel {
public:
  explicit LzRateKernel(const DriveField &drive);

  const DriveField &drive() const noexcept { return drive_; }
  int cutoff() const noexcept { return cutoff_; }

  double operator()(const CrossingParams &crossing, double epsilon) const;

private:
  DriveField drive_;
  int cutoff_;
  std::vector<double> weights_; // J_n(x)^2 for n = 0..cutoff
};

double lz_rate(const CrossingParams &crossing, double epsilon, const DriveField &drive);

std::vector<double> rate_profile(const CrossingParams &crossing, const DriveField &drive,
                                 std::span<const double> epsilons);

} // namespace lzsim
