#pragma once

#include <span>
#include <vector>

namespace lzsim {

/// Integer-order Bessel function of the first kind, J_n(x), for x >= 0.
///
/// Evaluated by normalized downward (Miller) recurrence; absolute error is
/// below 1e-13 for x <= 1e4. Negative orders use J_{-n} = (-1)^n J_n.
/// Throws DomainError for negative or non-finite x, or |n| > 1e6.
double bessel_j(int n, double x);

/// J_n(x) for n = -n_max .. +n_max, evaluated in one recurrence pass.
class BesselWindow {
public:
  BesselWindow(double x, int n_max);

  double x() const noexcept { return x_; }
  int n_max() const noexcept { return n_max_; }

  /// J_n(x); requires |n| <= n_max.
  double operator[](int n) const noexcept {
    const double v = positive_[static_cast<std::size_t>(n < 0 ? -n : n)];
    return (n < 0 && (n & 1)) ? -v : v;
  }

  /// J_0 .. J_{n_max}; negative orders follow by reflection.
  std::span<const double> nonnegative() const noexcept { return positive_; }

  /// All 2*n_max+1 values ordered from -n_max to +n_max.
  std::vector<double> values() const;

private:
  double x_;
  int n_max_;
  std::vector<double> positive_;
};

inline BesselWindow bessel_window(double x, int n_max) { return BesselWindow(x, n_max); }

} // namespace lzsim
