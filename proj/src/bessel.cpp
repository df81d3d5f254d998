#include "lzsim/bessel.hpp"

#include "lzsim/errors.hpp"

#include <cmath>
#include <string>

namespace lzsim {
namespace {

constexpr int kMaxOrder = 1'000'000;
// Below this argument the power series converges in a handful of terms
// without cancellation.
constexpr double kSeriesLimit = 2.0;

void check_argument(double x) {
  if (!std::isfinite(x))
    throw DomainError("bessel: argument must be finite");
  if (x < 0.0)
    throw DomainError("bessel: negative argument " + std::to_string(x));
}

// J_0 .. J_keep by the ascending series
//   J_n(x) = sum_k (-1)^k (x/2)^(n+2k) / (k! (n+k)!).
std::vector<double> series_values(double x, int keep) {
  std::vector<double> out(static_cast<std::size_t>(keep) + 1, 0.0);
  const double half = 0.5 * x;
  const double q = half * half;
  double lead = 1.0; // (x/2)^n / n!
  for (int n = 0; n <= keep; ++n) {
    if (n > 0)
      lead *= half / n;
    if (lead == 0.0)
      break;
    double term = lead;
    double sum = lead;
    for (int k = 1; k < 200; ++k) {
      term *= -q / (static_cast<double>(k) * (n + k));
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum))
        break;
    }
    out[static_cast<std::size_t>(n)] = sum;
  }
  return out;
}

// J_0 .. J_keep by Miller's downward recurrence
//   J_{k-1} = (2k/x) J_k - J_{k+1},
// started far above the turning point and normalized with
//   J_0^2 + 2 sum_{k>=1} J_k^2 = 1        (magnitude)
//   J_0   + 2 sum_{k>=1} J_{2k} = 1       (sign).
std::vector<double> miller_values(double x, int keep) {
  const double top = std::max(static_cast<double>(keep), std::ceil(x));
  const int start = static_cast<int>(top + std::ceil(12.0 * std::cbrt(x + 1.0))) + 30;

  constexpr double kBig = 1e100;
  constexpr double kRescale = 1e-100;

  std::vector<double> out(static_cast<std::size_t>(keep) + 1, 0.0);
  // Number of rescalings applied before each stored value was recorded.
  std::vector<int> epoch(out.size(), 0);
  int rescales = 0;
  double above = 0.0; // J_{k+1}
  double cur = 1e-30; // J_k
  double sumsq = 0.0;
  double even_sum = 0.0;
  for (int k = start; k >= 1; --k) {
    if (k <= keep) {
      out[static_cast<std::size_t>(k)] = cur;
      epoch[static_cast<std::size_t>(k)] = rescales;
    }
    sumsq += 2.0 * cur * cur;
    if ((k & 1) == 0)
      even_sum += 2.0 * cur;
    const double below = (2.0 * k / x) * cur - above;
    above = cur;
    cur = below;
    if (std::abs(cur) > kBig) {
      cur *= kRescale;
      above *= kRescale;
      even_sum *= kRescale;
      sumsq *= kRescale * kRescale;
      ++rescales;
    }
  }
  out[0] = cur;
  epoch[0] = rescales;
  sumsq += cur * cur;
  even_sum += cur;

  const double scale = std::copysign(1.0 / std::sqrt(sumsq), even_sum);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const int lag = rescales - epoch[k];
    out[k] = lag == 0 ? out[k] * scale : out[k] * std::pow(kRescale, lag) * scale;
  }
  return out;
}

std::vector<double> nonnegative_orders(double x, int keep) {
  if (x == 0.0) {
    std::vector<double> out(static_cast<std::size_t>(keep) + 1, 0.0);
    out[0] = 1.0;
    return out;
  }
  return x < kSeriesLimit ? series_values(x, keep) : miller_values(x, keep);
}

} // namespace

double bessel_j(int n, double x) {
  check_argument(x);
  if (n > kMaxOrder || n < -kMaxOrder)
    throw DomainError("bessel_j: order out of range " + std::to_string(n));
  const int m = n < 0 ? -n : n;
  if (x == 0.0)
    return m == 0 ? 1.0 : 0.0;
  const double v = nonnegative_orders(x, m)[static_cast<std::size_t>(m)];
  return (n < 0 && (m & 1)) ? -v : v;
}

BesselWindow::BesselWindow(double x, int n_max) : x_(x), n_max_(n_max) {
  check_argument(x);
  if (n_max < 0 || n_max > kMaxOrder)
    throw DomainError("bessel_window: order cutoff out of range " + std::to_string(n_max));
  positive_ = nonnegative_orders(x, n_max);
}

std::vector<double> BesselWindow::values() const {
  std::vector<double> out;
  out.reserve(2 * static_cast<std::size_t>(n_max_) + 1);
  for (int n = -n_max_; n <= n_max_; ++n)
    out.push_back((*this)[n]);
  return out;
}

} // namespace lzsim
