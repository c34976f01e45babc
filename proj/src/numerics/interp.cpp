#include <bbound/numerics/interp.hpp>

#include <bbound/common.hpp>

#include <algorithm>
#include <cmath>

namespace bbound::numerics {

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y,
                           std::vector<double> dydx)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(dydx)) {
  if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != d_.size())
    throw ConstructionError("interp: inconsistent node data");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1]))
      throw ConstructionError("interp: grid not strictly increasing");
}

CubicHermite CubicHermite::pchip(std::vector<double> x, std::vector<double> y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0), s(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    s[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s[i - 1] * s[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      double w1 = 2 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
      double w2 = (x[i + 1] - x[i]) + 2 * (x[i] - x[i - 1]);
      d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
    }
  }
  d[0] = s[0];
  d[n - 1] = s[n - 2];
  return CubicHermite(std::move(x), std::move(y), std::move(d));
}

std::size_t CubicHermite::locate(double xq) const {
  if (xq <= x_.front()) return 0;
  if (xq >= x_.back()) return x_.size() - 2;
  auto it = std::upper_bound(x_.begin(), x_.end(), xq);
  return std::size_t(it - x_.begin()) - 1;
}

double CubicHermite::eval(double xq) const {
  std::size_t i = locate(xq);
  double h = x_[i + 1] - x_[i], t = (xq - x_[i]) / h;
  double h00 = (1 + 2 * t) * sq(1 - t);
  double h10 = t * sq(1 - t);
  double h01 = t * t * (3 - 2 * t);
  double h11 = t * t * (t - 1);
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double CubicHermite::deriv(double xq) const {
  std::size_t i = locate(xq);
  double h = x_[i + 1] - x_[i], t = (xq - x_[i]) / h;
  double g00 = 6 * t * (t - 1) / h;
  double g10 = (1 - t) * (1 - 3 * t);
  double g01 = -g00;
  double g11 = t * (3 * t - 2);
  return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
}

double CubicHermite::invert(double v) const {
  const bool inc = y_.back() > y_.front();
  double vlo = inc ? y_.front() : y_.back();
  double vhi = inc ? y_.back() : y_.front();
  if (v < vlo || v > vhi) throw RangeError("interp: invert target out of range");

  // Bracketing node interval by value, then safeguarded Newton.
  std::size_t lo = 0, hi = y_.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if ((y_[mid] <= v) == inc)
      lo = mid;
    else
      hi = mid;
  }
  double a = x_[lo], b = x_[hi];
  double z = a + (b - a) * 0.5;
  for (int it = 0; it < 100; ++it) {
    double fv = eval(z) - v;
    if ((fv > 0) == inc)
      b = z;
    else
      a = z;
    double dz = deriv(z);
    double znew = (dz != 0.0) ? z - fv / dz : 0.5 * (a + b);
    if (!(znew > a && znew < b)) znew = 0.5 * (a + b);
    if (std::fabs(znew - z) < 1e-15 * (1 + std::fabs(z))) return znew;
    z = znew;
  }
  return z;
}

}  // namespace bbound::numerics
