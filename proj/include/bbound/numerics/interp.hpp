#pragma once

#include <vector>

namespace bbound::numerics {

// Piecewise-cubic Hermite interpolant on a strictly increasing grid.
// Slopes may be supplied exactly; otherwise Fritsch-Carlson (pchip) slopes
// are derived, which keeps the interpolant monotone for monotone data.
class CubicHermite {
public:
  CubicHermite() = default;
  CubicHermite(std::vector<double> x, std::vector<double> y,
               std::vector<double> dydx);
  static CubicHermite pchip(std::vector<double> x, std::vector<double> y);

  double eval(double xq) const;
  double deriv(double xq) const;

  // Solves eval(z) = v on [x.front(), x.back()] for monotone data.
  double invert(double v) const;

  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& slopes() const { return d_; }
  double front() const { return y_.front(); }
  double back() const { return y_.back(); }

private:
  std::size_t locate(double xq) const;
  std::vector<double> x_, y_, d_;
};

}  // namespace bbound::numerics
