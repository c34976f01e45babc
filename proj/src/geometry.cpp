#include <bbound/geometry.hpp>

#include <bbound/numerics/rootfind.hpp>

#include <algorithm>
#include <cmath>

namespace bbound {

// ---------------------------------------------------------------- warp

double WarpFactor::rho(double z) const {
  if (constant_one) return 1.0;
  return std::cosh(std::sqrt(-kappa) * (z0 + z));
}

double WarpFactor::drho(double z) const {
  if (constant_one) return 0.0;
  double w = std::sqrt(-kappa);
  return w * std::sinh(w * (z0 + z));
}

double WarpFactor::ddrho(double z) const {
  if (constant_one) return 0.0;
  return -kappa * rho(z);
}

double WarpFactor::log_deriv(double z) const {
  if (constant_one) return 0.0;
  double w = std::sqrt(-kappa);
  return w * std::tanh(w * (z0 + z));
}

double WarpFactor::log_deriv_prime(double z) const {
  if (constant_one) return 0.0;
  double w = std::sqrt(-kappa);
  double c = std::cosh(w * (z0 + z));
  return -kappa / (c * c);
}

WarpFactor warp_factor(double kappa, double z0) {
  if (!(kappa < 0.0))
    throw ParameterError(
        "warp_factor: (rho'/rho)' > 0 with rho'' + kappa rho = 0 forces kappa < 0");
  WarpFactor w;
  w.kappa = kappa;
  w.z0 = z0;
  return w;
}

WarpFactor flat_warp() {
  WarpFactor w;
  w.kappa = 0.0;
  w.constant_one = true;
  return w;
}

// ---------------------------------------------------------------- norm

MinkowskiNorm::MinkowskiNorm(double exponent, std::vector<double> weights)
    : a_(exponent), w_(std::move(weights)) {
  if (!(a_ >= 2.0))
    throw ParameterError("minkowski norm: exponent must be >= 2 for smoothness");
  if (w_.empty() || w_.size() > 3)
    throw ParameterError("minkowski norm: need 1..3 weights");
  for (double w : w_)
    if (!(w > 0.0)) throw ParameterError("minkowski norm: weights must be > 0");
}

double MinkowskiNorm::operator()(const Point& v, int n) const {
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += w_[i] * std::pow(std::fabs(v[i]), a_);
  return std::pow(acc, 1.0 / a_);
}

Point MinkowskiNorm::grad(const Point& xi, int n) const {
  double h = (*this)(xi, n);
  Point g{0.0, 0.0, 0.0};
  if (h < 1e-150) return g;
  for (int i = 0; i < n; ++i) {
    // w_i sign(xi_i) (|xi_i|/H)^(a-1); the ratio form stays bounded for
    // small arguments where |xi_i|^(a-1) alone would underflow.
    double ratio = std::fabs(xi[i]) / h;
    g[i] = w_[i] * std::pow(ratio, a_ - 1.0) * (xi[i] < 0 ? -1.0 : 1.0);
  }
  return g;
}

double MinkowskiNorm::max_hessian_eig(int n) const {
  if (n != 2) return 1.0;
  double worst = 0.0;
  for (int k = 0; k < 64; ++k) {
    double th = (k + 0.5) * M_PI / 32.0;
    Point xi{std::cos(th), std::sin(th), 0.0};
    double h = 1e-5;
    auto f = [&](double x, double y) {
      Point p{x, y, 0.0};
      double v = (*this)(p, 2);
      return 0.5 * v * v;
    };
    double fxx = (f(xi[0] + h, xi[1]) - 2 * f(xi[0], xi[1]) + f(xi[0] - h, xi[1])) / (h * h);
    double fyy = (f(xi[0], xi[1] + h) - 2 * f(xi[0], xi[1]) + f(xi[0], xi[1] - h)) / (h * h);
    double fxy = (f(xi[0] + h, xi[1] + h) - f(xi[0] + h, xi[1] - h) -
                  f(xi[0] - h, xi[1] + h) + f(xi[0] - h, xi[1] - h)) /
                 (4 * h * h);
    double mean = 0.5 * (fxx + fyy);
    double disc = std::sqrt(sq(0.5 * (fxx - fyy)) + fxy * fxy);
    worst = std::max(worst, mean + disc);
  }
  return worst;
}

double MinkowskiNorm::dual_analytic(const Point& v, int n) const {
  const double astar = a_ / (a_ - 1.0);
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += std::pow(w_[i], -astar / a_) * std::pow(std::fabs(v[i]), astar);
  return std::pow(acc, 1.0 / astar);
}

double MinkowskiNorm::dual(const Point& v, int n) const {
  double vn = 0.0;
  for (int i = 0; i < n; ++i) vn += v[i] * v[i];
  if (vn == 0.0) return 0.0;
  if (n == 1) return std::fabs(v[0]) / (*this)(Point{1.0, 0.0, 0.0}, 1);
  if (n != 2)
    throw DomainError("minkowski norm: numeric dual implemented for n <= 2");

  // sup over the unit sphere of <v, Y>/H(Y), parametrised by angle; 64
  // uniformly spread starts, then golden-section polish on the best bracket.
  auto ratio = [&](double th) {
    Point y{std::cos(th), std::sin(th), 0.0};
    double num = v[0] * y[0] + v[1] * y[1];
    return num / (*this)(y, 2);
  };
  const int starts = 64;
  double best_th = 0.0, best = -1e300;
  for (int k = 0; k < starts; ++k) {
    double th = (k + 0.5) * 2.0 * M_PI / starts;
    double r = ratio(th);
    if (r > best) {
      best = r;
      best_th = th;
    }
  }
  double span = 2.0 * M_PI / starts;
  double th = numerics::golden_max(ratio, best_th - span, best_th + span, 1e-12);
  double val = ratio(th);
  if (!(val > 0.0) || !std::isfinite(val))
    throw Error("minkowski norm: degenerate direction in dual evaluation");
  return val;
}

bool MinkowskiNorm::strongly_convex(int n, int n_samples) const {
  if (n != 2) return true;  // 1-D norms are trivially fine here
  for (int k = 0; k < n_samples; ++k) {
    double th = (k + 0.5) * 2.0 * M_PI / n_samples;
    Point xi{std::cos(th), std::sin(th), 0.0};
    // FD Hessian of H^2/2 at xi.
    double h = 1e-5;
    auto f = [&](double x, double y) {
      Point p{x, y, 0.0};
      double v = (*this)(p, 2);
      return 0.5 * v * v;
    };
    double fxx = (f(xi[0] + h, xi[1]) - 2 * f(xi[0], xi[1]) + f(xi[0] - h, xi[1])) / (h * h);
    double fyy = (f(xi[0], xi[1] + h) - 2 * f(xi[0], xi[1]) + f(xi[0], xi[1] - h)) / (h * h);
    double fxy = (f(xi[0] + h, xi[1] + h) - f(xi[0] + h, xi[1] - h) -
                  f(xi[0] - h, xi[1] + h) + f(xi[0] - h, xi[1] - h)) /
                 (4 * h * h);
    double tr = fxx + fyy, det = fxx * fyy - fxy * fxy;
    if (!(tr > 0.0 && det > 1e-10)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- models

ModelManifold ModelManifold::circle(double radius) {
  if (!(radius > 0.0)) throw ParameterError("circle: radius must be > 0");
  ModelManifold m;
  m.kind_ = ModelKind::circle;
  m.n_ = 1;
  m.radius_ = radius;
  m.periods_ = {2.0 * M_PI * radius};
  return m;
}

ModelManifold ModelManifold::flat_torus(std::vector<double> periods) {
  if (periods.empty() || periods.size() > 3)
    throw ParameterError("torus: need 1..3 periods");
  for (double p : periods)
    if (!(p > 0.0)) throw ParameterError("torus: periods must be > 0");
  ModelManifold m;
  m.kind_ = ModelKind::flat_torus;
  m.n_ = int(periods.size());
  m.periods_ = std::move(periods);
  return m;
}

ModelManifold ModelManifold::flat_torus_minkowski(std::vector<double> periods,
                                                  MinkowskiNorm norm) {
  ModelManifold m = flat_torus(std::move(periods));
  if (!norm.strongly_convex(m.n_))
    throw ParameterError("torus: Minkowski norm fails strong convexity at samples");
  m.norm_ = std::move(norm);
  return m;
}

ModelManifold ModelManifold::sphere_radial(int n, double radius) {
  if (n < 2) throw ParameterError("sphere: dimension must be >= 2");
  if (!(radius > 0.0)) throw ParameterError("sphere: radius must be > 0");
  ModelManifold m;
  m.kind_ = ModelKind::sphere_radial;
  m.n_ = n;
  m.radius_ = radius;
  m.interval_ = {0.0, M_PI * radius};
  return m;
}

ModelManifold ModelManifold::warped_product(int n,
                                            std::array<double, 2> interval,
                                            WarpFactor warp) {
  if (n < 1) throw ParameterError("warped product: dimension must be >= 1");
  if (!(interval[1] > interval[0]))
    throw ParameterError("warped product: empty interval");
  ModelManifold m;
  m.kind_ = ModelKind::warped_product;
  m.n_ = n;
  m.interval_ = interval;
  m.warp_ = warp;
  if (!warp.constant_one) {
    // Validity of the declared warp on the interval.
    for (int i = 0; i <= 64; ++i) {
      double z = interval[0] + (interval[1] - interval[0]) * i / 64.0;
      double res = warp.ddrho(z) + warp.kappa * warp.rho(z);
      if (std::fabs(res) > 1e-10 || !(warp.log_deriv_prime(z) > 0.0))
        throw ParameterError("warped product: invalid warp on interval");
    }
  }
  return m;
}

ModelManifold ModelManifold::radial_ball(int n, double radius) {
  if (n < 1) throw ParameterError("ball: dimension must be >= 1");
  if (!(radius > 0.0)) throw ParameterError("ball: radius must be > 0");
  ModelManifold m;
  m.kind_ = ModelKind::radial_ball;
  m.n_ = n;
  m.radius_ = radius;
  m.interval_ = {0.0, radius};
  return m;
}

namespace {

double wrap_min_translate(const std::vector<double>& periods, const Point& x,
                          const Point& y, const MinkowskiNorm* norm, int n) {
  // Minimum over the 3^n nearest lattice translates.
  Point d{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) d[i] = y[i] - x[i];
  double best = 1e300;
  int reps = 1;
  for (int i = 0; i < n; ++i) reps *= 3;
  for (int code = 0; code < reps; ++code) {
    Point t = d;
    int c = code;
    for (int i = 0; i < n; ++i) {
      int k = c % 3 - 1;
      c /= 3;
      t[i] += k * periods[i];
    }
    double dist;
    if (norm) {
      dist = norm->dual_analytic(t, n);
    } else {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += t[i] * t[i];
      dist = std::sqrt(acc);
    }
    best = std::min(best, dist);
  }
  return best;
}

}  // namespace

double ModelManifold::distance(const Point& x, const Point& y) const {
  switch (kind_) {
    case ModelKind::circle: {
      double L = periods_[0];
      if (x[0] < -1e-9 || x[0] > L + 1e-9 || y[0] < -1e-9 || y[0] > L + 1e-9)
        throw DomainError("circle: point outside chart [0, 2 pi R)");
      double d = std::fabs(y[0] - x[0]);
      d = std::fmod(d, L);
      return std::min(d, L - d);
    }
    case ModelKind::flat_torus:
      return wrap_min_translate(periods_, x, y,
                                norm_ ? &*norm_ : nullptr, n_);
    case ModelKind::sphere_radial: {
      if (x[0] < -1e-9 || x[0] > interval_[1] + 1e-9 || y[0] < -1e-9 ||
          y[0] > interval_[1] + 1e-9)
        throw DomainError("sphere: polar arclength outside [0, pi R]");
      return std::fabs(y[0] - x[0]);
    }
    case ModelKind::warped_product: {
      if (x[0] < interval_[0] - 1e-9 || x[0] > interval_[1] + 1e-9 ||
          y[0] < interval_[0] - 1e-9 || y[0] > interval_[1] + 1e-9)
        throw DomainError("warped product: s-coordinate outside interval");
      return std::fabs(y[0] - x[0]);
    }
    case ModelKind::radial_ball: {
      if (x[0] < -1e-9 || x[0] > radius_ + 1e-9 || y[0] < -1e-9 ||
          y[0] > radius_ + 1e-9)
        throw DomainError("ball: radius outside [0, R]");
      // Generalized distance equals chord distance in the convex ball;
      // radial evaluation compares points on a common ray.
      return std::fabs(y[0] - x[0]);
    }
  }
  throw Error("distance: unreachable");
}

RicciInfo ModelManifold::ricci_lower_bound() const {
  RicciInfo info;
  switch (kind_) {
    case ModelKind::circle:
    case ModelKind::flat_torus:
      info.lower_bound = 0.0;
      info.thm1 = true;
      break;
    case ModelKind::sphere_radial:
      info.lower_bound = double(n_ - 1) / (radius_ * radius_);
      info.family = true;
      break;
    case ModelKind::warped_product:
      if (warp_.constant_one) {
        info.lower_bound = 0.0;
        info.thm1 = true;
      } else {
        info.lower_bound = double(n_ - 1) * warp_.kappa;
        info.thm2 = true;
      }
      break;
    case ModelKind::radial_ball:
      info.lower_bound = 0.0;
      info.thm1 = true;  // flat ball, Dirichlet regime
      break;
  }
  return info;
}

double ModelManifold::symmetric_drift(double s) const {
  switch (kind_) {
    case ModelKind::warped_product:
      return double(n_ - 1) * warp_.log_deriv(s);
    case ModelKind::sphere_radial:
      // rho = R sin(s/R) along the polar arclength.
      return double(n_ - 1) / radius_ / std::tan(s / radius_);
    case ModelKind::radial_ball:
      return double(n_ - 1) / s;
    case ModelKind::circle:
      return 0.0;
    default:
      throw DomainError("symmetric_drift: model has no 1-D reduction");
  }
}

std::string ModelManifold::describe() const {
  switch (kind_) {
    case ModelKind::circle: return "circle";
    case ModelKind::flat_torus: return norm_ ? "flat-torus-minkowski" : "flat-torus";
    case ModelKind::sphere_radial: return "sphere-radial";
    case ModelKind::warped_product: return "warped-product";
    case ModelKind::radial_ball: return "radial-ball";
  }
  return "?";
}

}  // namespace bbound
