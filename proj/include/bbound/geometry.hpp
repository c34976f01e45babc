#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <bbound/common.hpp>

namespace bbound {

// Point on a model manifold. Tori use chart coordinates (up to 3);
// circle/sphere-radial/warped/ball models use a single coordinate
// (arclength, polar angle, s, or radius).
using Point = std::array<double, 3>;

// Warp factor rho(z) = cosh(sqrt(-kappa) (z0 + z)) with derivatives; the only
// warp admitting both rho'' + kappa rho = 0 and (rho'/rho)' > 0.
struct WarpFactor {
  double kappa = -1.0;
  double z0 = 0.0;
  bool constant_one = false;  // rho == 1 (kappa = 0 interval models)

  double rho(double z) const;
  double drho(double z) const;
  double ddrho(double z) const;
  double log_deriv(double z) const;        // rho'/rho
  double log_deriv_prime(double z) const;  // (rho'/rho)'
};

WarpFactor warp_factor(double kappa, double z0);
WarpFactor flat_warp();  // rho == 1, for interval models with Ric >= 0

// Reversible Minkowski norm of exponent-family form
//   H(xi) = (sum_i w_i |xi_i|^a)^(1/a),  a >= 2, w_i > 0.
// The dual H* is evaluated numerically (projected ascent over the unit
// sphere with golden-section polish); the analytic Hoelder dual serves as a
// test oracle, not as the implementation.
class MinkowskiNorm {
public:
  MinkowskiNorm(double exponent, std::vector<double> weights);

  double operator()(const Point& v, int n) const;
  double dual(const Point& v, int n) const;  // H*(v), numeric maximizer

  // Hoelder closed form of the dual (weighted l^(a/(a-1))); used on the
  // distance hot path and cross-checked against dual() by the oracle suite.
  double dual_analytic(const Point& v, int n) const;

  // Gradient of H at xi (for anisotropic fluxes); xi must be nonzero.
  Point grad(const Point& xi, int n) const;

  // Positive-definiteness of the Hessian of H^2/2 at sampled directions.
  bool strongly_convex(int n, int n_samples = 32) const;

  // Largest eigenvalue of the Hessian of H^2/2 over sampled directions
  // (0-homogeneous); used in explicit-step stability bounds.
  double max_hessian_eig(int n) const;

  double exponent() const { return a_; }
  const std::vector<double>& weights() const { return w_; }

private:
  double a_;
  std::vector<double> w_;
};

enum class ModelKind { circle, flat_torus, sphere_radial, warped_product, radial_ball };

struct RicciInfo {
  double lower_bound = 0.0;  // certified Ric lower bound (times metric)
  bool thm1 = false;         // flat two-point estimate applies (Ric >= 0)
  bool thm2 = false;         // warped cosh barrier regime (kappa < 0)
  bool family = false;       // sphere family route (kappa > 0)
};

// Model manifolds with closed-form distances.
class ModelManifold {
public:
  static ModelManifold circle(double radius);
  static ModelManifold flat_torus(std::vector<double> periods);
  static ModelManifold flat_torus_minkowski(std::vector<double> periods,
                                            MinkowskiNorm norm);
  static ModelManifold sphere_radial(int n, double radius);
  static ModelManifold warped_product(int n, std::array<double, 2> interval,
                                      WarpFactor warp);
  static ModelManifold radial_ball(int n, double radius);

  ModelKind kind() const { return kind_; }
  int dimension() const { return n_; }
  bool has_boundary() const { return kind_ == ModelKind::radial_ball; }
  const std::vector<double>& periods() const { return periods_; }
  double radius() const { return radius_; }
  const std::array<double, 2>& interval() const { return interval_; }
  const WarpFactor& warp() const { return warp_; }
  const std::optional<MinkowskiNorm>& norm() const { return norm_; }
  bool anisotropic() const { return norm_.has_value(); }

  double distance(const Point& x, const Point& y) const;
  RicciInfo ricci_lower_bound() const;

  // Drift coefficient (n-1) rho'/rho (or its sphere/ball analogue) entering
  // the symmetric reduction of the isotropic equation.
  double symmetric_drift(double s) const;

  std::string describe() const;

private:
  ModelKind kind_ = ModelKind::circle;
  int n_ = 1;
  double radius_ = 1.0;
  std::vector<double> periods_;
  std::array<double, 2> interval_{0.0, 1.0};
  WarpFactor warp_;
  std::optional<MinkowskiNorm> norm_;
};

}  // namespace bbound
