#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <bbound/common.hpp>

namespace bbound {

// Coefficient triple of the isotropic equation. alpha weights the second
// derivative along the gradient, beta the orthogonal complement, q is the
// zeroth-order term; all evaluated at (u, t) with t = |Du| >= 0.
struct IsotropicCoefficients {
  std::function<double(double, double)> alpha;
  std::function<double(double, double)> beta;
  std::function<double(double, double)> q;
};

// Polynomial in ascending-power coefficients.
struct Poly {
  std::vector<double> c;
  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = c[i] + x * acc;
    return acc;
  }
  Poly deriv() const {
    Poly d;
    for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * double(i));
    if (d.c.empty()) d.c.push_back(0.0);
    return d;
  }
};

struct StructureSample {
  double t;
  double bound;                             // (tau + t)^(p-2) reference scale
  double beta_margin_lo, beta_margin_hi;    // c1 bound / c2 bound on Phi'
  double alpha_margin_lo, alpha_margin_hi;  // same bounds on Lambda
  bool ok() const {
    // Exact-equality cases land at rounding distance from zero.
    double slack = -1e-12 * std::max(1.0, std::fabs(bound));
    return beta_margin_lo >= slack && beta_margin_hi >= slack &&
           alpha_margin_lo >= slack && alpha_margin_hi >= slack;
  }
};

struct StructureReport {
  std::vector<StructureSample> samples;
  bool all_ok = true;
  double worst_margin = 0.0;
};

// Variational profile: Phi on gradient-square s, potential Q on u, exponent
// data (p, tau, c1, c2) and the working u-range. Everything immutable after
// construction; evaluators are pure.
class VariationalProfile {
public:
  enum class PhiKind { linear, p_power, custom };

  // Phi(s) = s.
  static VariationalProfile linear(Poly Q, std::array<double, 2> range);
  // Phi(s) = (2/p) s^(p/2).
  static VariationalProfile p_power(double p, Poly Q,
                                    std::array<double, 2> range,
                                    double tau = 0.0);
  static VariationalProfile custom(std::function<double(double)> Phi,
                                   std::function<double(double)> dPhi,
                                   std::function<double(double)> ddPhi,
                                   Poly Q, double p,
                                   std::array<double, 2> range,
                                   double tau = 0.0);

  VariationalProfile& with_structure_constants(double c1, double c2);
  VariationalProfile& with_range(std::array<double, 2> range);

  // Replaces the polynomial potential by a tabulated one (monotone-cubic
  // interpolation of the samples); q and q' come from the interpolant.
  VariationalProfile& with_tabulated_Q(std::vector<double> u,
                                       std::vector<double> Q_values);

  double Phi(double s) const;
  double dPhi(double s) const;
  double ddPhi(double s) const;
  double Q(double u) const { return Q_(u); }
  double q(double u) const { return q_(u); }
  double dq(double u) const { return dq_(u); }

  double K(double s) const;
  double Lambda(double s) const;
  // Monotone inverse of K; |K(result) - t| <= 1e-12 * max(1, |t|).
  double invert_K(double t) const;

  // sup of Q over the range, dense scan plus golden-section refinement.
  double c_sup() const;
  // Location of the supremum of Q over the range.
  double argmax_Q() const;

  StructureReport check_structure(const std::vector<double>& t_samples) const;

  IsotropicCoefficients coefficients() const;

  double p() const { return p_; }
  double tau() const { return tau_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  const std::array<double, 2>& range() const { return range_; }
  PhiKind phi_kind() const { return phi_kind_; }
  const Poly& q_poly() const { return q_poly_; }
  bool has_poly_q() const { return has_poly_q_; }

private:
  VariationalProfile() = default;

  PhiKind phi_kind_ = PhiKind::linear;
  std::function<double(double)> Phi_, dPhi_, ddPhi_;
  std::function<double(double)> Q_, q_, dq_;
  Poly Q_poly_, q_poly_, dq_poly_;
  bool has_poly_q_ = false;
  double p_ = 2.0, tau_ = 0.0, c1_ = 1.0, c2_ = 1.0;
  std::array<double, 2> range_{0.0, 1.0};
};

}  // namespace bbound
