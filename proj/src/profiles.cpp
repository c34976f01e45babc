#include <bbound/profiles.hpp>

#include <bbound/numerics/interp.hpp>
#include <bbound/numerics/rootfind.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace bbound {

namespace {

void check_range(const std::array<double, 2>& r) {
  if (!(r[1] >= r[0]) || !std::isfinite(r[0]) || !std::isfinite(r[1]))
    throw ParameterError("profile: invalid u-range");
}

}  // namespace

VariationalProfile VariationalProfile::linear(Poly Q,
                                              std::array<double, 2> range) {
  check_range(range);
  VariationalProfile pr;
  pr.phi_kind_ = PhiKind::linear;
  pr.Phi_ = [](double s) { return s; };
  pr.dPhi_ = [](double) { return 1.0; };
  pr.ddPhi_ = [](double) { return 0.0; };
  pr.p_ = 2.0;
  pr.range_ = range;
  pr.Q_poly_ = std::move(Q);
  pr.q_poly_ = pr.Q_poly_.deriv();
  pr.dq_poly_ = pr.q_poly_.deriv();
  pr.Q_ = pr.Q_poly_;
  pr.q_ = pr.q_poly_;
  pr.dq_ = pr.dq_poly_;
  pr.has_poly_q_ = true;
  return pr;
}

VariationalProfile VariationalProfile::p_power(double p, Poly Q,
                                               std::array<double, 2> range,
                                               double tau) {
  if (!(p > 1.0)) throw ParameterError("profile: exponent p must exceed 1");
  if (tau < 0.0) throw ParameterError("profile: tau must be nonnegative");
  check_range(range);
  VariationalProfile pr;
  pr.phi_kind_ = PhiKind::p_power;
  pr.Phi_ = [p](double s) { return (2.0 / p) * std::pow(s, p / 2.0); };
  pr.dPhi_ = [p](double s) { return std::pow(s, p / 2.0 - 1.0); };
  pr.ddPhi_ = [p](double s) {
    return (p / 2.0 - 1.0) * std::pow(s, p / 2.0 - 2.0);
  };
  pr.p_ = p;
  pr.tau_ = tau;
  pr.c1_ = std::min(1.0, p - 1.0);
  pr.c2_ = std::max(1.0, p - 1.0);
  pr.range_ = range;
  pr.Q_poly_ = std::move(Q);
  pr.q_poly_ = pr.Q_poly_.deriv();
  pr.dq_poly_ = pr.q_poly_.deriv();
  pr.Q_ = pr.Q_poly_;
  pr.q_ = pr.q_poly_;
  pr.dq_ = pr.dq_poly_;
  pr.has_poly_q_ = true;
  return pr;
}

VariationalProfile VariationalProfile::custom(
    std::function<double(double)> Phi, std::function<double(double)> dPhi,
    std::function<double(double)> ddPhi, Poly Q, double p,
    std::array<double, 2> range, double tau) {
  if (!(p > 1.0)) throw ParameterError("profile: exponent p must exceed 1");
  check_range(range);
  VariationalProfile pr;
  pr.phi_kind_ = PhiKind::custom;
  pr.Phi_ = std::move(Phi);
  if (dPhi) {
    pr.dPhi_ = std::move(dPhi);
  } else {
    auto base = pr.Phi_;
    pr.dPhi_ = [base](double s) {
      double h = fd_step(s);
      return (base(s + h) - base(std::max(0.0, s - h))) /
             (h + std::min(s, h));
    };
  }
  if (ddPhi) {
    pr.ddPhi_ = std::move(ddPhi);
  } else {
    auto base = pr.dPhi_;
    pr.ddPhi_ = [base](double s) {
      double h = fd_step(s);
      return (base(s + h) - base(std::max(0.0, s - h))) /
             (h + std::min(s, h));
    };
  }
  pr.p_ = p;
  pr.tau_ = tau;
  pr.range_ = range;
  pr.Q_poly_ = std::move(Q);
  pr.q_poly_ = pr.Q_poly_.deriv();
  pr.dq_poly_ = pr.q_poly_.deriv();
  pr.Q_ = pr.Q_poly_;
  pr.q_ = pr.q_poly_;
  pr.dq_ = pr.dq_poly_;
  pr.has_poly_q_ = true;
  return pr;
}

VariationalProfile& VariationalProfile::with_structure_constants(double c1,
                                                                 double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0) || c1 > c2)
    throw ParameterError("profile: need 0 < c1 <= c2");
  c1_ = c1;
  c2_ = c2;
  return *this;
}

VariationalProfile& VariationalProfile::with_range(
    std::array<double, 2> range) {
  check_range(range);
  range_ = range;
  return *this;
}

VariationalProfile& VariationalProfile::with_tabulated_Q(
    std::vector<double> u, std::vector<double> Q_values) {
  if (u.size() != Q_values.size() || u.size() < 4)
    throw ParameterError("profile: tabulated Q needs >= 4 matching samples");
  auto interp = std::make_shared<numerics::CubicHermite>(
      numerics::CubicHermite::pchip(std::move(u), std::move(Q_values)));
  Q_ = [interp](double v) { return interp->eval(v); };
  q_ = [interp](double v) { return interp->deriv(v); };
  auto q_fn = q_;
  dq_ = [q_fn](double v) {
    double h = fd_step(v);
    return (q_fn(v + h) - q_fn(v - h)) / (2.0 * h);
  };
  has_poly_q_ = false;
  return *this;
}

double VariationalProfile::Phi(double s) const {
  if (s < 0.0) throw DomainError("profile: Phi evaluated at s < 0");
  return Phi_(s);
}

double VariationalProfile::dPhi(double s) const {
  if (s < 0.0) throw DomainError("profile: Phi' evaluated at s < 0");
  return dPhi_(s);
}

double VariationalProfile::ddPhi(double s) const {
  if (s < 0.0) throw DomainError("profile: Phi'' evaluated at s < 0");
  return ddPhi_(s);
}

double VariationalProfile::K(double s) const {
  if (s < 0.0) throw DomainError("profile: K evaluated at s < 0");
  if (s == 0.0) return 0.0;
  return dPhi_(s) * s - 0.5 * Phi_(s);
}

double VariationalProfile::Lambda(double s) const {
  if (s < 0.0) throw DomainError("profile: Lambda evaluated at s < 0");
  if (s == 0.0 && phi_kind_ == PhiKind::p_power && p_ != 2.0)
    return p_ > 2.0 ? 0.0 : dPhi_(s);
  return 2.0 * ddPhi_(s) * s + dPhi_(s);
}

double VariationalProfile::invert_K(double t) const {
  if (t < 0.0) throw RangeError("profile: invert_K target below K's range");
  if (t == 0.0) return 0.0;
  double hi = std::max(1.0, t);
  int grow = 0;
  while (K(hi) < t) {
    hi *= 2.0;
    if (++grow > 200)
      throw RangeError("profile: invert_K target above K's range");
  }
  double s = numerics::brent([&](double x) { return K(x) - t; }, 0.0, hi,
                             1e-15 * std::max(1.0, hi));
  // Newton polish to the stated residual tolerance on K itself.
  const double f_tol = 1e-12 * std::max(1.0, std::fabs(t));
  for (int it = 0; it < 8 && std::fabs(K(s) - t) > f_tol; ++it) {
    double slope = 0.5 * Lambda(s);  // K' = Lambda / 2
    if (!(slope > 0.0) || !std::isfinite(slope)) break;
    s = std::max(0.0, s - (K(s) - t) / slope);
  }
  return s;
}

double VariationalProfile::c_sup() const {
  return Q(argmax_Q());
}

double VariationalProfile::argmax_Q() const {
  const double m = range_[0], M = range_[1];
  if (M == m) return m;
  const int n = 4097;
  // Seed at the midpoint so constant potentials pick an interior base point.
  double best = 0.5 * (m + M), best_q = Q_(best);
  for (int i = 0; i < n; ++i) {
    double u = m + (M - m) * i / double(n - 1);
    double v = Q_(u);
    if (v > best_q) {
      best_q = v;
      best = u;
    }
  }
  // Refine around the top sample; keeps interior maxima to ~1e-12.
  const double h = (M - m) / double(n - 1);
  double lo = std::max(m, best - 2 * h), hi = std::min(M, best + 2 * h);
  double refined = numerics::golden_max(Q_, lo, hi, 1e-12);
  if (Q_(refined) > best_q) best = refined;
  // Endpoint guarantee for c_sup.
  if (Q_(m) > Q_(best)) best = m;
  if (Q_(M) > Q_(best)) best = M;
  return best;
}

StructureReport VariationalProfile::check_structure(
    const std::vector<double>& t_samples) const {
  StructureReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (double t : t_samples) {
    if (!(t > 0.0)) continue;
    double bound = std::pow(tau_ + t, p_ - 2.0);
    StructureSample s;
    s.t = t;
    s.bound = bound;
    double beta = dPhi_(t * t);
    double alpha = Lambda(t * t);
    s.beta_margin_lo = beta - c1_ * bound;
    s.beta_margin_hi = c2_ * bound - beta;
    s.alpha_margin_lo = alpha - c1_ * bound;
    s.alpha_margin_hi = c2_ * bound - alpha;
    rep.all_ok = rep.all_ok && s.ok();
    rep.worst_margin =
        std::min({rep.worst_margin, s.beta_margin_lo, s.beta_margin_hi,
                  s.alpha_margin_lo, s.alpha_margin_hi});
    rep.samples.push_back(s);
  }
  return rep;
}

IsotropicCoefficients VariationalProfile::coefficients() const {
  IsotropicCoefficients co;
  auto self = *this;  // value copy; profile is immutable and cheap to share
  co.alpha = [self](double, double t) {
    double v = self.Lambda(t * t);
    if (!std::isfinite(v))
      throw DomainError("coefficients: alpha non-finite at t=" +
                        std::to_string(t));
    return v;
  };
  co.beta = [self](double, double t) {
    double v = self.dPhi(t * t);
    if (!std::isfinite(v))
      throw DomainError("coefficients: beta non-finite at t=" +
                        std::to_string(t));
    return v;
  };
  co.q = [self](double u, double) { return self.q(u); };
  return co;
}

}  // namespace bbound
