#include <bbound/verify.hpp>

#include <bbound/numerics/fd.hpp>
#include <bbound/numerics/interp.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace bbound {

namespace {

void require_certified(const ScalarField& field) {
  if (!field.certified())
    throw DomainError(
        "audit: field residual " + std::to_string(field.residual_norm) +
        " exceeds its declared tolerance; verifiers refuse uncertified fields");
}

// Clamp field values into the inverse domain, tolerating floating-point
// grazing up to the stated margin; beyond it the barrier range is too short.
double clamp_into(double v, const std::array<double, 2>& dom,
                  std::size_t* clipped) {
  double scale = std::max({1.0, std::fabs(dom[0]), std::fabs(dom[1])});
  double margin = 1e-12 * scale;
  if (v < dom[0] - margin || v > dom[1] + margin)
    throw DomainError("audit: field value " + std::to_string(v) +
                      " outside barrier range [" + std::to_string(dom[0]) +
                      ", " + std::to_string(dom[1]) + "]");
  if (clipped && (v < dom[0] || v > dom[1])) ++*clipped;
  return std::clamp(v, dom[0], dom[1]);
}

void note_clipping(VerificationReport& rep, std::size_t clipped) {
  if (clipped == 0) return;
  if (!rep.note.empty()) rep.note += "; ";
  rep.note += std::to_string(clipped) +
              " field value(s) grazed the barrier range and were clipped";
}

// Sample indices for pair scans: full grid for small 1-D fields, stratified
// subsample plus extremal-u and max-|grad u| points for 2-D lattices.
std::vector<std::size_t> sample_indices(const ScalarField& field,
                                        const SamplingPlan& plan) {
  const std::size_t N = field.size();
  std::vector<std::size_t> idx;
  if (!field.is_grid2d() || N <= 4096) {
    idx.resize(N);
    for (std::size_t k = 0; k < N; ++k) idx[k] = k;
    return idx;
  }
  const std::size_t target = std::size_t(plan.subsample);
  const std::size_t stride = std::max<std::size_t>(1, N / target);
  std::mt19937 rng(plan.seed);
  std::uniform_int_distribution<std::size_t> off(0, stride - 1);
  for (std::size_t b = 0; b * stride < N; ++b) {
    std::size_t k = b * stride + off(rng);
    if (k < N) idx.push_back(k);
  }
  std::size_t imin = 0, imax = 0, igrad = 0;
  for (std::size_t k = 1; k < N; ++k) {
    if (field.values[k] < field.values[imin]) imin = k;
    if (field.values[k] > field.values[imax]) imax = k;
    if (field.gradient_norm[k] > field.gradient_norm[igrad]) igrad = k;
  }
  idx.push_back(imin);
  idx.push_back(imax);
  idx.push_back(igrad);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

VerificationReport vacuous_report(AuditKind kind, const std::string& why) {
  VerificationReport rep;
  rep.kind = kind;
  rep.vacuous = true;
  rep.verdict = Verdict::pass;
  rep.max_defect = 0.0;
  rep.note = why;
  return rep;
}

void issue_verdict(VerificationReport& rep) {
  if (rep.vacuous) return;
  if (rep.max_defect <= rep.tolerance_model) {
    rep.verdict = Verdict::pass;
  } else if (rep.structural || rep.refinement_history.size() >= 2) {
    rep.verdict = Verdict::fail;
  } else {
    rep.verdict = Verdict::inconclusive;
  }
}

VerificationReport pair_scan(AuditKind kind, const ScalarField& field,
                             const InverseBarrier& inverse,
                             const ModelManifold& model,
                             const SamplingPlan& plan) {
  require_certified(field);
  if (inverse.is_constant())
    return vacuous_report(kind, "constant barrier: estimate trivially true");

  auto idx = sample_indices(field, plan);
  std::size_t clipped = 0;
  std::vector<double> psi_u(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k)
    psi_u[k] = inverse.psi(
        clamp_into(field.values[idx[k]], inverse.domain(), &clipped));

  double best = -std::numeric_limits<double>::infinity();
  std::size_t bx = 0, by = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const Point pa = field.point_at(idx[a]);
    for (std::size_t b = 0; b < idx.size(); ++b) {
      if (a == b) continue;
      double Z = psi_u[b] - psi_u[a] - model.distance(pa, field.point_at(idx[b]));
      if (Z > best) {
        best = Z;
        bx = idx[a];
        by = idx[b];
      }
    }
  }

  VerificationReport rep;
  rep.kind = kind;
  rep.max_defect = best;
  rep.witness.pair = true;
  rep.witness.x = field.point_at(bx);
  rep.witness.y = field.point_at(by);
  rep.tolerance_model = plan.base_tol;
  rep.refinement_history = {{field.spacing(), best}};
  note_clipping(rep, clipped);
  issue_verdict(rep);
  return rep;
}

}  // namespace

std::string audit_kind_name(AuditKind k) {
  switch (k) {
    case AuditKind::two_point: return "two-point";
    case AuditKind::gradient: return "gradient";
    case AuditKind::modica: return "modica";
    case AuditKind::rigidity: return "rigidity";
    case AuditKind::dirichlet_boundary: return "dirichlet-boundary";
  }
  return "?";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

VerificationReport two_point_audit(const ScalarField& field,
                                   const InverseBarrier& inverse,
                                   const ModelManifold& model,
                                   const SamplingPlan& plan) {
  return pair_scan(AuditKind::two_point, field, inverse, model, plan);
}

VerificationReport gradient_audit(const ScalarField& field,
                                  const BarrierCurve& curve,
                                  const InverseBarrier& inverse,
                                  const SamplingPlan& plan) {
  require_certified(field);
  if (curve.is_constant || inverse.is_constant())
    return vacuous_report(AuditKind::gradient,
                          "constant barrier: estimate trivially true");

  // phi' as a function of z, interpolated from the curve's slope samples.
  numerics::CubicHermite dphi_interp(
      curve.grid, curve.dphi, numerics::fd_derivative(curve.grid, curve.dphi));

  double best = -std::numeric_limits<double>::infinity();
  std::size_t bi = 0;
  std::size_t clipped = 0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    double z =
        inverse.psi(clamp_into(field.values[k], inverse.domain(), &clipped));
    double defect = field.gradient_norm[k] - dphi_interp.eval(z);
    if (defect > best) {
      best = defect;
      bi = k;
    }
  }

  VerificationReport rep;
  rep.kind = AuditKind::gradient;
  rep.max_defect = best;
  rep.witness.x = field.point_at(bi);
  rep.tolerance_model = plan.base_tol;
  rep.refinement_history = {{field.spacing(), best}};
  rep.sharp = std::fabs(best) <= 1e-8;
  note_clipping(rep, clipped);
  issue_verdict(rep);
  return rep;
}

VerificationReport modica_audit(const ScalarField& field,
                                const VariationalProfile& profile,
                                const SamplingPlan& plan) {
  require_certified(field);
  VariationalProfile on_range = profile;
  on_range.with_range({field.min_value(), field.max_value()});
  const double cu = on_range.c_sup();

  double best = -std::numeric_limits<double>::infinity();
  std::size_t bi = 0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    double g = field.gradient_norm[k];
    double defect = profile.K(g * g) + profile.Q(field.values[k]) - cu;
    if (defect > best) {
      best = defect;
      bi = k;
    }
  }

  VerificationReport rep;
  rep.kind = AuditKind::modica;
  rep.max_defect = best;
  rep.witness.x = field.point_at(bi);
  rep.tolerance_model = plan.base_tol;
  rep.refinement_history = {{field.spacing(), best}};
  issue_verdict(rep);
  return rep;
}

VerificationReport rigidity_audit(const ScalarField& field,
                                  const VariationalProfile& profile,
                                  double tol_rigidity) {
  require_certified(field);
  if (field.is_constant(1e-14))
    return vacuous_report(AuditKind::rigidity, "constant field");

  VerificationReport rep;
  rep.kind = AuditKind::rigidity;
  rep.tolerance_model = tol_rigidity;

  if (profile.tau() != 0.0) {
    rep.verdict = Verdict::inconclusive;
    rep.note = "rigidity characterization assumes tau = 0";
    return rep;
  }

  const double lo = field.min_value(), hi = field.max_value();
  VariationalProfile on_range = profile;
  on_range.with_range({lo, hi});
  const double cu = on_range.c_sup();
  const double endpoint_sup = std::max(profile.Q(lo), profile.Q(hi));
  double defect = std::fabs(cu - endpoint_sup);

  // Interior values at (near-)critical suprema of Q contradict rigidity.
  const double margin_u = 1e-6 * (hi - lo);
  std::size_t flagged = 0;
  std::size_t bi = 0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    double u = field.values[k];
    if (u <= lo + margin_u || u >= hi - margin_u) continue;
    if (profile.Q(u) >= cu - tol_rigidity &&
        std::fabs(profile.q(u)) <= tol_rigidity) {
      ++flagged;
      bi = k;
    }
  }
  if (flagged > 0) {
    defect = std::max(defect, 1.0);  // hard violation, not a grid artifact
    rep.structural = true;
    rep.witness.x = field.point_at(bi);
    rep.note = "interior value attains the potential supremum with q = 0 (" +
               std::to_string(flagged) + " samples)";
  }

  rep.max_defect = defect;
  rep.refinement_history = {{field.spacing(), defect}};
  issue_verdict(rep);
  return rep;
}

VerificationReport dirichlet_boundary_audit(const ScalarField& field,
                                            const InverseBarrier& inverse,
                                            const ModelManifold& model,
                                            const SamplingPlan& plan) {
  if (model.kind() != ModelKind::radial_ball)
    throw ParameterError("dirichlet audit: model must be a radial ball");
  return pair_scan(AuditKind::dirichlet_boundary, field, inverse, model, plan);
}

void recalibrate(std::vector<VerificationReport>& levels, double base_tol) {
  // With a single level there is nothing to fit: calibrating C from the
  // lone defect would make every positive defect self-certifying.
  double C = 0.0;
  if (levels.size() >= 2) {
    for (const auto& rep : levels)
      for (const auto& lvl : rep.refinement_history)
        if (lvl.max_defect > 0.0 && lvl.h > 0.0)
          C = std::max(C, lvl.max_defect / (lvl.h * lvl.h));
  }
  std::vector<RefinementLevel> merged;
  for (const auto& rep : levels)
    for (const auto& lvl : rep.refinement_history) merged.push_back(lvl);
  std::sort(merged.begin(), merged.end(),
            [](const RefinementLevel& a, const RefinementLevel& b) {
              return a.h > b.h;
            });
  for (auto& rep : levels) {
    double h = rep.refinement_history.empty() ? 0.0
                                              : rep.refinement_history[0].h;
    rep.tolerance_model = std::max(base_tol, 2.0 * C * h * h);
    rep.refinement_history = merged;
    issue_verdict(rep);
  }
}

std::optional<double> empirical_order(
    const std::vector<RefinementLevel>& hist) {
  std::optional<double> worst;
  for (std::size_t i = 0; i + 1 < hist.size(); ++i) {
    double d0 = std::fabs(hist[i].max_defect);
    double d1 = std::fabs(hist[i + 1].max_defect);
    if (d0 <= 0.0 || d1 <= 0.0 || hist[i].h == hist[i + 1].h) continue;
    double ord = std::log(d0 / d1) / std::log(hist[i].h / hist[i + 1].h);
    worst = worst ? std::min(*worst, ord) : ord;
  }
  return worst;
}

}  // namespace bbound
