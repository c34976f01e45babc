#pragma once

#include <optional>
#include <string>
#include <vector>

#include <bbound/barriers.hpp>
#include <bbound/geometry.hpp>
#include <bbound/pde.hpp>
#include <bbound/profiles.hpp>

namespace bbound {

enum class AuditKind {
  two_point,
  gradient,
  modica,
  rigidity,
  dirichlet_boundary
};

enum class Verdict { pass, fail, inconclusive };

struct Witness {
  Point x{0, 0, 0};
  Point y{0, 0, 0};
  bool pair = false;  // two-point style witness
};

struct RefinementLevel {
  double h;
  double max_defect;
};

// A positive max_defect means the audited inequality is violated beyond the
// sampled arithmetic; the tolerance model separates discretization slack
// from genuine violation.
struct VerificationReport {
  AuditKind kind = AuditKind::two_point;
  double max_defect = 0.0;
  Witness witness;
  double tolerance_model = 1e-9;
  std::vector<RefinementLevel> refinement_history;
  Verdict verdict = Verdict::pass;
  bool sharp = false;
  bool vacuous = false;
  bool structural = false;  // violation independent of grid resolution
  std::string note;
};

struct SamplingPlan {
  int subsample = 2048;   // 2-D stratified sample size
  unsigned seed = 1;      // offset seed for stratification
  double base_tol = 1e-9; // floor of the tolerance model
};

std::string audit_kind_name(AuditKind k);
std::string verdict_name(Verdict v);

// Z(x, y) = psi(u(y)) - psi(u(x)) - d(x, y) over the sampling plan.
VerificationReport two_point_audit(const ScalarField& field,
                                   const InverseBarrier& inverse,
                                   const ModelManifold& model,
                                   const SamplingPlan& plan = {});

// max |grad u|(x) - phi'(psi(u(x))); defects within 1e-8 of zero flag sharp.
VerificationReport gradient_audit(const ScalarField& field,
                                  const BarrierCurve& curve,
                                  const InverseBarrier& inverse,
                                  const SamplingPlan& plan = {});

// max K(F^2(grad u)) + Q(u) - c_u with c_u over the field's own range.
VerificationReport modica_audit(const ScalarField& field,
                                const VariationalProfile& profile,
                                const SamplingPlan& plan = {});

// c_u characterization and interior-critical-supremum exclusion.
VerificationReport rigidity_audit(const ScalarField& field,
                                  const VariationalProfile& profile,
                                  double tol_rigidity = 1e-9);

// Two-point audit with the generalized (chord) distance on a radial ball,
// boundary samples included.
VerificationReport dirichlet_boundary_audit(const ScalarField& field,
                                            const InverseBarrier& inverse,
                                            const ModelManifold& model,
                                            const SamplingPlan& plan = {});

// Tolerance-model calibration across refinement levels: fits C in
// defect ~= C h^2 and re-issues verdicts at max(base_tol, 2 C h^2).
// Levels with fewer than two entries stay inconclusive when failing.
void recalibrate(std::vector<VerificationReport>& levels, double base_tol);

// Empirical order between consecutive refinement levels (positive defects).
std::optional<double> empirical_order(const std::vector<RefinementLevel>& hist);

}  // namespace bbound
