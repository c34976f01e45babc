#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <bbound/barriers.hpp>
#include <bbound/geometry.hpp>
#include <bbound/profiles.hpp>

namespace bbound {

enum class FieldProvenance { symmetric_ode, relaxed, manufactured, analytic };

// A solution sample set on a model grid with certified residual. 1-D models
// carry an explicit coordinate grid; tori use an implicit nx-by-ny lattice.
struct ScalarField {
  ModelManifold model = ModelManifold::circle(1.0);
  FieldProvenance provenance = FieldProvenance::analytic;

  std::vector<double> grid;  // 1-D models only
  int nx = 0, ny = 0;        // torus only
  std::vector<double> values;
  std::vector<double> gradient_norm;

  double residual_norm = 0.0;
  double residual_norm_unregularized = 0.0;
  double declared_tol = 1e-8;

  bool is_grid2d() const { return nx > 0; }
  bool certified() const { return residual_norm <= declared_tol; }
  std::size_t size() const { return values.size(); }
  double min_value() const;
  double max_value() const;
  bool is_constant(double tol = 0.0) const;
  double spacing() const;  // characteristic h
  Point point_at(std::size_t idx) const;
};

struct SymmetricBC {
  enum class Kind {
    dirichlet,        // endpoint values on both ends (interval models)
    neumann,          // zero derivative both ends; shoots on u(a)
    center_dirichlet  // regular center + Dirichlet value at outer radius
  };
  Kind kind = Kind::dirichlet;
  double left_value = 0.0;
  double right_value = 0.0;
  double shoot_lo = 0.0;  // optional bracket for the free datum
  double shoot_hi = 0.0;
};

// Integrates the 1-D symmetric reduction of the isotropic equation on
// warped-product / sphere-radial / radial-ball / circle models.
ScalarField solve_symmetric(const ModelManifold& model,
                            const IsotropicCoefficients& coeffs,
                            const SymmetricBC& bc, int n_report = 1025,
                            double tol = 1e-8);

// Lifts a barrier onto its own model as u(x, s) = phi(s) and certifies the
// reduced equation residual.
ScalarField lift_barrier(const ModelManifold& model, const BarrierCurve& curve,
                         const IsotropicCoefficients& coeffs,
                         double tol = 1e-8);

enum class SeedKind { stripe, checkerboard, seeded_random };

struct RelaxOptions {
  int nx = 64, ny = 64;
  double tol = 1e-7;
  SeedKind seed = SeedKind::stripe;
  double seed_amplitude = 0.5;
  std::optional<std::vector<double>> seed_values;  // overrides seed kind
  std::optional<std::vector<double>> q_table;      // forcing instead of q(u)
  long max_pseudo_sweeps = 100000;
  int max_newton_iters = 60;
  int stall_window = 500;
  // Pseudo-time horizon before Newton engages regardless of progress: long
  // enough for pattern-forming transients, short enough that saddle steady
  // states (stripe kink pairs attract) are still in reach of Newton.
  double transient_time_cap = 20.0;
  double eps_reg = 1e-10;
};

// Damped pseudo-time iteration toward a steady state of the variational
// equation on a flat torus (isotropic or Minkowski flux per the model), with
// a Newton/CG fallback once the explicit sweep stalls above tolerance.
ScalarField relax_to_steady(const ModelManifold& torus,
                            const VariationalProfile& profile,
                            const RelaxOptions& opts);

// Residual of the discrete divergence-form operator at the given values.
double relax_residual(const ModelManifold& torus,
                      const VariationalProfile& profile,
                      const std::vector<double>& values, int nx, int ny,
                      const std::optional<std::vector<double>>& q_table = {});

struct ForcingTable {
  std::vector<double> q;
  std::vector<std::uint8_t> degenerate_mask;  // |grad u| < 1e-12 points
};

// Pointwise forcing making `values` an exact solution of the frame-split
// isotropic operator (alpha along the gradient, beta tangentially), built
// with the same 4th-order stencils the verifier uses.
ForcingTable manufactured_forcing(const ModelManifold& model,
                                  const std::vector<double>& values, int nx,
                                  int ny, const IsotropicCoefficients& coeffs);

// Divergence-form twin: forcing that cancels the relax operator exactly at
// `values` (discrete self-consistency oracle for the flux assembly).
ForcingTable manufactured_forcing_divform(const ModelManifold& model,
                                          const VariationalProfile& profile,
                                          const std::vector<double>& values,
                                          int nx, int ny);

// Fills gradient_norm by 4th-order central differences (periodic models) or
// one-sided 2nd-order stencils at interval ends; Minkowski models evaluate
// the norm H of the differential instead of the Euclidean magnitude.
void field_gradient_norms(ScalarField& field);

// Analytic field builders (1-D models and tori).
ScalarField analytic_field_1d(const ModelManifold& model,
                              const std::function<double(double)>& u,
                              const std::function<double(double)>& du,
                              int n_points, double residual_norm = 0.0,
                              double tol = 1e-8);
ScalarField analytic_field_torus(const ModelManifold& torus,
                                 const std::function<double(double, double)>& u,
                                 int nx, int ny);
ScalarField constant_field(const ModelManifold& model, double value,
                           int n_points);

}  // namespace bbound
