#include <bbound/builtins.hpp>

namespace bbound {

namespace {

const char* kKink1d = R"json({
  "spec_version": 1,
  "name": "allen-cahn-kink-1d",
  "kind": "pipeline",
  "profile": {"kind": "allen-cahn-well", "range": [-1.0, 1.0]},
  "model": {"kind": "warped-product", "dimension": 1, "interval": [-9.0, 9.0]},
  "field": {"kind": "analytic", "analytic": "tanh-kink", "n_points": 1025},
  "audits": [
    {"kind": "modica", "tolerance": 1e-9},
    {"kind": "rigidity", "tolerance": 1e-9}
  ]
})json";

const char* kWarped2d = R"json({
  "spec_version": 1,
  "name": "warped-sharpness-2d",
  "kind": "pipeline",
  "profile": {"kind": "linear", "Q": "zero", "range": [-0.5, 0.5]},
  "model": {"kind": "warped-product", "dimension": 2, "interval": [-1.0, 1.0],
            "warp": {"kappa": -1.0, "z0": 0.0}},
  "barrier": {"kind": "warped", "range": [-0.5, 0.5]},
  "field": {"kind": "lift", "n_points": 1025},
  "audits": [
    {"kind": "two-point", "tolerance": 1e-9},
    {"kind": "gradient", "tolerance": 1e-9}
  ]
})json";

const char* kWarped3d = R"json({
  "spec_version": 1,
  "name": "warped-sharpness-3d",
  "kind": "pipeline",
  "profile": {"kind": "linear", "Q": "zero", "range": [-0.5, 0.5]},
  "model": {"kind": "warped-product", "dimension": 3, "interval": [-1.0, 1.0],
            "warp": {"kappa": -1.0, "z0": 0.0}},
  "barrier": {"kind": "warped", "range": [-0.5, 0.5]},
  "field": {"kind": "lift", "n_points": 1025},
  "audits": [
    {"kind": "two-point", "tolerance": 1e-9},
    {"kind": "gradient", "tolerance": 1e-9}
  ]
})json";

const char* kStripe = R"json({
  "spec_version": 1,
  "name": "allen-cahn-stripe-torus",
  "kind": "pipeline",
  "profile": {"kind": "allen-cahn-well", "range": [-1.0, 1.0]},
  "model": {"kind": "flat-torus", "periods": [6.6, 6.6]},
  "barrier": {"kind": "modica", "c_offsets": [1e-3], "s0": 0.0},
  "field": {"kind": "relax", "seed": "stripe", "seed_amplitude": 0.35,
            "resolutions": [64, 128, 256], "tol": 1e-7},
  "audits": [
    {"kind": "gradient", "tolerance": 1e-9},
    {"kind": "two-point", "tolerance": 1e-9},
    {"kind": "modica", "tolerance": 1e-9},
    {"kind": "rigidity", "tolerance": 1e-7}
  ]
})json";

const char* kModicaCross = R"json({
  "spec_version": 1,
  "name": "modica-cross-validation",
  "kind": "barrier-study",
  "profiles": [
    {"kind": "linear", "Q": "allen-cahn-well", "range": [-0.9, 0.9]},
    {"kind": "p-laplace", "p": 3.0, "Q": "allen-cahn-well", "range": [-0.9, 0.9]},
    {"kind": "linear", "Q": "linear", "range": [-0.9, 0.9]},
    {"kind": "p-laplace", "p": 3.0, "Q": "linear", "range": [-0.9, 0.9]}
  ],
  "barrier": {"kind": "modica", "c_offsets": [1e-2], "s0": 0.0,
              "first_integral_tol": 1e-8, "ode_cross_tol": 1e-6}
})json";

const char* kSphereFamily = R"json({
  "spec_version": 1,
  "name": "sphere-family-lower-bound",
  "kind": "barrier-study",
  "profiles": [
    {"kind": "linear", "Q": "double-well", "range": [-0.9, 0.9]}
  ],
  "barrier": {"kind": "sphere-family", "dimension": 2,
              "c_offsets": [1e-1, 1e-2, 1e-3], "lower_bound_tol": 1e-10}
})json";

const char* kAniso = R"json({
  "spec_version": 1,
  "name": "anisotropic-stripe-torus",
  "kind": "pipeline",
  "profile": {"kind": "allen-cahn-well", "range": [-1.0, 1.0]},
  "model": {"kind": "flat-torus", "periods": [6.6, 6.6],
            "norm": {"exponent": 4.0, "weights": [1.0, 1.0]}},
  "barrier": {"kind": "modica", "c_offsets": [1e-3], "s0": 0.0},
  "field": {"kind": "relax", "seed": "stripe", "seed_amplitude": 0.35,
            "resolutions": [64, 128], "tol": 1e-7},
  "audits": [
    {"kind": "modica", "tolerance": 1e-9},
    {"kind": "two-point", "tolerance": 1e-9},
    {"kind": "rigidity", "tolerance": 1e-7}
  ]
})json";

const char* kDirichletBall = R"json({
  "spec_version": 1,
  "name": "dirichlet-ball-torsion",
  "kind": "pipeline",
  "profile": {"kind": "linear", "Q": [0.0, 6.0], "range": [0.0, 1.0]},
  "model": {"kind": "radial-ball", "dimension": 3, "radius": 1.0},
  "barrier": {"kind": "flat", "interval": [0.0, 0.3], "delta": [0.0]},
  "field": {"kind": "symmetric", "n_points": 1025, "tol": 1e-7,
            "bc": {"kind": "center-dirichlet", "right": 0.0, "shoot": [-5.0, 5.0]}},
  "audits": [
    {"kind": "dirichlet-boundary", "tolerance": 1e-8},
    {"kind": "gradient", "tolerance": 1e-8},
    {"kind": "rigidity", "tolerance": 1e-9}
  ]
})json";

// Perturbed-barrier schedule: defects scale linearly with delta and the
// delta -> 0 limit recovers the sharp two-point estimate.
const char* kKinkDelta = R"json({
  "spec_version": 1,
  "name": "kink-delta-schedule",
  "kind": "pipeline",
  "profile": {"kind": "allen-cahn-well", "range": [-1.0, 1.0]},
  "model": {"kind": "warped-product", "dimension": 1,
            "interval": [-2.7519325239534744, 2.7519325239534744]},
  "barrier": {"kind": "flat", "interval": [-2.7519325239534744, 2.7519325239534744],
              "delta": [0.0, 1e-2, 1e-3, 1e-4]},
  "field": {"kind": "analytic", "analytic": "tanh-kink", "n_points": 1025},
  "audits": [
    {"kind": "two-point", "tolerance": 2e-2},
    {"kind": "gradient", "tolerance": 5e-3}
  ]
})json";

const char* kOracles = R"json({
  "spec_version": 1,
  "name": "oracle-equivalences",
  "kind": "oracles"
})json";

}  // namespace

const std::vector<std::pair<std::string, std::string>>& builtin_scenarios() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"allen-cahn-kink-1d", kKink1d},
      {"warped-sharpness-2d", kWarped2d},
      {"warped-sharpness-3d", kWarped3d},
      {"allen-cahn-stripe-torus", kStripe},
      {"modica-cross-validation", kModicaCross},
      {"sphere-family-lower-bound", kSphereFamily},
      {"anisotropic-stripe-torus", kAniso},
      {"dirichlet-ball-torsion", kDirichletBall},
      {"kink-delta-schedule", kKinkDelta},
      {"oracle-equivalences", kOracles},
  };
  return table;
}

std::optional<std::string> builtin_scenario(const std::string& name) {
  for (const auto& [n, text] : builtin_scenarios())
    if (n == name) return std::string(text);
  return std::nullopt;
}

}  // namespace bbound
