// Acceptance suite: one checked criterion per test case, each printing a
// single [PASS]/[FAIL] line with its decisive metric and runtime.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bbound/builtins.hpp>
#include <bbound/pde.hpp>
#include <bbound/scenario.hpp>
#include <bbound/verify.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

using namespace bbound;

namespace {

Poly ac_well() { return Poly{{0.0, 0.0, 0.5, 0.0, -0.25}}; }
Poly double_well() { return Poly{{0.25, 0.0, -0.5, 0.0, 0.25}}; }

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void report_line(int criterion, bool pass, const std::string& what,
                 const std::string& metric, double runtime_s) {
  std::printf("[%s] criterion %d: %s (%s, %.2fs)\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), metric.c_str(), runtime_s);
  std::fflush(stdout);
}

std::string fmt(const char* k, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.3e", k, v);
  return buf;
}

// Fields produced by the suite, consumed by the rigidity criterion.
struct ProducedField {
  ScalarField field;
  VariationalProfile profile;
  std::string label;
};
std::vector<ProducedField>& produced() {
  static std::vector<ProducedField> fields;
  return fields;
}

ScalarField stripe_field(const ModelManifold& torus,
                         const VariationalProfile& pr, int n, double tol) {
  RelaxOptions ro;
  ro.nx = ro.ny = n;
  ro.tol = tol;
  ro.seed = SeedKind::stripe;
  ro.seed_amplitude = 0.35;
  return relax_to_steady(torus, pr, ro);
}

}  // namespace

TEST_CASE("criterion 1: modica equality for the 1-D kink") {
  Timer t;
  auto pr = VariationalProfile::linear(ac_well(), {-1.0, 1.0});
  auto model = ModelManifold::warped_product(1, {-9.0, 9.0}, flat_warp());
  auto kink = [](double s) { return std::tanh(s / std::sqrt(2.0)); };
  auto f = analytic_field_1d(
      model, kink,
      [&](double s) { return (1.0 - sq(kink(s))) / std::sqrt(2.0); }, 1025);
  auto rep = modica_audit(f, pr);
  double defect = std::fabs(rep.max_defect);
  double rt = t.seconds();
  bool pass = defect <= 1e-9 && rep.verdict == Verdict::pass && rt < 1.0;
  report_line(1, pass, "1-D Allen-Cahn kink Modica defect <= 1e-9",
              fmt("|defect|", defect), rt);
  CHECK(defect <= 1e-9);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rt < 1.0);
}

TEST_CASE("criterion 2: two-point sharpness on warped products") {
  Timer t;
  auto pr = VariationalProfile::linear(Poly{{0.0}}, {-0.5, 0.5});
  double worst = -1e300;
  for (int n : {2, 3}) {
    auto model =
        ModelManifold::warped_product(n, {-1.0, 1.0}, warp_factor(-1.0, 0.0));
    auto curve = solve_warped_barrier(pr.coefficients(), model.warp(), n, -1.0,
                                      1.0, {-0.5, 0.5});
    auto f = lift_barrier(model, curve, pr.coefficients());
    auto rep = two_point_audit(f, invert_barrier(curve), model);
    worst = std::max(worst, std::fabs(rep.max_defect));
    CHECK(rep.verdict == Verdict::pass);
  }
  double rt = t.seconds();
  bool pass = worst <= 1e-9 && rt < 5.0;
  report_line(2, pass, "symmetric warped fields give Z = 0 along s-lines",
              fmt("max|Z|", worst), rt);
  CHECK(worst <= 1e-9);
  CHECK(rt < 5.0);
}

TEST_CASE("criterion 3: strict estimates for the torus stripe under refinement") {
  const double L = 6.6;
  auto torus = ModelManifold::flat_torus({L, L});
  auto pr = VariationalProfile::linear(ac_well(), {-1.0, 1.0});

  bool negatives = true;
  std::vector<VerificationReport> modica_levels;
  double rt256 = 0.0;
  for (int n : {64, 128, 256}) {
    Timer level_t;
    auto f = stripe_field(torus, pr, n, 1e-7);
    VariationalProfile on_range = pr;
    on_range.with_range({f.min_value(), f.max_value()});
    auto curve = modica_barrier(on_range, on_range.c_sup() + 1e-3, 0.0);
    auto inv = invert_barrier(curve);
    auto grad = gradient_audit(f, curve, inv);
    auto two = two_point_audit(f, inv, torus);
    auto mod = modica_audit(f, pr);
    negatives = negatives && grad.max_defect < 0.0 && two.max_defect < 0.0;
    modica_levels.push_back(mod);
    if (n == 256) rt256 = level_t.seconds();
    produced().push_back({f, pr, "stripe-" + std::to_string(n)});
  }
  recalibrate(modica_levels, 1e-9);
  bool modica_ok = true;
  for (const auto& rep : modica_levels)
    modica_ok = modica_ok && rep.verdict == Verdict::pass;
  auto order = empirical_order(modica_levels.front().refinement_history);
  bool order_ok = order.has_value() && *order >= 1.8;
  bool pass = negatives && modica_ok && order_ok && rt256 < 120.0;
  report_line(3, pass,
              "stripe audits negative, Modica defect refines at order >= 1.8",
              fmt("order", order ? *order : 0.0) + ", " +
                  fmt("t256", rt256),
              rt256);
  CHECK(negatives);
  CHECK(modica_ok);
  REQUIRE(order.has_value());
  CHECK(*order >= 1.8);
  CHECK(rt256 < 120.0);
}

TEST_CASE("criterion 4: modica quadrature vs direct ODE integration") {
  Timer t;
  double worst = 0.0;
  for (double p : {2.0, 3.0}) {
    for (int qi = 0; qi < 2; ++qi) {
      Poly Q = qi == 0 ? ac_well() : Poly{{0.0, 1.0}};
      auto pr = p == 2.0 ? VariationalProfile::linear(Q, {-0.9, 0.9})
                         : VariationalProfile::p_power(p, Q, {-0.9, 0.9});
      auto curve = modica_barrier(pr, pr.c_sup() + 1e-2, 0.0);
      worst = std::max(worst, curve.ode_cross_defect);
    }
  }
  double rt = t.seconds();
  bool pass = worst <= 1e-6 && rt < 5.0;
  report_line(4, pass,
              "quadrature and ODE barrier routes agree for p in {2,3}",
              fmt("sup-gap", worst), rt);
  CHECK(worst <= 1e-6);
  CHECK(rt < 5.0);
}

TEST_CASE("criterion 5: sphere-family lower bound and interval growth") {
  Timer t;
  auto pr = VariationalProfile::linear(double_well(), {-0.9, 0.9});
  double cu = pr.c_sup();
  double worst_gap = 0.0, prev_len = 0.0;
  bool growth = true;
  for (double offset : {1e-1, 1e-2, 1e-3}) {
    auto curve = solve_sphere_family(pr, cu + offset, 2);
    double bound = std::sqrt(pr.invert_K(offset));
    double gap = 1e300;
    for (double d : curve.dphi) gap = std::min(gap, d - bound);
    worst_gap = std::min(worst_gap, gap);
    double len = curve.interval[1] - curve.interval[0];
    growth = growth && len > prev_len;
    prev_len = len;
  }
  double rt = t.seconds();
  bool pass = worst_gap >= -1e-10 && growth && rt < 5.0;
  report_line(5, pass,
              "family slope stays above sqrt(Kinv(c - c_u)); interval grows",
              fmt("min-gap", worst_gap), rt);
  CHECK(worst_gap >= -1e-10);
  CHECK(growth);
  CHECK(rt < 5.0);
}

TEST_CASE("criterion 7: anisotropic stripe on the quartic Minkowski torus") {
  Timer t;
  const double L = 6.6;
  MinkowskiNorm H(4.0, {1.0, 1.0});
  auto torus = ModelManifold::flat_torus_minkowski({L, L}, H);
  auto pr = VariationalProfile::linear(ac_well(), {-1.0, 1.0});

  std::vector<VerificationReport> modica_levels;
  bool tp_ok = true;
  for (int n : {64, 128}) {
    auto f = stripe_field(torus, pr, n, 1e-7);
    VariationalProfile on_range = pr;
    on_range.with_range({f.min_value(), f.max_value()});
    auto curve = modica_barrier(on_range, on_range.c_sup() + 1e-3, 0.0);
    auto two = two_point_audit(f, invert_barrier(curve), torus);
    tp_ok = tp_ok && two.max_defect < 0.0 && two.verdict == Verdict::pass;
    modica_levels.push_back(modica_audit(f, pr));
    if (n == 128) produced().push_back({f, pr, "aniso-stripe-128"});
  }
  recalibrate(modica_levels, 1e-9);
  bool modica_ok = true;
  for (const auto& rep : modica_levels)
    modica_ok = modica_ok && rep.verdict == Verdict::pass;
  auto order = empirical_order(modica_levels.front().refinement_history);
  double rt = t.seconds();
  bool pass = tp_ok && modica_ok && order && *order >= 1.8 && rt < 120.0;
  report_line(7, pass,
              "Minkowski Modica defect is O(h^2); H*-distance audit passes",
              fmt("order", order ? *order : 0.0), rt);
  CHECK(tp_ok);
  CHECK(modica_ok);
  REQUIRE(order.has_value());
  CHECK(*order >= 1.8);
  CHECK(rt < 120.0);
}

TEST_CASE("criterion 8: dirichlet ball with matched flat barrier") {
  Timer t;
  auto ball = ModelManifold::radial_ball(3, 1.0);
  auto pr = VariationalProfile::linear(Poly{{0.0, 6.0}}, {0.0, 1.0});
  SymmetricBC bc;
  bc.kind = SymmetricBC::Kind::center_dirichlet;
  bc.right_value = 0.0;
  bc.shoot_lo = -5.0;
  bc.shoot_hi = 5.0;
  auto f = solve_symmetric(ball, pr.coefficients(), bc);
  auto curve = solve_flat_barrier(pr.coefficients(), 0.0, 0.3,
                                  {f.min_value(), f.max_value()}, 0.0);
  SamplingPlan plan;
  plan.base_tol = 1e-8;
  auto rep = dirichlet_boundary_audit(f, invert_barrier(curve), ball, plan);
  produced().push_back({f, pr, "ball-torsion"});
  double rt = t.seconds();
  bool pass = rep.verdict == Verdict::pass && rep.max_defect <= 1e-8 &&
              rt < 5.0;
  report_line(8, pass, "radial torsion field passes the chord-distance audit",
              fmt("max Z", rep.max_defect), rt);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.max_defect <= 1e-8);
  CHECK(rt < 5.0);
}

TEST_CASE("criterion 6: rigidity characterization of produced fields") {
  Timer t;
  REQUIRE(!produced().empty());
  double worst = 0.0;
  bool all_pass = true;
  int checked = 0;
  for (const auto& item : produced()) {
    if (item.field.is_constant(1e-12)) continue;
    auto rep = rigidity_audit(item.field, item.profile, 1e-9);
    all_pass = all_pass && rep.verdict == Verdict::pass;
    worst = std::max(worst, rep.max_defect);
    ++checked;
  }
  double rt = t.seconds();
  bool pass = all_pass && checked >= 3;
  report_line(6, pass,
              "c_u equals the endpoint supremum on every nonconstant field",
              fmt("max|c_u - endpoint sup|", worst) + ", fields=" +
                  std::to_string(checked),
              rt);
  CHECK(all_pass);
  CHECK(checked >= 3);
}

TEST_CASE("criterion 9: oracle equivalences") {
  Timer t;
  auto cfg = parse_scenario(*builtin_scenario("oracle-equivalences"));
  auto result = run_scenario(cfg);
  double rt = t.seconds();
  bool pass = result.exit_code == 0 && rt < 10.0;
  std::string metrics;
  for (const auto& row : result.report["results"])
    metrics += row["check"].get<std::string>() + "=" +
               (row["verdict"] == "pass" ? "ok " : "FAIL ");
  report_line(9, pass, "invert-K / dual-norm / thin-torus / warp oracles",
              metrics, rt);
  CHECK(result.exit_code == 0);
  CHECK(rt < 10.0);
}
