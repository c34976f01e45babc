#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bbound/profiles.hpp>

#include <cmath>

using namespace bbound;

namespace {

Poly zero_poly() { return Poly{{0.0}}; }

// Q(u) = u^2/2 - u^4/4, the divergence-form Allen-Cahn well (q = u - u^3).
Poly ac_well() { return Poly{{0.0, 0.0, 0.5, 0.0, -0.25}}; }

// W(u) = (1 - u^2)^2 / 4, interior-maximum double well.
Poly double_well() { return Poly{{0.25, 0.0, -0.5, 0.0, 0.25}}; }

}  // namespace

TEST_CASE("coefficients of the linear profile are the Laplacian pair") {
  auto pr = VariationalProfile::linear(zero_poly(), {-1, 1});
  auto co = pr.coefficients();
  CHECK(co.alpha(0.0, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(co.beta(0.0, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("coefficients of the p=4 power profile at t=1") {
  // Phi(s) = s^2/2: Lambda(1) = 2*1 + 1 = 3, beta = Phi'(1) = 1.
  auto pr = VariationalProfile::p_power(4.0, zero_poly(), {-1, 1});
  auto co = pr.coefficients();
  CHECK(co.alpha(0.0, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(co.beta(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("q at the critical point of the symmetric double well") {
  auto pr = VariationalProfile::linear(double_well(), {-1, 1});
  CHECK(pr.q(0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("K evaluations") {
  auto lin = VariationalProfile::linear(zero_poly(), {-1, 1});
  CHECK(lin.K(4.0) == doctest::Approx(2.0).epsilon(1e-14));  // K = s/2
  CHECK(lin.K(0.0) == 0.0);
  // K(s) = (1 - 1/p) s^(p/2); p = 3, s = 1 -> 2/3.
  auto p3 = VariationalProfile::p_power(3.0, zero_poly(), {-1, 1});
  CHECK(p3.K(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(p3.K(-0.5), DomainError);
}

TEST_CASE("invert_K against closed forms") {
  auto lin = VariationalProfile::linear(zero_poly(), {-1, 1});
  CHECK(lin.invert_K(3.0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(lin.invert_K(0.0) == 0.0);
  // K(s) = (3/4) s^2 for p = 4; K^{-1}(0.75) = 1.
  auto p4 = VariationalProfile::p_power(4.0, zero_poly(), {-1, 1});
  CHECK(p4.invert_K(0.75) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(lin.invert_K(-1.0), RangeError);
}

TEST_CASE("invert_K o K is the identity on a log grid") {
  for (double p : {2.0, 2.5, 3.0, 4.0}) {
    auto pr = VariationalProfile::p_power(p, zero_poly(), {-1, 1});
    for (int k = -10; k <= 6; ++k) {
      double s = std::pow(10.0, 0.5 * k);
      double rel = std::fabs(pr.invert_K(pr.K(s)) - s) / std::max(1.0, s);
      CHECK(rel < 1e-10);
    }
  }
}

TEST_CASE("c_sup of the double well over a symmetric range") {
  auto pr = VariationalProfile::linear(double_well(), {-0.9, 0.9});
  CHECK(pr.c_sup() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::fabs(pr.argmax_Q()) < 1e-6);
}

TEST_CASE("c_sup of constants and endpoint maxima") {
  auto c7 = VariationalProfile::linear(Poly{{7.0}}, {-2, 3});
  CHECK(c7.c_sup() == doctest::Approx(7.0).epsilon(1e-14));
  auto lin = VariationalProfile::linear(Poly{{0.0, 1.0}}, {0, 1});
  CHECK(lin.c_sup() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lin.argmax_Q() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("c_sup never falls below the endpoint values") {
  auto pr = VariationalProfile::linear(ac_well(), {-0.97, 0.88});
  double cu = pr.c_sup();
  CHECK(cu >= pr.Q(-0.97) - 1e-15);
  CHECK(cu >= pr.Q(0.88) - 1e-15);
  // Q is increasing in |u| on (-1, 1): endpoint -0.97 carries the sup.
  CHECK(cu == doctest::Approx(pr.Q(-0.97)).epsilon(1e-13));
}

TEST_CASE("structure check of the p-Laplace model has nonnegative margins") {
  std::vector<double> ts;
  for (int k = -6; k <= 4; ++k) ts.push_back(std::pow(10.0, 0.5 * k));
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    auto pr = VariationalProfile::p_power(p, zero_poly(), {-1, 1});
    auto rep = pr.check_structure(ts);
    CHECK(rep.all_ok);
    CHECK(rep.worst_margin >= -1e-10);
  }
}

TEST_CASE("structure check flags a super-p growth profile") {
  // Phi(s) = s^2 posing as p = 2: Phi'(t^2) = 2 t^2 unbounded vs c2.
  auto pr = VariationalProfile::custom(
      [](double s) { return s * s; }, [](double s) { return 2 * s; },
      [](double) { return 2.0; }, zero_poly(), 2.0, {-1, 1});
  pr.with_structure_constants(1.0, 1.0);
  auto rep = pr.check_structure({10.0});
  CHECK_FALSE(rep.all_ok);
}

TEST_CASE("linear profile structure margins are exactly zero") {
  auto pr = VariationalProfile::linear(zero_poly(), {-1, 1});
  auto rep = pr.check_structure({0.5, 1.0, 2.0});
  for (const auto& s : rep.samples) {
    CHECK(std::fabs(s.beta_margin_lo) < 1e-15);
    CHECK(std::fabs(s.beta_margin_hi) < 1e-15);
  }
}

TEST_CASE("K lower bound from the structure constants (tau = 0)") {
  // K(s) >= (c1/p) s^(p/2) for structure-passing profiles.
  for (double p : {2.0, 3.0, 4.0}) {
    auto pr = VariationalProfile::p_power(p, zero_poly(), {-1, 1});
    for (int k = -8; k <= 4; ++k) {
      double s = std::pow(10.0, 0.5 * k);
      CHECK(pr.K(s) >= (pr.c1() / p) * std::pow(s, p / 2.0) - 1e-14);
    }
  }
}

TEST_CASE("alpha from coefficients reproduces Lambda exactly") {
  auto pr = VariationalProfile::p_power(3.0, ac_well(), {-1, 1});
  auto co = pr.coefficients();
  for (double t : {0.3, 1.0, 2.7})
    CHECK(co.alpha(0.1, t) == pr.Lambda(t * t));
}

TEST_CASE("non-finite coefficient evaluation raises a domain error") {
  // p < 2 at zero gradient: Phi'(0) = +inf.
  auto pr = VariationalProfile::p_power(1.5, zero_poly(), {-1, 1});
  auto co = pr.coefficients();
  CHECK_THROWS_AS(co.beta(0.0, 0.0), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(VariationalProfile::p_power(1.0, zero_poly(), {-1, 1}),
                  ParameterError);
  CHECK_THROWS_AS(VariationalProfile::p_power(2.0, zero_poly(), {1, -1}),
                  ParameterError);
  auto pr = VariationalProfile::linear(zero_poly(), {-1, 1});
  CHECK_THROWS_AS(pr.with_structure_constants(2.0, 1.0), ParameterError);
  CHECK_THROWS_AS(pr.with_structure_constants(-1.0, 1.0), ParameterError);
}

TEST_CASE("custom profiles fall back to finite-difference derivatives") {
  // Supply only Phi; Phi' and Phi'' come from central differences.
  auto pr = VariationalProfile::custom(
      [](double s) { return (2.0 / 3.0) * std::pow(s, 1.5); }, nullptr,
      nullptr, Poly{{0.0}}, 3.0, {-1.0, 1.0});
  auto exact = VariationalProfile::p_power(3.0, Poly{{0.0}}, {-1.0, 1.0});
  for (double s : {0.3, 1.0, 2.5, 7.0}) {
    CHECK(pr.dPhi(s) == doctest::Approx(exact.dPhi(s)).epsilon(1e-8));
    CHECK(pr.K(s) == doctest::Approx(exact.K(s)).epsilon(1e-8));
    CHECK(pr.Lambda(s) == doctest::Approx(exact.Lambda(s)).epsilon(2e-5));
  }
  CHECK(pr.invert_K(exact.K(2.0)) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("tabulated potentials track their polynomial source") {
  auto make_table = [] {
    std::vector<double> u, Q;
    for (int i = 0; i <= 400; ++i) {
      double v = -1.2 + 2.4 * i / 400.0;
      u.push_back(v);
      Q.push_back(0.5 * v * v - 0.25 * v * v * v * v);
    }
    return std::pair{u, Q};
  };
  auto [u, Qv] = make_table();
  auto tab = VariationalProfile::linear(Poly{{0.0}}, {-0.9, 0.9});
  tab.with_tabulated_Q(u, Qv);
  auto poly = VariationalProfile::linear(ac_well(), {-0.9, 0.9});
  CHECK(tab.c_sup() == doctest::Approx(poly.c_sup()).epsilon(1e-8));
  for (double v : {-0.8, -0.3, 0.0, 0.5, 0.85}) {
    CHECK(tab.Q(v) == doctest::Approx(poly.Q(v)).epsilon(1e-7));
    CHECK(tab.q(v) == doctest::Approx(poly.q(v)).epsilon(1e-4));
  }
  CHECK_THROWS_AS(tab.with_tabulated_Q({0.0, 1.0}, {0.0, 1.0}),
                  ParameterError);
}
