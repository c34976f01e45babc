#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bbound/geometry.hpp>
#include <bbound/numerics/rootfind.hpp>

#include <cmath>
#include <random>

using namespace bbound;

TEST_CASE("cosh warp at the origin") {
  WarpFactor w = warp_factor(-1.0, 0.0);
  CHECK(w.rho(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.drho(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(w.log_deriv_prime(0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("warp ODE residual vanishes to rounding") {
  for (double kappa : {-1.0, -4.0}) {
    WarpFactor w = warp_factor(kappa, 0.3);
    for (int i = 0; i <= 1000; ++i) {
      double z = -2.0 + 4.0 * i / 1000.0;
      CHECK(std::fabs(w.ddrho(z) + kappa * w.rho(z)) <= 1e-14 * w.rho(z));
      CHECK(w.log_deriv_prime(z) > 0.0);
    }
  }
}

TEST_CASE("warp with kappa = -4 matches the closed form of (rho'/rho)'") {
  WarpFactor w = warp_factor(-4.0, 0.3);
  for (int i = 0; i <= 100; ++i) {
    double z = -1.0 + 2.0 * i / 100.0;
    double expect = 4.0 / sq(std::cosh(2.0 * (z + 0.3)));
    CHECK(w.log_deriv_prime(z) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("warp factor rejects nonnegative curvature") {
  CHECK_THROWS_AS(warp_factor(0.0, 0.0), ParameterError);
  CHECK_THROWS_AS(warp_factor(1.0, 0.0), ParameterError);
}

TEST_CASE("torus wraparound distance") {
  auto t = ModelManifold::flat_torus({1.0, 1.0});
  CHECK(t.distance({0.0, 0.0, 0}, {0.6, 0.0, 0}) ==
        doctest::Approx(0.4).epsilon(1e-14));
  CHECK(t.distance({0.1, 0.9, 0}, {0.9, 0.1, 0}) ==
        doctest::Approx(std::sqrt(0.08)).epsilon(1e-12));
}

TEST_CASE("circle distance of antipodal points") {
  auto c = ModelManifold::circle(1.0);
  CHECK(c.distance({0.0, 0, 0}, {M_PI, 0, 0}) ==
        doctest::Approx(M_PI).epsilon(1e-14));
}

TEST_CASE("torus distance never exceeds the direct chart difference") {
  auto t = ModelManifold::flat_torus({2.0, 3.0});
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dx(0.0, 2.0), dy(0.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    Point a{dx(rng), dy(rng), 0}, b{dx(rng), dy(rng), 0};
    double direct = std::hypot(b[0] - a[0], b[1] - a[1]);
    CHECK(t.distance(a, b) <= direct + 1e-12);
    CHECK(t.distance(a, b) == doctest::Approx(t.distance(b, a)).epsilon(1e-13));
  }
}

TEST_CASE("dual of the euclidean norm is itself") {
  MinkowskiNorm H(2.0, {1.0, 1.0});
  Point v{0.6, -0.8, 0};
  CHECK(H.dual(v, 2) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(H.dual({0, 0, 0}, 2) == 0.0);
}

TEST_CASE("dual of the quartic norm matches the Hoelder pair (4, 4/3)") {
  MinkowskiNorm H(4.0, {1.0, 1.0});
  CHECK(H.dual({1.0, 0.0, 0}, 2) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(H.dual({1.0, 1.0, 0}, 2) ==
        doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-8));
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    Point v{d(rng), d(rng), 0};
    if (std::fabs(v[0]) + std::fabs(v[1]) < 1e-6) continue;
    double expect = std::pow(std::pow(std::fabs(v[0]), 4.0 / 3.0) +
                                 std::pow(std::fabs(v[1]), 4.0 / 3.0),
                             0.75);
    CHECK(H.dual(v, 2) == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("dual norm is positively homogeneous") {
  MinkowskiNorm H(4.0, {1.0, 0.7});
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Point v{d(rng), d(rng), 0};
    Point v2{2 * v[0], 2 * v[1], 0};
    CHECK(H.dual(v2, 2) == doctest::Approx(2.0 * H.dual(v, 2)).epsilon(1e-9));
  }
}

TEST_CASE("pairing bound <v, Y> <= H*(v) H(Y)") {
  MinkowskiNorm H(4.0, {1.0, 1.0});
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    Point v{d(rng), d(rng), 0}, y{d(rng), d(rng), 0};
    double pair = v[0] * y[0] + v[1] * y[1];
    CHECK(pair <= H.dual(v, 2) * H(y, 2) + 1e-9);
  }
}

TEST_CASE("minkowski torus distance via the dual norm") {
  MinkowskiNorm H(4.0, {1.0, 1.0});
  auto t = ModelManifold::flat_torus_minkowski({1.0, 1.0}, H);
  CHECK(t.distance({0.0, 0.0, 0}, {0.6, 0.0, 0}) ==
        doctest::Approx(0.4).epsilon(1e-8));
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    Point a{d(rng), d(rng), 0}, b{d(rng), d(rng), 0}, c{d(rng), d(rng), 0};
    CHECK(t.distance(a, c) <= t.distance(a, b) + t.distance(b, c) + 1e-9);
  }
}

TEST_CASE("ricci bounds and theorem routing") {
  auto torus = ModelManifold::flat_torus({1.0, 1.0});
  auto ir = torus.ricci_lower_bound();
  CHECK(ir.lower_bound == 0.0);
  CHECK(ir.thm1);

  auto warped = ModelManifold::warped_product(3, {-1.0, 1.0},
                                              warp_factor(-1.0, 0.0));
  auto iw = warped.ricci_lower_bound();
  CHECK(iw.lower_bound == doctest::Approx(-2.0));
  CHECK(iw.thm2);

  auto sph = ModelManifold::sphere_radial(2, 1.0);
  auto is = sph.ricci_lower_bound();
  CHECK(is.lower_bound == doctest::Approx(1.0));
  CHECK(is.family);
}

TEST_CASE("strong convexity screening") {
  CHECK(MinkowskiNorm(2.0, {1.0, 1.0}).strongly_convex(2));
  CHECK(MinkowskiNorm(4.0, {1.0, 1.0}).strongly_convex(2));
}

TEST_CASE("model validation errors") {
  CHECK_THROWS_AS(ModelManifold::flat_torus({-1.0}), ParameterError);
  CHECK_THROWS_AS(ModelManifold::circle(0.0), ParameterError);
  CHECK_THROWS_AS(ModelManifold::sphere_radial(1, 1.0), ParameterError);
  CHECK_THROWS_AS(
      ModelManifold::circle(1.0).distance({-5.0, 0, 0}, {0.0, 0, 0}),
      DomainError);
}

TEST_CASE("warped product drift matches (n-1) rho'/rho") {
  auto m = ModelManifold::warped_product(2, {-1.0, 1.0}, warp_factor(-1.0, 0.0));
  CHECK(m.symmetric_drift(0.5) == doctest::Approx(std::tanh(0.5)).epsilon(1e-14));
  auto ball = ModelManifold::radial_ball(3, 1.0);
  CHECK(ball.symmetric_drift(0.5) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("double dual recovers the norm at sampled directions") {
  // H** = H: evaluate the numeric dual of the analytic dual norm.
  MinkowskiNorm H(4.0, {1.0, 0.7});
  // H* is the Hoelder pair of H: exponent 4/3 with transformed weights;
  // dualizing it by direct maximization must reproduce H.
  double astar = 4.0 / 3.0;
  std::vector<double> wstar{std::pow(1.0, -astar / 4.0),
                            std::pow(0.7, -astar / 4.0)};
  for (int k = 0; k < 16; ++k) {
    double th = (k + 0.5) * 2.0 * M_PI / 16.0;
    Point v{1.3 * std::cos(th), 1.3 * std::sin(th), 0.0};
    // sup <v, y> / H*(y) over angles, with H* evaluated in closed form.
    auto ratio = [&](double a) {
      Point y{std::cos(a), std::sin(a), 0.0};
      double hs = std::pow(wstar[0] * std::pow(std::fabs(y[0]), astar) +
                               wstar[1] * std::pow(std::fabs(y[1]), astar),
                           1.0 / astar);
      return (v[0] * y[0] + v[1] * y[1]) / hs;
    };
    double best = -1e300, best_a = 0.0;
    for (int s = 0; s < 256; ++s) {
      double a = s * 2.0 * M_PI / 256.0;
      if (ratio(a) > best) {
        best = ratio(a);
        best_a = a;
      }
    }
    double span = 2.0 * M_PI / 256.0;
    double polished = bbound::numerics::golden_max(
        ratio, best_a - span, best_a + span, 1e-10);
    best = std::max(best, ratio(polished));
    CHECK(best <= H(v, 2) + 1e-6);
    CHECK(best >= H(v, 2) - 1e-6);
  }
}
