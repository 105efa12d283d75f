#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sympcap/ehz.hpp"
#include "sympcap/error.hpp"

namespace sympcap {
namespace {

constexpr double kPi = std::numbers::pi;

// Loop t -> (a cos t, b sin t) in R^2 sampled at m + 1 points over [0, 2 pi].
Mat planar_loop(double a, double b, int m, bool reversed = false) {
  Mat s(m + 1, 2);
  for (int i = 0; i <= m; ++i) {
    const double t = 2.0 * kPi * i / m * (reversed ? -1.0 : 1.0);
    s(i, 0) = a * std::cos(t);
    s(i, 1) = b * std::sin(t);
  }
  return s;
}

// The unit circle in the (q1, p1)-plane of R^4 traversed by x' = Jx.
Mat ball_orbit_samples(int m) {
  Mat s = Mat::Zero(m + 1, 4);
  for (int i = 0; i <= m; ++i) {
    const double t = 2.0 * kPi * i / m;
    s(i, 0) = std::cos(t);
    s(i, 2) = std::sin(t);
  }
  return s;
}

Vec central_difference(const SmoothGauge& g, const Vec& x, double h) {
  Vec out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a(i) += h;
    b(i) -= h;
    out(i) = (g.value(a) - g.value(b)) / (2.0 * h);
  }
  return out;
}

TEST(GradientGauge, BallAndEllipsoidExamples) {
  Vec e = Vec::Zero(4);
  e(0) = 1.0;
  EXPECT_LT((gradient_gauge(Body::ball(4), e) - e).norm(), 1e-14);

  const Mat q = Vec((Vec(4) << 1.0, 1.0, 0.25, 0.25).finished()).asDiagonal();
  const Body ell = Body::ellipsoid(q);
  Vec x = Vec::Zero(4);
  x(2) = 2.0;
  const Vec grad = gradient_gauge(ell, x);
  Vec expect = Vec::Zero(4);
  expect(2) = 0.5;
  EXPECT_LT((grad - expect).norm(), 1e-14);
  EXPECT_NEAR(gauge(polar(ell), grad), 1.0, 1e-12);
}

TEST(GradientGauge, PolytopeNeedsSmoothing) {
  Vec x = Vec::Ones(4);
  try {
    gradient_gauge(Body::cube(4), x);
    FAIL() << "expected a smoothness error";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kSmoothness);
  }
}

TEST(GradientGauge, GradientMapsBoundaryToPolarBoundary) {
  std::mt19937_64 rng(11);
  const double radii[] = {1.0, 2.0};
  const Body bodies[] = {Body::ellipsoid_radii(radii),
                         Body::linear_image(Body::ball(4), testing::random_symplectic(rng, 2).linear())};
  for (const Body& k : bodies) {
    const Body k_polar = polar(k);
    for (int i = 0; i < 200; ++i) {
      Vec x = testing::random_vec(rng, 4);
      x /= gauge(k, x);
      const Vec grad = gradient_gauge(k, x);
      EXPECT_NEAR(x.dot(grad), 1.0, 1e-8);
      EXPECT_NEAR(gauge(k_polar, grad), 1.0, 1e-6);
    }
  }
}

TEST(SmoothGauge, PowerSumGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  const SmoothGauge cube = SmoothGauge::from_body(Body::cube(4));
  EXPECT_EQ(cube.tag(), "power-sum m=8");
  EXPECT_EQ(cube.pairs(), 4);
  for (int i = 0; i < 200; ++i) {
    Vec x = testing::random_vec(rng, 4);
    x /= cube.value(x);
    const Vec grad = cube.gradient(x);
    EXPECT_NEAR(x.dot(grad), 1.0, 1e-8);
    EXPECT_LT((grad - central_difference(cube, x, 1e-5)).lpNorm<Eigen::Infinity>(), 1e-5);
  }
}

TEST(SmoothGauge, SurrogateSitsInsidePolytopeUpToInflation) {
  std::mt19937_64 rng(8);
  const Body k = Body::cube(4);
  const SmoothGauge g = SmoothGauge::from_body(k);
  for (int i = 0; i < 200; ++i) {
    const Vec x = testing::random_vec(rng, 4);
    EXPECT_LE(gauge(k, x), g.value(x) * (1.0 + 1e-12));
    EXPECT_LE(g.value(x), g.inflation() * gauge(k, x) * (1.0 + 1e-12));
  }
}

TEST(Action, UnitCircle) {
  const Orbit forward = make_orbit(planar_loop(1.0, 1.0, 1000), 2.0 * kPi);
  EXPECT_NEAR(forward.signed_action, kPi, 1e-5);
  const Orbit backward = make_orbit(planar_loop(1.0, 1.0, 1000, true), 2.0 * kPi);
  EXPECT_NEAR(backward.signed_action, -kPi, 1e-5);
  EXPECT_NEAR(action(backward), kPi, 1e-5);
}

TEST(Action, EllipseMatchesShoelace) {
  const Mat loop = planar_loop(2.0, 1.0, 1000);
  const Orbit orbit = make_orbit(loop, 2.0 * kPi);
  EXPECT_NEAR(orbit.action, 2.0 * kPi, 1e-4);
  EXPECT_NEAR(orbit.action, oracle::hull_area(loop), 1e-4);
}

TEST(Action, OpenLoopIsRejected) {
  Mat loop = planar_loop(1.0, 1.0, 100);
  loop.row(100) << 0.9, 0.1;
  const Orbit orbit = make_orbit(loop, 2.0 * kPi);
  try {
    action(orbit);
    FAIL() << "expected a closure error";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kClosure);
  }
}

TEST(Shoot, UnitBall) {
  Vec x0 = Vec::Zero(4);
  x0(0) = 1.0;
  const Orbit orbit = shoot_characteristic(Body::ball(4), x0);
  EXPECT_NEAR(orbit.period, 2.0 * kPi, 1e-6);
  EXPECT_NEAR(orbit.action, kPi, 1e-6);
  // The orbit stays in the (q1, p1)-plane.
  EXPECT_LT(orbit.samples.col(1).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(orbit.samples.col(3).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE(verify_action_period(orbit), 1e-5 * orbit.period);
  EXPECT_LE(tangency_residual(SmoothGauge::from_body(Body::ball(4)), orbit), 1e-5);
}

TEST(Shoot, EllipsoidCoordinatePlanes) {
  const double radii[] = {1.0, 2.0};
  const Body k = Body::ellipsoid_radii(radii);
  const SmoothGauge g = SmoothGauge::from_body(k);

  Vec small = Vec::Zero(4);
  small(0) = 1.0;
  const Orbit inner = shoot_characteristic(k, small);
  EXPECT_NEAR(inner.action, kPi, 1e-5);
  EXPECT_NEAR(inner.period, 2.0 * kPi, 1e-5);
  EXPECT_LE(tangency_residual(g, inner), 1e-5);

  // The radius-2 circle has speed 1/2 and period 8 pi.
  ShootConfig cfg;
  cfg.max_time = 30.0;
  Vec large = Vec::Zero(4);
  large(1) = 2.0;
  const Orbit outer = shoot_characteristic(k, large, cfg);
  EXPECT_NEAR(outer.action, 4.0 * kPi, 1e-4);
  EXPECT_NEAR(outer.period, 8.0 * kPi, 1e-4);
  EXPECT_LE(verify_action_period(outer), 1e-4);
  EXPECT_LE(boundary_residual(g, outer), 1e-6);
}

TEST(Shoot, SmoothedCubeOrbitPassesSelfChecks) {
  const Body k = Body::cube(4);
  const SmoothGauge g = SmoothGauge::from_body(k);
  const auto starts = boundary_starts(g, 4, 3);
  int closed = 0;
  for (const Vec& x0 : starts) {
    try {
      const Orbit orbit = shoot_characteristic(g, x0);
      ++closed;
      EXPECT_LE(boundary_residual(g, orbit), 1e-6);
      EXPECT_LE(tangency_residual(g, orbit), 1e-5);
      EXPECT_LE(verify_action_period(orbit), 1e-5 * orbit.period);
      EXPECT_LE(orbit.closure_residual, 1e-6);
    } catch (const Error& err) {
      EXPECT_TRUE(err.code() == ErrorCode::kNonClosure || err.code() == ErrorCode::kRefinement);
    }
  }
  EXPECT_GT(closed, 0);
}

TEST(Shoot, StartOffBoundaryIsRejected) {
  Vec x0 = Vec::Zero(4);
  x0(0) = 0.5;
  EXPECT_THROW(shoot_characteristic(Body::ball(4), x0), Error);
}

TEST(ReturnLemma, UnitBallChord) {
  const Orbit orbit = make_orbit(ball_orbit_samples(2000), 2.0 * kPi);
  const ReturnLemma r = verify_return_lemma(Body::ball(4), orbit);
  // 2 sin(t/2) = 1.
  EXPECT_NEAR(r.t0, kPi / 3.0, 1e-4);
  EXPECT_GE(r.chord_gauge, 1.0 - 1e-6);
  EXPECT_TRUE(r.bound_holds);
}

TEST(ReturnLemma, EllipsoidShotOrbit) {
  const double radii[] = {1.0, 2.0};
  const Body k = Body::ellipsoid_radii(radii);
  Vec x0 = Vec::Zero(4);
  x0(0) = 1.0;
  const Orbit orbit = shoot_characteristic(k, x0);
  const ReturnLemma r = verify_return_lemma(k, orbit);
  EXPECT_GE(std::min(r.t0, orbit.period - r.t0), 1.0 - 1e-6);
  EXPECT_TRUE(r.bound_holds);
}

TEST(ReturnLemma, TruncatedLoopViolates) {
  // Out along the great circle to angle pi/4 and straight back: closed, on the
  // sphere, but never a chord of length 1.
  const int m = 400;
  Mat s = Mat::Zero(m + 1, 4);
  for (int i = 0; i <= m; ++i) {
    const double t = kPi / 4.0 * (1.0 - std::abs(2.0 * i / m - 1.0));
    s(i, 0) = std::cos(t);
    s(i, 2) = std::sin(t);
  }
  const Orbit orbit = make_orbit(s, 2.0 * kPi);
  try {
    verify_return_lemma(Body::ball(4), orbit);
    FAIL() << "expected a lemma violation";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kLemmaViolation);
  }
}

TEST(ActionPeriod, ReparametrizedLoopIsFlagged) {
  const Orbit slow = make_orbit(ball_orbit_samples(1000), 4.0 * kPi);
  EXPECT_NEAR(slow.action, kPi, 1e-6);
  EXPECT_GT(verify_action_period(slow), 1.0);
  const Orbit right = make_orbit(ball_orbit_samples(1000), 2.0 * kPi);
  EXPECT_LT(verify_action_period(right), 1e-8);
}

TEST(EhzEstimate, PlanarBodies) {
  const Body disc = Body::ball(2, 1.5);
  const auto d = ehz_estimate(disc);
  EXPECT_EQ(d.method, EhzMethod::kPlanarArea);
  EXPECT_NEAR(d.value, kPi * 2.25, 1e-9);

  const auto square = ehz_estimate(Body::cube(2));
  EXPECT_NEAR(square.value, 4.0, 1e-9);
  EXPECT_NEAR(square.lower_certificate, 1.0, 1e-12);

  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    const Body p = testing::random_symmetric_vpolytope(rng, 2, 5);
    const Mat verts = *polytope_vertices(p);
    EXPECT_NEAR(ehz_estimate(p).value, oracle::hull_area(verts), 1e-9);
  }
}

TEST(EhzEstimate, EllipsoidClosedFormAgreesWithShooting) {
  const double radii[] = {1.0, 2.0};
  EhzConfig cfg;
  cfg.n_starts = 16;
  const auto est = ehz_estimate(Body::ellipsoid_radii(radii), cfg);
  EXPECT_EQ(est.method, EhzMethod::kClosedForm);
  EXPECT_NEAR(est.value, kPi, 1e-12);
  ASSERT_TRUE(est.shooting_value.has_value());
  EXPECT_NEAR(*est.shooting_value, kPi, 1e-4);
  EXPECT_NEAR(est.lower_certificate, 1.0, 1e-12);
  for (const Orbit& o : est.orbits) {
    EXPECT_LE(verify_action_period(o), 1e-5 * o.period);
    EXPECT_TRUE(verify_return_lemma(*est.gauge, o, est.gauge_normj).bound_holds);
  }
}

TEST(EhzEstimate, SmoothedCubeIsTaggedAndBracketed) {
  EhzConfig cfg;
  cfg.n_starts = 8;
  const auto est = ehz_estimate(Body::cube(4), cfg);
  EXPECT_EQ(est.method, EhzMethod::kShooting);
  EXPECT_EQ(est.smoothing, "power-sum m=8");
  EXPECT_GE(est.value, est.lower_certificate - 1e-6);
  EXPECT_LE(est.value, 4.0 + 1e-6);
  EXPECT_GT(est.inflation, 1.0);
}

TEST(EhzEstimate, DilationScalesQuadratically) {
  EhzConfig cfg;
  cfg.n_starts = 8;
  const double radii[] = {1.0, 3.0};
  const Body ell = Body::ellipsoid_radii(radii);
  std::mt19937_64 rng(9);
  const Body poly = testing::random_symmetric_vpolytope(rng, 2, 4);
  for (const Body& k : {ell, poly}) {
    const double base = ehz_estimate(k, cfg).value;
    for (double lambda : {0.5, 2.0}) {
      const double scaled_value = ehz_estimate(scaled(k, lambda), cfg).value;
      EXPECT_NEAR(scaled_value / (lambda * lambda * base), 1.0, 1e-4);
    }
  }
}

TEST(EhzEstimate, ProductBodyRespectsLowerCertificate) {
  EhzConfig cfg;
  cfg.n_starts = 4;
  const Body k = Body::lagrangian_product(Body::cube(2), Body::cross_polytope(2));
  const auto est = ehz_estimate(k, cfg);
  EXPECT_GE(est.value, est.lower_certificate - 1e-6);
  for (const Orbit& o : est.orbits) {
    EXPECT_LE(verify_action_period(o), 1e-5 * o.period);
    const auto r = verify_return_lemma(*est.gauge, o, est.gauge_normj);
    EXPECT_TRUE(r.bound_holds);
  }
}

}  // namespace
}  // namespace sympcap
