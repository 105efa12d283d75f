#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sympcap/bodies.hpp"
#include "sympcap/error.hpp"

namespace sympcap {
namespace {

constexpr double kPi = std::numbers::pi;

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

std::vector<Body> representative_bodies(std::mt19937_64& rng) {
  const double radii[] = {1.0, 2.0};
  Mat a(4, 4);
  a << 1, 0.3, 0, 0, 0, 1, 0.2, 0, 0, 0, 1, -0.4, 0.1, 0, 0, 1;
  return {
      Body::cube(4),
      Body::cross_polytope(4),
      Body::ellipsoid_radii(radii),
      testing::random_symmetric_vpolytope(rng, 4, 6),
      testing::random_symmetric_hpolytope(rng, 4, 3),
      Body::linear_image(Body::cube(4), a),
      Body::lagrangian_product(Body::cube(2), Body::cross_polytope(2)),
  };
}

TEST(Gauge, Examples) {
  EXPECT_DOUBLE_EQ(gauge(Body::cube(4), Vec::Ones(4)), 1.0);
  EXPECT_DOUBLE_EQ(gauge(Body::ball(4), 2.0 * Vec::Unit(4, 0)), 2.0);
  EXPECT_NEAR(gauge(Body::cross_polytope(4), vec({0.5, 0.5, 0, 0})), 1.0, 1e-12);
}

TEST(Gauge, CrossPolytopeIsL1) {
  std::mt19937_64 rng(2);
  const Body k = Body::cross_polytope(4);
  for (int i = 0; i < 50; ++i) {
    const Vec x = testing::random_vec(rng, 4);
    EXPECT_NEAR(gauge(k, x), x.lpNorm<1>(), 1e-10);
  }
}

TEST(Support, Examples) {
  EXPECT_NEAR(support(Body::cube(4), e_q1(2)), 1.0, 1e-12);
  EXPECT_NEAR(support(Body::cross_polytope(4), Vec::Ones(4)), 1.0, 1e-12);
  EXPECT_NEAR(support(Body::ball(4), vec({3, 4, 0, 0})), 5.0, 1e-12);
}

TEST(Support, PointAttainsValue) {
  std::mt19937_64 rng(4);
  for (const auto& k : representative_bodies(rng)) {
    for (int i = 0; i < 10; ++i) {
      const Vec u = testing::random_vec(rng, k.dim());
      const Vec x = support_point(k, u);
      EXPECT_NEAR(x.dot(u), support(k, u), 1e-9);
      EXPECT_LE(gauge(k, x), 1.0 + 1e-9);
    }
  }
}

TEST(Polar, Examples) {
  const Body c = polar(Body::cube(4));
  ASSERT_TRUE(std::holds_alternative<VPolytope>(c.rep()));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Vec x = testing::random_vec(rng, 4);
    EXPECT_NEAR(gauge(c, x), x.lpNorm<1>(), 1e-9);
  }
  Vec d(4);
  d << 0.25, 0.25, 1, 1;
  const Body e = polar(Body::ellipsoid(d.asDiagonal()));
  Vec inv(4);
  inv << 4, 4, 1, 1;
  EXPECT_TRUE(std::get<Ellipsoid>(e.rep()).shape.isApprox(Mat(inv.asDiagonal())));
}

TEST(Polar, GaugeSupportDuality) {
  std::mt19937_64 rng(6);
  for (const auto& k : representative_bodies(rng)) {
    const Body kp = polar(k);
    for (int i = 0; i < 100; ++i) {
      const Vec x = testing::random_vec(rng, k.dim());
      const double g = gauge(k, x);
      EXPECT_NEAR(g, support(kp, x), 1e-9 * std::max(1.0, g));
    }
  }
}

TEST(Polar, BipolarRandomVPolytope) {
  std::mt19937_64 rng(8);
  const Body k = testing::random_symmetric_vpolytope(rng, 2, 5);
  const Body kpp = polar(polar(k));
  for (int i = 0; i < 100; ++i) {
    const Vec x = testing::random_vec(rng, 2);
    EXPECT_NEAR(gauge(k, x), gauge(kpp, x), 1e-9);
  }
}

TEST(Polar, VertexEnumerationRoundTrip) {
  std::mt19937_64 rng(10);
  const Body k = testing::random_symmetric_vpolytope(rng, 4, 5);
  const auto facets = polytope_facets(k);
  ASSERT_TRUE(facets.has_value());
  const Body h = Body::hpolytope(*facets);
  for (int i = 0; i < 100; ++i) {
    const Vec x = testing::random_vec(rng, 4);
    EXPECT_NEAR(gauge(k, x), gauge(h, x), 1e-9 * std::max(1.0, gauge(k, x)));
  }
}

TEST(Gauge, HomogeneityAndSymmetry) {
  std::mt19937_64 rng(12);
  for (const auto& k : representative_bodies(rng)) {
    ASSERT_TRUE(is_symmetric(k));
    for (int i = 0; i < 20; ++i) {
      const Vec x = testing::random_vec(rng, k.dim());
      const double g = gauge(k, x);
      for (double lambda : {0.5, 2.0, 10.0}) {
        EXPECT_NEAR(gauge(k, lambda * x), lambda * g, 1e-12 * lambda * std::max(1.0, g) * 10);
      }
      EXPECT_NEAR(gauge(k, -x), g, 1e-12 * std::max(1.0, g) * 10);
    }
  }
}

TEST(Body, OriginExteriorVPolytope) {
  Mat v(2, 2);
  v << 1, 0, 0, 1;
  const Body k = Body::vpolytope(v);
  EXPECT_FALSE(k.origin_interior());
  EXPECT_THROW(gauge(k, Vec::Ones(2)), Error);
  EXPECT_THROW(polar(k), Error);
}

TEST(Body, UnboundedHPolytopeRejected) {
  Mat rows(2, 2);
  rows << 1, 0, -1, 0;
  EXPECT_THROW(Body::hpolytope(rows), Error);
}

TEST(Body, AsymmetryDetected) {
  Mat v(3, 2);
  v << -1, -1, 2, -1, -1, 2;
  EXPECT_FALSE(is_symmetric(Body::vpolytope(v)));
  EXPECT_FALSE(is_symmetric(polar(Body::vpolytope(v))));
}

TEST(SectionSupport, Examples) {
  EXPECT_NEAR(section_support(Body::ball(4), e_q1(2), e_p1(2)), 1.0, 1e-12);
  EXPECT_NEAR(section_support(Body::cube(4), e_q1(2), e_p1(2)), 1.0, 1e-12);
  const Vec v = vec({1, 1, 0, 0}) / std::sqrt(2.0);
  const Vec w = vec({1, -1, 0, 0}) / std::sqrt(2.0);
  EXPECT_NEAR(section_support(Body::cube(4), v, w), std::sqrt(2.0), 1e-12);
  EXPECT_THROW(section_support(Body::cube(4), Vec::Zero(4), w), Error);
}

TEST(SectionSupport, AgreesAcrossRepresentations) {
  // Same body as H-, V- and linear-image representations; ellipsoid against sampling.
  std::mt19937_64 rng(14);
  const Body h = testing::random_symmetric_hpolytope(rng, 4, 2);
  const Body v = Body::vpolytope(*polytope_vertices(h));
  Mat a = Mat::Identity(4, 4) + 0.2 * Mat::Random(4, 4);
  const Body img = Body::linear_image(h, a);
  const Body img_flat = flatten(img);
  for (int i = 0; i < 20; ++i) {
    const Vec nv = testing::random_vec(rng, 4);
    const Vec w = testing::random_vec(rng, 4);
    EXPECT_NEAR(section_support(h, nv, w), section_support(v, nv, w), 1e-8);
    EXPECT_NEAR(section_support(img, nv, w), section_support(img_flat, nv, w), 1e-8);
  }
}

TEST(SectionSupport, EllipsoidClosedFormMatchesSampling) {
  Vec d(4);
  d << 1, 0.5, 2, 0.25;
  const Body e = Body::ellipsoid(d.asDiagonal());
  std::mt19937_64 rng(15);
  const Vec nv = testing::random_vec(rng, 4);
  const Vec w = testing::random_vec(rng, 4);
  // Maximize <w, x> over x on the section boundary by dense sampling of the
  // 3-sphere of {nv}^perp.
  Eigen::FullPivLU<Mat> lu(nv.transpose());
  const Mat basis = lu.kernel();
  double best = 0.0;
  for (int i = 0; i < 200000; ++i) {
    Vec c = testing::random_vec(rng, 3);
    Vec x = basis * c;
    x /= gauge(e, x);
    best = std::max(best, w.dot(x));
  }
  const double exact = section_support(e, nv, w);
  EXPECT_GE(exact, best - 1e-12);
  EXPECT_NEAR(exact, best, 1e-2 * exact);
}

TEST(VertexEnumerate, Square) {
  EXPECT_EQ(vertex_enumerate(std::get<HPolytope>(Body::cube(2).rep())).vertices.rows(), 4);
}

TEST(VertexEnumerate, CrossPolytopeFacets) {
  Mat rows(16, 4);
  for (int s = 0; s < 16; ++s) {
    for (int i = 0; i < 4; ++i) rows(s, i) = (s >> i) & 1 ? -1.0 : 1.0;
  }
  const auto v = vertex_enumerate(HPolytope{rows});
  std::vector<Vec> expected;
  for (int i = 0; i < 4; ++i) {
    expected.push_back(Vec::Unit(4, i));
    expected.push_back(-Vec::Unit(4, i));
  }
  EXPECT_TRUE(oracle::same_point_sets(expected, v.vertices, 1e-9));
}

TEST(VertexEnumerate, DuplicateRows) {
  Mat rows(6, 2);
  rows << 1, 0, -1, 0, 0, 1, 0, -1, 1, 0, 0, 1;
  EXPECT_EQ(vertex_enumerate(HPolytope{rows}).vertices.rows(), 4);
}

TEST(VertexEnumerate, MatchesBruteForce) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 3;
    const Body k = testing::random_symmetric_hpolytope(rng, dim, 2 + trial % 4);
    const Mat& rows = std::get<HPolytope>(k.rep()).rows;
    const auto v = vertex_enumerate(HPolytope{rows});
    EXPECT_TRUE(oracle::same_point_sets(oracle::brute_force_vertices(rows), v.vertices, 1e-7)) << "trial " << trial;
  }
}

TEST(VertexEnumerate, SizeLimits) {
  const auto& rows = std::get<HPolytope>(Body::cube(3).rep()).rows;
  EnumerationLimits tight{.max_dim = 2, .max_rows = 64};
  try {
    vertex_enumerate(HPolytope{rows}, tight);
    FAIL() << "expected a size error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSize);
  }
}

TEST(Shadow, Examples) {
  const auto id = SymplecticMap::identity(2);
  EXPECT_NEAR(shadow_area(Body::cube(4), id), 4.0, 1e-12);
  EXPECT_NEAR(shadow_area(Body::ball(4), id), kPi, 1e-12);
  const double radii[] = {1.0, 3.0};
  EXPECT_NEAR(shadow_area(Body::ellipsoid_radii(radii), id), kPi, 1e-12);
}

TEST(Shadow, EllipsoidMatchesPointCloud) {
  std::mt19937_64 rng(18);
  const double radii[] = {1.0, 3.0};
  const Body e = Body::ellipsoid_radii(radii);
  const Mat q_inv = std::get<Ellipsoid>(e.rep()).shape.inverse();
  const Eigen::LLT<Mat> llt(q_inv);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = testing::random_symplectic(rng, 2);
    Mat cloud(20000, 2);
    for (int i = 0; i < cloud.rows(); ++i) {
      const Vec y = llt.matrixL() * testing::random_vec(rng, 4).normalized();
      const Vec sy = s.linear() * y;
      cloud(i, 0) = sy(0);
      cloud(i, 1) = sy(2);
    }
    const double exact = shadow_area(e, s);
    const double sampled = oracle::hull_area(cloud);
    EXPECT_LE(sampled, exact + 1e-9);
    EXPECT_NEAR(sampled, exact, 2e-2 * exact);
  }
}

TEST(Shadow, PolytopeMatchesBoostHull) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const Body k = testing::random_symmetric_vpolytope(rng, 4, 6);
    const auto s = testing::random_symplectic(rng, 2);
    const Mat& v = std::get<VPolytope>(k.rep()).vertices;
    Mat projected(v.rows(), 2);
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const Vec y = s.linear() * v.row(i).transpose();
      projected(i, 0) = y(0);
      projected(i, 1) = y(2);
    }
    EXPECT_NEAR(shadow_area(k, s), oracle::hull_area(projected), 1e-10);
  }
}

TEST(Shadow, TranslationInvariant) {
  std::mt19937_64 rng(20);
  const Body k = testing::random_symmetric_hpolytope(rng, 4, 2);
  const auto s = testing::random_symplectic(rng, 2);
  const SymplecticMap st(s.linear(), testing::random_vec(rng, 4));
  EXPECT_NEAR(shadow_area(k, st), shadow_area(k, s), 1e-9);
}

TEST(Shadow, SmoothProductUsesSamples) {
  // Disc x disc: shadow onto (q1, p1) under identity is the square of side
  // given by the factors; the sampled hull approaches 4 from below.
  const Body k = Body::lagrangian_product(Body::ball(2), Body::ball(2));
  const double area = shadow_area(k, SymplecticMap::identity(2));
  EXPECT_LE(area, 4.0 + 1e-12);
  EXPECT_GT(area, 3.5);
}

TEST(DifferenceBody, SymmetricCubeDoubles) {
  const Body d = difference_body(Body::cube(2));
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const Vec x = testing::random_vec(rng, 2);
    EXPECT_NEAR(gauge(d, x), 0.5 * x.lpNorm<Eigen::Infinity>(), 1e-9);
  }
}

TEST(DifferenceBody, TriangleGivesHexagon) {
  Mat t(3, 2);
  t << 0, 0, 1, 0, 0, 1;
  const Body d = difference_body(Body::vpolytope(t));
  const Mat& v = std::get<VPolytope>(d.rep()).vertices;
  EXPECT_EQ(v.rows(), 6);
  Mat diffs(9, 2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) diffs.row(3 * i + j) = t.row(i) - t.row(j);
  }
  EXPECT_NEAR(oracle::hull_area(v), oracle::hull_area(diffs), 1e-12);
  EXPECT_NEAR(oracle::hull_area(v), 3.0, 1e-12);
}

TEST(DifferenceBody, Ellipsoid) {
  const Body e = difference_body(Body::ellipsoid(Mat::Identity(2, 2)));
  EXPECT_TRUE(std::get<Ellipsoid>(e.rep()).shape.isApprox(Mat::Identity(2, 2) / 4.0));
}

TEST(Translated, HPolytopeShift) {
  const Body k = translated(Body::cube(2), vec({0.5, 0.0}));
  EXPECT_NEAR(gauge(k, vec({0.5, 0.0})), 1.0, 1e-12);
  EXPECT_NEAR(gauge(k, vec({-1.5, 0.0})), 1.0, 1e-12);
  EXPECT_THROW(translated(Body::cube(2), vec({2.0, 0.0})), Error);
}

TEST(Flatten, LinearImageOfEllipsoid) {
  Mat a(2, 2);
  a << 2, 1, 0, 1;
  const Body img = Body::linear_image(Body::ball(2), a);
  const Body flat = flatten(img);
  ASSERT_TRUE(std::holds_alternative<Ellipsoid>(flat.rep()));
  std::mt19937_64 rng(22);
  for (int i = 0; i < 20; ++i) {
    const Vec x = testing::random_vec(rng, 2);
    EXPECT_NEAR(gauge(img, x), gauge(flat, x), 1e-12);
  }
}

TEST(ConvexHull, CollinearAndDuplicates) {
  Mat p(7, 2);
  p << 0, 0, 1, 0, 2, 0, 2, 2, 0, 2, 1, 1, 2, 2;
  const Mat h = convex_hull_2d(p);
  EXPECT_EQ(h.rows(), 4);
  EXPECT_NEAR(polygon_area(h), 4.0, 1e-15);
}

TEST(RogersShephard, SquareExamples) {
  Mat square(4, 2);
  square << 1, 1, -1, 1, -1, -1, 1, -1;
  const auto axis = rs_planar_check(square, Eigen::Vector2d(1, 0));
  EXPECT_NEAR(axis.area, 4.0, 1e-12);
  EXPECT_NEAR(axis.projection_length, 2.0, 1e-12);
  EXPECT_NEAR(axis.section_length, 2.0, 1e-12);
  const auto diag = rs_planar_check(square, Eigen::Vector2d(1, 1).normalized());
  EXPECT_NEAR(diag.projection_length, 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(diag.section_length, 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_LE(diag.area, diag.projection_length * diag.section_length);
  EXPECT_LE(diag.projection_length * diag.section_length, 2.0 * diag.area + 1e-12);
}

TEST(RogersShephard, RandomSymmetricPolygons) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const Body k = testing::random_symmetric_vpolytope(rng, 2, 3 + trial % 6);
    const Mat& v = std::get<VPolytope>(k.rep()).vertices;
    for (int j = 0; j < 8; ++j) {
      const double a = angle(rng);
      const auto r = rs_planar_check(v, Eigen::Vector2d(std::cos(a), std::sin(a)));
      const double prod = r.projection_length * r.section_length;
      EXPECT_NEAR(r.area, oracle::hull_area(v), 1e-12);
      EXPECT_LE(r.area, prod + 1e-9);
      EXPECT_LE(prod, 2.0 * r.area + 1e-9);
    }
  }
}

}  // namespace
}  // namespace sympcap
