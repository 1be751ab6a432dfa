#include <doctest.h>

#include <cmath>
#include <random>

#include "vsm/errors.hpp"
#include "vsm/geometry.hpp"
#include "vsm/reference.hpp"

using vsm::Hull;
using vsm::Point2;
using vsm::Segment2D;
using vsm::UnitDir2D;

namespace {

std::vector<Point2> random_points(std::mt19937& rng, int n, double lo = 0.0, double hi = 100.0) {
  std::uniform_real_distribution<double> coord(lo, hi);
  std::vector<Point2> pts(static_cast<size_t>(n));
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  return pts;
}

} // namespace

TEST_CASE("convex_hull removes interior and collinear points") {
  std::vector<Point2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  Hull h = vsm::convex_hull(pts);
  REQUIRE(h.vertices.size() == 4);
  CHECK(h.vertices[0] == Point2{0, 0}); // lexicographically smallest first
  for (const auto& v : h.vertices) CHECK(v != Point2{0.5, 0.5});

  Hull collinear = vsm::convex_hull(std::vector<Point2>{{0, 0}, {1, 0}, {2, 0}});
  REQUIRE(collinear.vertices.size() == 2);
  CHECK(collinear.vertices[0] == Point2{0, 0});
  CHECK(collinear.vertices[1] == Point2{2, 0});
}

TEST_CASE("convex_hull degenerate inputs") {
  CHECK_THROWS_AS(vsm::convex_hull(std::vector<Point2>{}), vsm::EmptyInputError);
  Hull point = vsm::convex_hull(std::vector<Point2>{{3, 4}, {3, 4}});
  CHECK(point.vertices.size() == 1);
}

TEST_CASE("convex_hull is counter-clockwise with positive area") {
  std::mt19937 rng(7);
  auto pts = random_points(rng, 40);
  Hull h = vsm::convex_hull(pts);
  REQUIRE(h.vertices.size() >= 3);
  double area2 = 0.0;
  for (size_t i = 0; i < h.vertices.size(); ++i) {
    const auto& a = h.vertices[i];
    const auto& b = h.vertices[(i + 1) % h.vertices.size()];
    area2 += a.x * b.y - b.x * a.y;
  }
  CHECK(area2 > 0.0);
  // no three consecutive vertices collinear
  for (size_t i = 0; i < h.vertices.size(); ++i) {
    CHECK(vsm::orient2d(h.vertices[i], h.vertices[(i + 1) % h.vertices.size()],
                        h.vertices[(i + 2) % h.vertices.size()]) > 0);
  }
}

TEST_CASE("convex_hull containment oracle and idempotence") {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    auto pts = random_points(rng, 3 + static_cast<int>(rng() % 62));
    Hull h = vsm::convex_hull(pts);
    for (const auto& p : pts) CHECK(vsm::ref::hull_contains(h, p));
    Hull h2 = vsm::convex_hull(h.vertices);
    CHECK(h2.vertices == h.vertices);
  }
}

TEST_CASE("max_diameter on simple shapes") {
  Hull square = vsm::convex_hull(std::vector<Point2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  Segment2D d = vsm::max_diameter(square);
  CHECK(d.length_mm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // tie-break picks the lexicographically smallest pair
  CHECK(d.p == Point2{0, 0});
  CHECK(d.q == Point2{1, 1});

  Segment2D two = vsm::max_diameter(vsm::convex_hull(std::vector<Point2>{{0, 0}, {3, 4}}));
  CHECK(two.length_mm == doctest::Approx(5.0).epsilon(1e-12));

  Segment2D one = vsm::max_diameter(vsm::convex_hull(std::vector<Point2>{{2, 2}}));
  CHECK(one.length_mm == 0.0);
  CHECK(one.p == one.q);
}

TEST_CASE("max_diameter equals all-pairs oracle on random hulls") {
  std::mt19937 rng(13);
  for (int iter = 0; iter < 400; ++iter) {
    auto pts = random_points(rng, 3 + static_cast<int>(rng() % 62));
    Hull h = vsm::convex_hull(pts);
    Segment2D fast = vsm::max_diameter(h);
    Segment2D brute = vsm::ref::diameter_allpairs(pts);
    CHECK(fast.length_mm == doctest::Approx(brute.length_mm).epsilon(1e-12));
  }
}

TEST_CASE("max_diameter on lattice point sets with near-collinear hull chains") {
  // Boundary extraction feeds the hull points on a half-pixel lattice; such
  // hulls routinely carry vertices a rounding error away from collinear, and
  // the caliper advance must not stall on them.
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> sp(0.05, 3.0);
  std::uniform_int_distribution<int> cell(0, 40);
  std::uniform_int_distribution<int> cnt(1, 30);
  for (int iter = 0; iter < 2000; ++iter) {
    double sx = sp(rng), sy = sp(rng);
    std::vector<Point2> pts;
    int n = cnt(rng);
    for (int i = 0; i < n; ++i) pts.push_back({cell(rng) * 0.5 * sx, cell(rng) * 0.5 * sy});
    Segment2D fast = vsm::max_diameter(vsm::convex_hull(pts));
    Segment2D brute = vsm::ref::diameter_allpairs(pts);
    CHECK(fast.length_mm == brute.length_mm); // same tie-break, exact match
    CHECK(fast.p == brute.p);
    CHECK(fast.q == brute.q);
  }
}

TEST_CASE("directional_extent on the unit square") {
  Hull square = vsm::convex_hull(std::vector<Point2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  auto ex = vsm::directional_extent(square, UnitDir2D::from_vector(1, 0));
  CHECK(ex.extent_mm == doctest::Approx(1.0).epsilon(1e-12));
  auto ed = vsm::directional_extent(square, UnitDir2D::from_vector(1, 1));
  CHECK(ed.extent_mm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("directional_extent matches full point-set projections and negation symmetry") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> angle(0.0, 3.14159);
  for (int iter = 0; iter < 200; ++iter) {
    auto pts = random_points(rng, 3 + static_cast<int>(rng() % 40));
    Hull h = vsm::convex_hull(pts);
    double a = angle(rng);
    UnitDir2D dir = UnitDir2D::from_vector(std::cos(a), std::sin(a));
    auto ex = vsm::directional_extent(h, dir);
    CHECK(ex.extent_mm == doctest::Approx(vsm::ref::projection_extent(pts, dir)).epsilon(1e-12));

    UnitDir2D neg = UnitDir2D::from_vector(-dir.dx, -dir.dy); // canonicalises back
    auto ex2 = vsm::directional_extent(h, neg);
    CHECK(ex.extent_mm == ex2.extent_mm);

    // support-width bound
    CHECK(vsm::max_diameter(h).length_mm >= ex.extent_mm - 1e-12);
  }
}

TEST_CASE("fit_line_direction recovers exact lines") {
  std::vector<Point2> diag = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  UnitDir2D d = vsm::fit_line_direction(diag);
  CHECK(d.dx == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(d.dy == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  UnitDir2D h = vsm::fit_line_direction(std::vector<Point2>{{0, 0}, {5, 0}, {2, 0}});
  CHECK(h.dx == 1.0);
  CHECK(h.dy == 0.0);
}

TEST_CASE("fit_line_direction error cases") {
  CHECK_THROWS_AS(vsm::fit_line_direction(std::vector<Point2>{{1, 1}, {1, 1}}),
                  vsm::DegenerateInterfaceError);
  // four corners of a square have an isotropic covariance
  CHECK_THROWS_AS(vsm::fit_line_direction(std::vector<Point2>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}),
                  vsm::IsotropicInterfaceError);
}

TEST_CASE("fit_line_direction matches TLS oracle on noisy lines") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  std::uniform_real_distribution<double> slope(-2.0, 2.0);
  for (int iter = 0; iter < 50; ++iter) {
    double m = slope(rng);
    std::vector<Point2> pts;
    for (int i = 0; i < 40; ++i) {
      double x = 0.25 * i;
      pts.push_back({x + noise(rng), m * x + noise(rng)});
    }
    UnitDir2D fitted = vsm::fit_line_direction(pts);
    UnitDir2D oracle = vsm::ref::tls_direction_angle(pts);
    double sin_between = std::fabs(fitted.dx * oracle.dy - fitted.dy * oracle.dx);
    CHECK(sin_between < 1e-6);
  }
}

TEST_CASE("perpendicular") {
  UnitDir2D x = UnitDir2D::from_vector(1, 0);
  UnitDir2D px = vsm::perpendicular(x);
  CHECK(px.dx == 0.0);
  CHECK(px.dy == 1.0);

  UnitDir2D y = UnitDir2D::from_vector(0, 1);
  UnitDir2D py = vsm::perpendicular(y);
  CHECK(py.dx == 1.0);
  CHECK(py.dy == 0.0);

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> angle(0.0, 6.2831);
  for (int i = 0; i < 100; ++i) {
    double a = angle(rng);
    UnitDir2D d = UnitDir2D::from_vector(std::cos(a), std::sin(a));
    UnitDir2D p = vsm::perpendicular(d);
    CHECK(std::fabs(d.dx * p.dx + d.dy * p.dy) < 1e-12);
    UnitDir2D pp = vsm::perpendicular(p);
    CHECK(pp.dx == doctest::Approx(d.dx).epsilon(1e-12));
    CHECK(pp.dy == doctest::Approx(d.dy).epsilon(1e-12));
  }
}

TEST_CASE("geometry is translation and scale invariant") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int iter = 0; iter < 100; ++iter) {
    auto pts = random_points(rng, 3 + static_cast<int>(rng() % 30));
    double tx = shift(rng), ty = shift(rng), s = scale(rng);

    auto translated = pts;
    for (auto& p : translated) p = {p.x + tx, p.y + ty};
    auto scaled = pts;
    for (auto& p : scaled) p = {p.x * s, p.y * s};

    double d0 = vsm::max_diameter(vsm::convex_hull(pts)).length_mm;
    double dt = vsm::max_diameter(vsm::convex_hull(translated)).length_mm;
    double ds = vsm::max_diameter(vsm::convex_hull(scaled)).length_mm;
    CHECK(dt == doctest::Approx(d0).epsilon(1e-9));
    CHECK(ds == doctest::Approx(d0 * s).epsilon(1e-9));

    UnitDir2D dir = UnitDir2D::from_vector(1, 2);
    double e0 = vsm::directional_extent(vsm::convex_hull(pts), dir).extent_mm;
    double et = vsm::directional_extent(vsm::convex_hull(translated), dir).extent_mm;
    double es = vsm::directional_extent(vsm::convex_hull(scaled), dir).extent_mm;
    CHECK(et == doctest::Approx(e0).epsilon(1e-9));
    CHECK(es == doctest::Approx(e0 * s).epsilon(1e-9));
  }
}

TEST_CASE("orient2d exactness near degeneracy") {
  // Points on an exactly representable line must test collinear.
  Point2 a{0.5, 0.5}, b{1.5, 1.5}, c{7.25, 7.25};
  CHECK(vsm::orient2d(a, b, c) == 0);
  // A one-ulp perturbation must be detected.
  Point2 c_up{7.25, std::nextafter(7.25, 8.0)};
  CHECK(vsm::orient2d(a, b, c_up) > 0);
  Point2 c_dn{7.25, std::nextafter(7.25, 0.0)};
  CHECK(vsm::orient2d(a, b, c_dn) < 0);
}
