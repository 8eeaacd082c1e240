#include <cmath>
#include <numbers>

#include "billiards/builtins.hpp"
#include "billiards/polygon.hpp"
#include "doctest.h"

using namespace billiards;
using V = Vec3<double>;
constexpr double pi = std::numbers::pi;

TEST_CASE("unit square") {
  Polygon sq = unit_square();
  CHECK(sq.size() == 4);
  CHECK(sq.area() == doctest::Approx(1));
  CHECK(sq.perimeter() == doctest::Approx(4));
  for (std::size_t i = 0; i < 4; ++i) CHECK(sq.angle(i) == doctest::Approx(pi / 2));
  CHECK_FALSE(sq.reoriented());
  CHECK(sq.interior_contains({0.5, 0.5, 1}));
  CHECK_FALSE(sq.interior_contains({1.5, 0.5, 1}));
  CHECK_FALSE(sq.interior_contains({1.0, 0.5, 1}));
}

TEST_CASE("clockwise input is reoriented") {
  Polygon p = Polygon::build(Curvature::flat, {{{0, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 0, 1}}});
  CHECK(p.reoriented());
  CHECK(p.area() == doctest::Approx(1));
}

TEST_CASE("right-angled hyperbolic pentagon") {
  Polygon p = hyperbolic_pentagon();
  // Regular n-gon with angle a: cosh(s/2) = cos(pi/n) / sin(a/2).
  double side = 2 * std::acosh(std::cos(pi / 5) / std::sin(pi / 4));
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(p.angle(i) == doctest::Approx(pi / 2).epsilon(1e-12));
    CHECK(p.side(i).length == doctest::Approx(side).epsilon(1e-12));
  }
  // Gauss-Bonnet: area = (n - 2) pi - sum of angles.
  CHECK(p.area() == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(p.interior_contains({0, 0, 1}));
}

TEST_CASE("spherical example triangle") {
  for (double theta : {1.0, pi / 6, 2.0}) {
    Polygon t = sphere_triangle(theta);
    CHECK(t.angle(0) == doctest::Approx(theta).epsilon(1e-12));
    CHECK(t.angle(1) == doctest::Approx(pi / 2).epsilon(1e-12));
    CHECK(t.angle(2) == doctest::Approx(pi / 2).epsilon(1e-12));
    CHECK(t.area() == doctest::Approx(theta).epsilon(1e-12));
    CHECK(t.side(0).length == doctest::Approx(pi / 2));
    CHECK(t.side(1).length == doctest::Approx(theta));
    CHECK(t.side(2).length == doctest::Approx(pi / 2));
  }
}

TEST_CASE("validation rejects bad polygons") {
  CHECK_THROWS_AS(Polygon::build(Curvature::flat, {{{0, 0, 1}, {1, 1, 1}, {1, 0, 1}, {0, 1, 1}}}),
                  ValidationError);
  CHECK_THROWS_AS(Polygon::build(Curvature::flat, {{{0, 0, 1}, {0, 0, 1}, {1, 0, 1}}}), ValidationError);
  CHECK_THROWS_AS(Polygon::build(Curvature::flat, {{{0, 0, 1}, {1, 0, 1}}}), ValidationError);
  CHECK_THROWS_AS(Polygon::build(Curvature::flat, {{{0, 0, 1}, {1, 0, 1}, {2, 0, 1}}}), ValidationError);
  CHECK_THROWS_AS(Polygon::build(Curvature::flat, {{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}},
                                                   {{5, 5, 1}, {6, 5, 1}, {6, 6, 1}}}),
                  ValidationError);
  CHECK_THROWS_AS(sphere_triangle(0.0), ValidationError);
}

TEST_CASE("annulus with a hole") {
  Polygon a = flat_annulus();
  CHECK(a.boundary_components() == 2);
  CHECK(a.area() == doctest::Approx(12));
  CHECK_FALSE(a.interior_contains({0, 0, 1}));
  CHECK(a.interior_contains({1.5, 0, 1}));
  // Hole vertices are reflex from the table's point of view.
  CHECK(a.angle(4) == doctest::Approx(3 * pi / 2));
}

TEST_CASE("vertex neighbourhood radius is half the nearest obstruction") {
  Polygon tri = Polygon::build(Curvature::flat, {{{0, 0, 1}, {1, 0, 1}, {0.5, std::sqrt(3.0) / 2, 1}}});
  for (std::size_t i = 0; i < 3; ++i) CHECK(tri.vertex_neighborhood_radius(i) == doctest::Approx(std::sqrt(3.0) / 4));
  CHECK(unit_square().vertex_neighborhood_radius(0) == doctest::Approx(0.5));
}

TEST_CASE("doubled surface identifies the sheets only on the boundary") {
  Polygon sq = unit_square();
  DoubleSurfacePoint<double> a{Sheet::top, {0.5, 0.5, 1}}, b{Sheet::bottom, {0.5, 0.5, 1}};
  DoubleSurfacePoint<double> c{Sheet::top, {0.5, 0.0, 1}}, d{Sheet::bottom, {0.5, 0.0, 1}};
  CHECK_FALSE(same_point(sq, a, b));
  CHECK(same_point(sq, c, d));
  CHECK(same_point(sq, a, a));
}

TEST_CASE("quad cast preserves the shape") {
  Polygon p = hyperbolic_pentagon();
  auto q = p.cast<Quad>();
  CHECK(static_cast<double>(q.area()) == doctest::Approx(p.area()).epsilon(1e-13));
}
