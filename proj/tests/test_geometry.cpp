#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "billiards/geometry.hpp"
#include "doctest.h"

using namespace billiards;
using V = Vec3<double>;
constexpr double pi = std::numbers::pi;

namespace {

V random_point(const Space<double>& sp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  switch (sp.curvature()) {
    case Curvature::spherical: {
      V p{u(rng), u(rng), u(rng)};
      return sp.normalize_point(p);
    }
    case Curvature::hyperbolic: return sp.from_disc(0.6 * u(rng), 0.6 * u(rng));
    case Curvature::flat: break;
  }
  return sp.from_plane(3 * u(rng), 3 * u(rng));
}

// Distances from textbook formulas, independent of the model code.
double oracle_distance(Curvature k, const V& a, const V& b) {
  switch (k) {
    case Curvature::spherical: return std::acos(std::clamp(a.x * b.x + a.y * b.y + a.z * b.z, -1.0, 1.0));
    case Curvature::hyperbolic: {
      // Poincare disc: d = 2 atanh |(z - w) / (1 - conj(w) z)|
      std::complex<double> z(a.x / (1 + a.z), a.y / (1 + a.z));
      std::complex<double> w(b.x / (1 + b.z), b.y / (1 + b.z));
      return 2 * std::atanh(std::abs((z - w) / (1.0 - std::conj(w) * z)));
    }
    case Curvature::flat: break;
  }
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
}

}  // namespace

TEST_CASE("distance agrees with closed-form oracles in all three models") {
  std::mt19937_64 rng(7);
  for (Curvature k : {Curvature::hyperbolic, Curvature::flat, Curvature::spherical}) {
    Space<double> sp(k);
    for (int i = 0; i < 200; ++i) {
      V a = random_point(sp, rng), b = random_point(sp, rng);
      CHECK(sp.distance(a, b) == doctest::Approx(oracle_distance(k, a, b)).epsilon(1e-9));
      CHECK(sp.distance(a, a) == doctest::Approx(0).epsilon(1e-12));
    }
  }
}

TEST_CASE("geodesics have unit speed and reach their endpoint") {
  std::mt19937_64 rng(11);
  for (Curvature k : {Curvature::hyperbolic, Curvature::flat, Curvature::spherical}) {
    Space<double> sp(k);
    for (int i = 0; i < 100; ++i) {
      V a = random_point(sp, rng), b = random_point(sp, rng);
      auto g = sp.geodesic_through(a, b);
      double d = sp.distance(a, b);
      CHECK(sp.distance(sp.point_at(g, d), b) < 1e-9);
      for (double t : {0.1, 0.3, 0.7}) {
        CHECK(sp.distance(a, sp.point_at(g, t * d)) == doctest::Approx(t * d).epsilon(1e-9));
        auto tan = sp.geodesic_at(g, t * d);
        CHECK(sp.form(tan.dir, tan.dir) == doctest::Approx(1).epsilon(1e-10));
        CHECK(std::abs(sp.form(tan.dir, sp.k() == 0 ? V{0, 0, 0} : tan.base)) < 1e-10);
      }
    }
  }
}

TEST_CASE("reflection matrices are involutive isometries fixing their side") {
  std::mt19937_64 rng(3);
  for (Curvature k : {Curvature::hyperbolic, Curvature::flat, Curvature::spherical}) {
    Space<double> sp(k);
    for (int i = 0; i < 50; ++i) {
      V a = random_point(sp, rng), b = random_point(sp, rng), c = random_point(sp, rng),
        d = random_point(sp, rng);
      auto side = sp.geodesic_through(a, b);
      Mat3<double> R = sp.reflection_matrix(side);
      Mat3<double> RR = R * R;
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) CHECK(RR(r, s) == doctest::Approx(r == s ? 1.0 : 0.0).epsilon(1e-9));
      CHECK(sp.distance(R * a, a) < 1e-9);
      CHECK(sp.distance(R * c, R * d) == doctest::Approx(sp.distance(c, d)).epsilon(1e-9));
      CHECK(R.det() == doctest::Approx(-1).epsilon(1e-9));
      // Points swap sides of the mirror.
      CHECK(sp.side_height(side, R * c) == doctest::Approx(-sp.side_height(side, c)).epsilon(1e-9));
    }
  }
}

TEST_CASE("tangent reflection obeys the mirror law") {
  Space<double> sp(Curvature::spherical);
  V a{0, 0, 1}, b{1, 0, 0};
  auto side = sp.geodesic_through(a, b);
  auto at = sp.geodesic_at(side, 0.4);
  for (double psi : {0.2, 1.0, 2.5}) {
    BasicTangent<double> t{at.base, sp.rotate(at.base, at.dir, -psi)};
    auto r = sp.reflect(t, side);
    CHECK(sp.oriented_angle(at.base, at.dir, r.dir) == doctest::Approx(psi).epsilon(1e-12));
    CHECK(sp.angle_between(t, r) == doctest::Approx(2 * std::min(psi, pi - psi)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sp.reflect({V{0, 1, 0}, V{1, 0, 0}}, side), GeometryError);
}

TEST_CASE("angle_between rejects invalid input") {
  Space<double> sp(Curvature::flat);
  CHECK_THROWS_AS(sp.angle_between({V{0, 0, 1}, V{0, 0, 0}}, {V{0, 0, 1}, V{1, 0, 0}}), GeometryError);
  CHECK_THROWS_AS(sp.angle_between({V{0, 0, 1}, V{0, 1, 0}}, {V{1, 0, 1}, V{1, 0, 0}}), GeometryError);
  CHECK(sp.angle_between({V{0, 0, 1}, V{0, 1, 0}}, {V{0, 0, 1}, V{1, 0, 0}}) == doctest::Approx(pi / 2));
}

TEST_CASE("side intersection lands on both geodesics") {
  std::mt19937_64 rng(5);
  for (Curvature k : {Curvature::hyperbolic, Curvature::flat, Curvature::spherical}) {
    Space<double> sp(k);
    int hits = 0;
    for (int i = 0; i < 200; ++i) {
      V a = random_point(sp, rng), b = random_point(sp, rng), c = random_point(sp, rng),
        d = random_point(sp, rng);
      auto g = sp.geodesic_through(a, b);
      auto side = sp.geodesic_through(c, d);
      double len = sp.distance(c, d);
      if (auto h = sp.intersect(g, side, len)) {
        ++hits;
        V x = sp.point_at(g, h->t);
        CHECK(h->t > 0);
        CHECK(sp.distance(x, sp.point_at(side, h->s)) < 1e-9);
        CHECK(std::abs(sp.side_height(side, x)) < 1e-9);
        // Segments are only unique geodesics below length pi on the sphere.
        if (k == Curvature::spherical && h->t > 3.0) continue;
        auto seg = sp.segment_intersection(g, h->t + 1e-6, side, len);
        CHECK(seg.has_value());
      }
    }
    CHECK(hits > 10);
  }
}

TEST_CASE("Poincare disc conversion round trips") {
  Space<double> sp(Curvature::hyperbolic);
  for (double u : {-0.9, -0.3, 0.0, 0.5}) {
    V p = sp.from_disc(u, 0.2);
    CHECK(sp.form(p, p) == doctest::Approx(-1).epsilon(1e-12));
    auto w = sp.to_disc(p);
    CHECK(w[0] == doctest::Approx(u).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(0.2).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sp.from_disc(1.0, 0.0), GeometryError);
}

TEST_CASE("quad precision instantiation matches double") {
  Space<Quad> q(Curvature::hyperbolic);
  Space<double> d(Curvature::hyperbolic);
  V a = d.from_disc(0.3, 0.1), b = d.from_disc(-0.2, 0.4);
  double dq = static_cast<double>(q.distance(a.cast<Quad>(), b.cast<Quad>()));
  CHECK(dq == doctest::Approx(d.distance(a, b)).epsilon(1e-13));
}
