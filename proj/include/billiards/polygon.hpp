#pragma once
// Polygons bounded by geodesic arcs on the three constant-curvature models,
// plus the two-sheet bookkeeping of the doubled surface.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "billiards/geometry.hpp"

namespace billiards {

/// One side of a polygon: geodesic from vertex `from` to vertex `to`.
template <class Real>
struct Side {
  BasicGeodesic<Real> geodesic;
  Real length{0};
  std::size_t from{0};
  std::size_t to{0};
};

/**
 * Polygon with an outer boundary loop and optional hole loops.
 *
 * Vertices are stored loop after loop; side i joins vertex i to next(i).
 * Every loop is oriented so that the table lies on its left. User-facing
 * labels (sides and vertices) are 1-based: label = index + 1.
 */
template <class Real>
class BasicPolygon {
 public:
  using Point = Vec3<Real>;

  /// Builds and validates; loops[0] is the outer boundary.
  static BasicPolygon build(Curvature k, std::vector<std::vector<Point>> loops);

  Curvature curvature() const { return space_.curvature(); }
  const Space<Real>& space() const { return space_; }

  std::size_t size() const { return vertices_.size(); }
  const Point& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Side<Real>& side(std::size_t i) const { return sides_[i]; }
  const std::vector<Side<Real>>& sides() const { return sides_; }
  /// Interior angle at vertex i, in (0, 2 pi).
  Real angle(std::size_t i) const { return angles_[i]; }
  std::size_t next(std::size_t i) const;
  std::size_t prev(std::size_t i) const;

  /// Number of boundary loops (outer + holes).
  std::size_t boundary_components() const { return loops_.size(); }
  /// [begin, end) vertex index range of loop j.
  std::pair<std::size_t, std::size_t> loop(std::size_t j) const { return loops_[j]; }

  /// True when some input loop had the opposite orientation and was reversed.
  bool reoriented() const { return reoriented_; }

  Real perimeter() const;
  /// Area via the shoelace formula (k = 0) or Gauss-Bonnet (k != 0).
  Real area() const;

  /// Open-interior membership; boundary points are outside.
  bool interior_contains(const Point& p) const;

  /// Radius of the disc-shaped neighbourhood used for the chart at vertex i.
  Real vertex_neighborhood_radius(std::size_t i) const;

  /// Rebuild in another scalar type from the vertex coordinates.
  template <class Other>
  BasicPolygon<Other> cast() const {
    std::vector<std::vector<Vec3<Other>>> loops;
    for (auto [b, e] : loops_) {
      std::vector<Vec3<Other>> l;
      for (std::size_t i = b; i < e; ++i) l.push_back(vertices_[i].template cast<Other>());
      loops.push_back(std::move(l));
    }
    return BasicPolygon<Other>::build(curvature(), std::move(loops));
  }

 private:
  explicit BasicPolygon(Curvature k) : space_(k) {}
  void compute_sides();
  Real loop_turning(std::size_t j) const;
  void validate() const;

  Space<Real> space_;
  std::vector<Point> vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> loops_;
  std::vector<std::size_t> loop_of_;
  std::vector<Side<Real>> sides_;
  std::vector<Real> angles_;
  std::vector<Real> turning_;
  bool reoriented_{false};
};

using Polygon = BasicPolygon<double>;

enum class Sheet { top, bottom };

/// Point of the doubled surface: two copies of the table glued along the boundary.
template <class Real>
struct DoubleSurfacePoint {
  Sheet sheet{Sheet::top};
  Vec3<Real> pos;
};

/// Equality on the doubled surface: sheets are identified on the boundary.
template <class Real>
bool same_point(const BasicPolygon<Real>& poly, const DoubleSurfacePoint<Real>& a,
                const DoubleSurfacePoint<Real>& b, Real tol = Real(1e-10)) {
  if (poly.space().distance(a.pos, b.pos) > tol) return false;
  if (a.sheet == b.sheet) return true;
  for (const auto& s : poly.sides())
    if (poly.space().distance_to_segment(s.geodesic, s.length, a.pos) <= tol) return true;
  return false;
}

// ---------------------------------------------------------------------------

template <class Real>
std::size_t BasicPolygon<Real>::next(std::size_t i) const {
  auto [b, e] = loops_[loop_of_[i]];
  return i + 1 == e ? b : i + 1;
}

template <class Real>
std::size_t BasicPolygon<Real>::prev(std::size_t i) const {
  auto [b, e] = loops_[loop_of_[i]];
  return i == b ? e - 1 : i - 1;
}

template <class Real>
BasicPolygon<Real> BasicPolygon<Real>::build(Curvature k, std::vector<std::vector<Point>> loops) {
  if (loops.empty()) throw ValidationError("polygon has no boundary");
  BasicPolygon poly(k);
  const auto& sp = poly.space_;
  for (std::size_t j = 0; j < loops.size(); ++j) {
    if (loops[j].size() < 3)
      throw ValidationError("boundary loop " + std::to_string(j) + " has fewer than 3 vertices");
    std::size_t b = poly.vertices_.size();
    for (const auto& p : loops[j]) {
      poly.vertices_.push_back(sp.normalize_point(p));
      poly.loop_of_.push_back(j);
    }
    poly.loops_.emplace_back(b, poly.vertices_.size());
  }
  // Coincident vertices first: sides would be undefined otherwise.
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      if (sp.distance(poly.vertices_[i], poly.vertices_[j]) < Real(1e-10))
        throw ValidationError("vertices " + std::to_string(i + 1) + " and " +
                              std::to_string(j + 1) + " coincide");
  poly.compute_sides();

  // Orientation: outer loop counterclockwise, holes clockwise.
  for (std::size_t j = 0; j < poly.loops_.size(); ++j) {
    Real turn = poly.loop_turning(j);
    bool want_positive = (j == 0);
    if ((turn > 0) != want_positive) {
      auto [b, e] = poly.loops_[j];
      std::reverse(poly.vertices_.begin() + b, poly.vertices_.begin() + e);
      poly.reoriented_ = true;
    }
  }
  poly.compute_sides();
  poly.validate();
  return poly;
}

template <class Real>
void BasicPolygon<Real>::compute_sides() {
  const Real pi = num::pi<Real>();
  sides_.clear();
  for (std::size_t i = 0; i < size(); ++i) {
    std::size_t n = next(i);
    Real len = space_.distance(vertices_[i], vertices_[n]);
    if (curvature() == Curvature::spherical && len > pi - Real(1e-9))
      throw ValidationError("side " + std::to_string(i + 1) +
                            " is not shorter than pi; its geodesic is not unique");
    sides_.push_back({space_.geodesic_through(vertices_[i], vertices_[n]), len, i, n});
  }
  turning_.assign(size(), Real(0));
  angles_.assign(size(), Real(0));
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& in = sides_[prev(i)];
    Vec3<Real> d_in = space_.geodesic_at(in.geodesic, in.length).dir;
    Vec3<Real> d_out = sides_[i].geodesic.start.dir;
    turning_[i] = space_.oriented_angle(vertices_[i], d_in, d_out);
    angles_[i] = pi - turning_[i];
  }
}

template <class Real>
Real BasicPolygon<Real>::loop_turning(std::size_t j) const {
  auto [b, e] = loops_[j];
  Real t = 0;
  for (std::size_t i = b; i < e; ++i) t += turning_[i];
  return t;
}

template <class Real>
void BasicPolygon<Real>::validate() const {
  const Real pi = num::pi<Real>();
  for (std::size_t i = 0; i < size(); ++i)
    if (!(angles_[i] > Real(1e-9)) || !(angles_[i] < Real(2) * pi - Real(1e-9)))
      throw ValidationError("degenerate angle at vertex " + std::to_string(i + 1));
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (next(i) == j || next(j) == i) continue;
      const auto& a = sides_[i];
      const auto& b = sides_[j];
      if (space_.segment_intersection(a.geodesic, a.length, b.geodesic, b.length))
        throw ValidationError("sides " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                              " intersect; boundary is not simple");
    }
  if (curvature() == Curvature::spherical) {
    // Gauss-Bonnet area must stay below a hemisphere-complement, else the
    // "interior" picked by orientation is the larger region.
    if (!(area() > 0) || !(area() < Real(4) * pi))
      throw ValidationError("spherical polygon does not bound a proper region");
  }
  for (std::size_t j = 1; j < loops_.size(); ++j) {
    auto [b, e] = loops_[j];
    // A hole vertex must sit inside the outer loop.
    Real w = 0;
    auto [ob, oe] = loops_[0];
    for (std::size_t i = ob; i < oe; ++i) {
      Vec3<Real> u = space_.log_direction(vertices_[b], vertices_[i]);
      Vec3<Real> v = space_.log_direction(vertices_[b], vertices_[next(i)]);
      w += space_.oriented_angle(vertices_[b], u, v);
    }
    if (!(w > pi)) throw ValidationError("hole " + std::to_string(j) + " lies outside the outer boundary");
    (void)e;
  }
}

template <class Real>
Real BasicPolygon<Real>::perimeter() const {
  Real p = 0;
  for (const auto& s : sides_) p += s.length;
  return p;
}

template <class Real>
Real BasicPolygon<Real>::area() const {
  if (curvature() == Curvature::flat) {
    Real a = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      const auto& p = vertices_[i];
      const auto& q = vertices_[next(i)];
      a += p.x * q.y - q.x * p.y;
    }
    return a / Real(2);
  }
  // sum of turning = 2 pi chi - k A, chi = 2 - b for a planar-type domain
  Real turn = 0;
  for (Real t : turning_) turn += t;
  Real chi = Real(2) - Real(static_cast<int>(loops_.size()));
  return (Real(2) * num::pi<Real>() * chi - turn) / Real(space_.k());
}

template <class Real>
bool BasicPolygon<Real>::interior_contains(const Point& p) const {
  for (const auto& s : sides_)
    if (space_.distance_to_segment(s.geodesic, s.length, p) < Real(1e-10)) return false;
  // Winding number of the boundary around p; each loop has the table on its
  // left, so p is inside exactly when the total is +2 pi.
  Real w = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    Vec3<Real> u = space_.log_direction(p, vertices_[i]);
    Vec3<Real> v = space_.log_direction(p, vertices_[next(i)]);
    w += space_.oriented_angle(p, u, v);
  }
  return w > num::pi<Real>();
}

template <class Real>
Real BasicPolygon<Real>::vertex_neighborhood_radius(std::size_t i) const {
  Real m = sides_[i].length;
  if (sides_[prev(i)].length < m) m = sides_[prev(i)].length;
  for (std::size_t j = 0; j < size(); ++j)
    if (j != i) {
      Real d = space_.distance(vertices_[i], vertices_[j]);
      if (d < m) m = d;
    }
  for (std::size_t j = 0; j < size(); ++j) {
    if (j == i || j == prev(i)) continue;
    Real d = space_.distance_to_segment(sides_[j].geodesic, sides_[j].length, vertices_[i]);
    if (d < m) m = d;
  }
  return m / Real(2);
}

}  // namespace billiards
