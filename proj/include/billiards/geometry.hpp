#pragma once
/**
 * Constant-curvature geometry kernel.
 *
 * All three surfaces live in R^3 as quadrics:
 *   k = +1  unit sphere, Euclidean form;
 *   k = -1  upper sheet of x^2 + y^2 - z^2 = -1, Minkowski form;
 *   k =  0  affine plane z = 1, tangent vectors have z = 0.
 *
 * A geodesic through P with unit direction D is
 *   cs(t) P + sn(t) D,   (cs, sn) = (cos, sin), (cosh, sinh) or (1, t),
 * and in every model it is the intersection of the quadric with the plane
 * through the origin whose Euclidean normal is P x D. Side intersections
 * therefore reduce to the scalar equation a cs(t) + b sn(t) = 0.
 */

#include <array>
#include <optional>
#include <stdexcept>

#include "billiards/error.hpp"
#include "billiards/scalar.hpp"

namespace billiards {

enum class Curvature : int { hyperbolic = -1, flat = 0, spherical = 1 };

inline int sign_of(Curvature k) { return static_cast<int>(k); }

inline Curvature curvature_from_int(int k) {
  switch (k) {
    case -1: return Curvature::hyperbolic;
    case 0: return Curvature::flat;
    case 1: return Curvature::spherical;
    default: throw GeometryError("curvature must be -1, 0 or 1");
  }
}

template <class Real>
struct Vec3 {
  Real x{0}, y{0}, z{0};

  Vec3() = default;
  Vec3(Real x_, Real y_, Real z_) : x(x_), y(y_), z(z_) {}

  template <class Other>
  Vec3<Other> cast() const {
    return {static_cast<Other>(x), static_cast<Other>(y), static_cast<Other>(z)};
  }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(Real s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(Real s) const { return {x / s, y / s, z / s}; }
  friend Vec3 operator*(Real s, const Vec3& v) { return v * s; }
};

template <class Real>
Real dot(const Vec3<Real>& a, const Vec3<Real>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class Real>
Vec3<Real> cross(const Vec3<Real>& a, const Vec3<Real>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class Real>
Real max_abs_diff(const Vec3<Real>& a, const Vec3<Real>& b) {
  Real m = num::abs(a.x - b.x);
  if (num::abs(a.y - b.y) > m) m = num::abs(a.y - b.y);
  if (num::abs(a.z - b.z) > m) m = num::abs(a.z - b.z);
  return m;
}

/// Row-major 3x3 matrix; used for isometries of the models.
template <class Real>
struct Mat3 {
  std::array<Real, 9> a{};

  static Mat3 identity() {
    Mat3 m;
    m.a = {Real(1), Real(0), Real(0), Real(0), Real(1), Real(0), Real(0), Real(0), Real(1)};
    return m;
  }
  Real& operator()(int r, int c) { return a[3 * r + c]; }
  Real operator()(int r, int c) const { return a[3 * r + c]; }

  Vec3<Real> operator*(const Vec3<Real>& v) const {
    return {a[0] * v.x + a[1] * v.y + a[2] * v.z, a[3] * v.x + a[4] * v.y + a[5] * v.z,
            a[6] * v.x + a[7] * v.y + a[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        Real s = 0;
        for (int k = 0; k < 3; ++k) s += (*this)(r, k) * o(k, c);
        m(r, c) = s;
      }
    return m;
  }
  Real trace() const { return a[0] + a[4] + a[8]; }
  Real det() const {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  }
  template <class Other>
  Mat3<Other> cast() const {
    Mat3<Other> m;
    for (int i = 0; i < 9; ++i) m.a[i] = static_cast<Other>(a[i]);
    return m;
  }
};

template <class Real>
struct BasicTangent {
  Vec3<Real> base;
  Vec3<Real> dir;

  template <class Other>
  BasicTangent<Other> cast() const {
    return {base.template cast<Other>(), dir.template cast<Other>()};
  }
};

/// Arc-length parameterised geodesic starting at `start`.
template <class Real>
struct BasicGeodesic {
  BasicTangent<Real> start;
};

template <class Real>
struct SideHit {
  Real t;  ///< arc length along the shot geodesic
  Real s;  ///< arc length along the side, clamped to [0, L]
};

/**
 * Value type bundling the curvature with every closed-form operation of the
 * corresponding model. Cheap to copy; carries no other state.
 */
template <class Real>
class Space {
 public:
  explicit Space(Curvature k) : k_(k) {}

  Curvature curvature() const { return k_; }
  int k() const { return sign_of(k_); }

  // ---- model forms ---------------------------------------------------------

  /// Model inner product. For k = 0 it only sees the (x, y) part, which is
  /// the metric on tangent vectors.
  Real form(const Vec3<Real>& u, const Vec3<Real>& v) const {
    switch (k_) {
      case Curvature::spherical: return u.x * v.x + u.y * v.y + u.z * v.z;
      case Curvature::hyperbolic: return u.x * v.x + u.y * v.y - u.z * v.z;
      case Curvature::flat: break;
    }
    return u.x * v.x + u.y * v.y;
  }

  /// Metric dual of a Euclidean covector: maps plane normals to tangent normals.
  Vec3<Real> dual(const Vec3<Real>& n) const {
    switch (k_) {
      case Curvature::spherical: return n;
      case Curvature::hyperbolic: return {n.x, n.y, -n.z};
      case Curvature::flat: break;
    }
    return {n.x, n.y, Real(0)};
  }

  Real sn(Real t) const {
    switch (k_) {
      case Curvature::spherical: return num::sin(t);
      case Curvature::hyperbolic: return num::sinh(t);
      case Curvature::flat: break;
    }
    return t;
  }

  Real cs(Real t) const {
    switch (k_) {
      case Curvature::spherical: return num::cos(t);
      case Curvature::hyperbolic: return num::cosh(t);
      case Curvature::flat: break;
    }
    return Real(1);
  }

  // ---- points and vectors --------------------------------------------------

  /// Canonical origin (north pole, hyperboloid apex, plane origin).
  Vec3<Real> origin() const { return {Real(0), Real(0), Real(1)}; }

  Vec3<Real> normalize_point(const Vec3<Real>& p) const {
    switch (k_) {
      case Curvature::spherical: return p / num::sqrt(dot(p, p));
      case Curvature::hyperbolic: {
        Real q = -(p.x * p.x + p.y * p.y - p.z * p.z);
        if (!(q > 0)) throw GeometryError("vector is not timelike");
        Vec3<Real> r = p / num::sqrt(q);
        return r.z < 0 ? -r : r;
      }
      case Curvature::flat: break;
    }
    return {p.x / p.z, p.y / p.z, Real(1)};
  }

  /// Projects `v` onto the tangent plane at `p` and rescales to unit length.
  Vec3<Real> normalize_tangent(const Vec3<Real>& p, const Vec3<Real>& v) const {
    Vec3<Real> w = project_tangent(p, v);
    Real n2 = form(w, w);
    if (!(n2 > 0)) throw GeometryError("zero tangent vector");
    return w / num::sqrt(n2);
  }

  Vec3<Real> project_tangent(const Vec3<Real>& p, const Vec3<Real>& v) const {
    if (k_ == Curvature::flat) return {v.x, v.y, Real(0)};
    return v - p * (form(v, p) / form(p, p));
  }

  BasicTangent<Real> normalize(const BasicTangent<Real>& t) const {
    Vec3<Real> p = normalize_point(t.base);
    return {p, normalize_tangent(p, t.dir)};
  }

  /// Tangent at `p` rotated by +90 degrees (counterclockwise seen from outside).
  Vec3<Real> rot90(const Vec3<Real>& p, const Vec3<Real>& v) const {
    return dual(cross(p, v));
  }

  /// Unit tangent at `base` making angle `phi` counterclockwise from `ref`.
  Vec3<Real> rotate(const Vec3<Real>& base, const Vec3<Real>& ref, Real phi) const {
    return ref * num::cos(phi) + rot90(base, ref) * num::sin(phi);
  }

  // ---- metric --------------------------------------------------------------

  Real distance(const Vec3<Real>& a, const Vec3<Real>& b) const {
    switch (k_) {
      case Curvature::spherical: {
        Vec3<Real> c = cross(a, b);
        return num::atan2(num::sqrt(dot(c, c)), dot(a, b));
      }
      case Curvature::hyperbolic: {
        Vec3<Real> d = a - b;
        Real q = form(d, d);
        return Real(2) * num::asinh(num::sqrt(q > 0 ? q : Real(0)) / Real(2));
      }
      case Curvature::flat: break;
    }
    return num::hypot(a.x - b.x, a.y - b.y);
  }

  /// Tangent at `p` pointing towards `q`, not normalised. Zero when q is p or
  /// (on the sphere) antipodal to p.
  Vec3<Real> log_direction(const Vec3<Real>& p, const Vec3<Real>& q) const {
    if (k_ == Curvature::flat) return {q.x - p.x, q.y - p.y, Real(0)};
    return q - p * (form(q, p) / form(p, p));
  }

  /// Unit tangent at `p` pointing towards `q`.
  Vec3<Real> direction(const Vec3<Real>& p, const Vec3<Real>& q) const {
    return normalize_tangent(p, log_direction(p, q));
  }

  BasicGeodesic<Real> geodesic_through(const Vec3<Real>& p, const Vec3<Real>& q) const {
    return {{p, direction(p, q)}};
  }

  // ---- geodesics -----------------------------------------------------------

  Vec3<Real> point_at(const BasicGeodesic<Real>& g, Real t) const {
    return g.start.base * cs(t) + g.start.dir * sn(t);
  }

  BasicTangent<Real> geodesic_at(const BasicGeodesic<Real>& g, Real t) const {
    const Real c = cs(t), s = sn(t);
    Vec3<Real> p = g.start.base * c + g.start.dir * s;
    Vec3<Real> d = g.start.dir * c - g.start.base * (Real(k()) * s);
    if (k_ == Curvature::flat) p.z = Real(1);
    return {p, d};
  }

  /// Euclidean normal of the plane through the origin carrying the geodesic.
  Vec3<Real> plane_normal(const BasicGeodesic<Real>& g) const {
    return cross(g.start.base, g.start.dir);
  }

  /// Signed "height" of x over the geodesic: sin / sinh / identity of the
  /// signed distance, positive on the left.
  Real side_height(const BasicGeodesic<Real>& g, const Vec3<Real>& x) const {
    Vec3<Real> n = plane_normal(g);
    Vec3<Real> m = dual(n);
    return dot(n, x) / num::sqrt(form(m, m));
  }

  Real distance_to_line(const BasicGeodesic<Real>& g, const Vec3<Real>& x) const {
    Real h = num::abs(side_height(g, x));
    switch (k_) {
      case Curvature::spherical: return num::asin(h > 1 ? Real(1) : h);
      case Curvature::hyperbolic: return num::asinh(h);
      case Curvature::flat: break;
    }
    return h;
  }

  /// Arc-length coordinate along g of a point x lying on g.
  Real param_on(const BasicGeodesic<Real>& g, const Vec3<Real>& x) const {
    const auto& q = g.start.base;
    const auto& e = g.start.dir;
    switch (k_) {
      case Curvature::spherical: return num::atan2(form(x, e), form(x, q));
      case Curvature::hyperbolic: return num::asinh(form(x, e));
      case Curvature::flat: break;
    }
    return form(x - q, e);
  }

  /// Nearest point of the full geodesic line to x.
  Vec3<Real> foot_on_line(const BasicGeodesic<Real>& g, const Vec3<Real>& x) const {
    Vec3<Real> n = plane_normal(g);
    Vec3<Real> m = dual(n);
    Vec3<Real> f = x - m * (dot(n, x) / form(m, m));
    return normalize_point(f);
  }

  Real distance_to_segment(const BasicGeodesic<Real>& g, Real length, const Vec3<Real>& x) const {
    Real best = distance(x, g.start.base);
    Real end = distance(x, point_at(g, length));
    if (end < best) best = end;
    Vec3<Real> f = foot_on_line(g, x);
    Real s = param_on(g, f);
    if (s > 0 && s < length) {
      Real d = distance(x, f);
      if (d < best) best = d;
    }
    return best;
  }

  // ---- angles --------------------------------------------------------------

  /// Oriented angle from u to v at p, in (-pi, pi].
  Real oriented_angle(const Vec3<Real>& p, const Vec3<Real>& u, const Vec3<Real>& v) const {
    return num::atan2(form(rot90(p, u), v), form(u, v));
  }

  Real angle_between(const BasicTangent<Real>& u, const BasicTangent<Real>& v) const {
    if (!(form(u.dir, u.dir) > 0) || !(form(v.dir, v.dir) > 0))
      throw GeometryError("angle_between: zero vector");
    if (max_abs_diff(u.base, v.base) > Real(1e-9))
      throw GeometryError("angle_between: tangents at different points");
    return num::abs(oriented_angle(u.base, u.dir, v.dir));
  }

  // ---- reflections ---------------------------------------------------------

  /// Mirror `t` in the geodesic `side`; t.base must lie on it.
  BasicTangent<Real> reflect(const BasicTangent<Real>& t, const BasicGeodesic<Real>& side) const {
    if (num::abs(side_height(side, t.base)) > Real(1e-10))
      throw GeometryError("reflect: base point is not on the side");
    Vec3<Real> n = plane_normal(side);
    Vec3<Real> m = dual(n);
    m = m / num::sqrt(form(m, m));
    return {t.base, t.dir - m * (Real(2) * form(t.dir, m))};
  }

  /// Isometry of the whole model fixing `side` pointwise.
  Mat3<Real> reflection_matrix(const BasicGeodesic<Real>& side) const {
    Vec3<Real> n = plane_normal(side);
    Vec3<Real> m = dual(n);
    Real w = Real(2) / form(m, m);
    const Real mv[3] = {m.x, m.y, m.z};
    const Real nv[3] = {n.x, n.y, n.z};
    Mat3<Real> r = Mat3<Real>::identity();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) -= w * mv[i] * nv[j];
    return r;
  }

  // ---- intersections -------------------------------------------------------

  /**
   * First t > t_min at which g meets the side segment [0, side_len]. Hits up
   * to `slack` beyond an endpoint are accepted and clamped.
   */
  std::optional<SideHit<Real>> intersect(const BasicGeodesic<Real>& g,
                                         const BasicGeodesic<Real>& side, Real side_len,
                                         Real t_min = Real(0), Real slack = Real(1e-11)) const {
    Vec3<Real> n = plane_normal(side);
    const Real a = dot(n, g.start.base);
    const Real b = dot(n, g.start.dir);
    auto accept = [&](Real t) -> std::optional<SideHit<Real>> {
      if (!(t > t_min)) return std::nullopt;
      Real s = param_on(side, point_at(g, t));
      if (s < -slack || s > side_len + slack) return std::nullopt;
      return SideHit<Real>{t, num::clamp(s, Real(0), side_len)};
    };
    switch (k_) {
      case Curvature::flat: {
        if (b == 0) return std::nullopt;
        return accept(-a / b);
      }
      case Curvature::hyperbolic: {
        if (!(num::abs(a) < num::abs(b))) return std::nullopt;
        return accept(num::atanh(-a / b));
      }
      case Curvature::spherical: {
        if (a == 0 && b == 0) return std::nullopt;
        const Real p = num::pi<Real>();
        Real t0 = num::atan2(-a, b);
        Real shift = num::floor((t_min - t0) / p) + Real(1);
        Real t = t0 + shift * p;
        if (!(t > t_min)) t += p;
        for (int i = 0; i < 2; ++i, t += p)
          if (auto h = accept(t)) return h;
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  /// Intersection point of two geodesic segments, if any.
  std::optional<Vec3<Real>> segment_intersection(const BasicGeodesic<Real>& g1, Real l1,
                                                 const BasicGeodesic<Real>& g2, Real l2,
                                                 Real slack = Real(1e-12)) const {
    Vec3<Real> u = cross(plane_normal(g1), plane_normal(g2));
    auto on_both = [&](const Vec3<Real>& x) {
      Real s1 = param_on(g1, x), s2 = param_on(g2, x);
      return s1 >= -slack && s1 <= l1 + slack && s2 >= -slack && s2 <= l2 + slack;
    };
    switch (k_) {
      case Curvature::spherical: {
        Real nu = num::sqrt(dot(u, u));
        if (nu < Real(1e-14)) break;  // same great circle
        for (Real sgn : {Real(1), Real(-1)}) {
          Vec3<Real> x = u * (sgn / nu);
          if (on_both(x)) return x;
        }
        return std::nullopt;
      }
      case Curvature::hyperbolic: {
        Real q = form(u, u);
        if (q >= 0) {
          if (dot(u, u) < Real(1e-28)) break;
          return std::nullopt;
        }
        Vec3<Real> x = normalize_point(u);
        if (on_both(x)) return x;
        return std::nullopt;
      }
      case Curvature::flat: {
        if (num::abs(u.z) > Real(1e-14)) {
          Vec3<Real> x{u.x / u.z, u.y / u.z, Real(1)};
          if (on_both(x)) return x;
          return std::nullopt;
        }
        if (distance_to_line(g1, g2.start.base) > Real(1e-12)) return std::nullopt;
        break;
      }
    }
    // Coincident carrier geodesics: overlap test on g1's parameter.
    for (const Vec3<Real>& x : {g2.start.base, point_at(g2, l2)}) {
      Real s = param_on(g1, x);
      if (s >= -slack && s <= l1 + slack) return x;
    }
    Real s0 = param_on(g2, g1.start.base);
    if (s0 >= -slack && s0 <= l2 + slack) return g1.start.base;
    return std::nullopt;
  }

  // ---- coordinate conventions ----------------------------------------------

  Vec3<Real> from_plane(Real x, Real y) const { return {x, y, Real(1)}; }

  /// Poincare-disc coordinates (|w| < 1) to the hyperboloid.
  Vec3<Real> from_disc(Real u, Real v) const {
    Real w2 = u * u + v * v;
    if (!(w2 < 1)) throw GeometryError("Poincare-disc point outside the unit disc");
    Real d = Real(1) - w2;
    return {Real(2) * u / d, Real(2) * v / d, (Real(1) + w2) / d};
  }

  std::array<Real, 2> to_disc(const Vec3<Real>& p) const {
    return {p.x / (Real(1) + p.z), p.y / (Real(1) + p.z)};
  }

 private:
  Curvature k_;
};

}  // namespace billiards
