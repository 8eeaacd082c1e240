#pragma once
/**
 * Collision map on the boundary, itinerary coding, generalized diagonals and
 * conjugated-vertex search.
 *
 * A boundary state (side, s, psi) sits on side `side` (1-based label) at arc
 * length s from its start vertex, with outgoing direction at angle psi in
 * (0, pi) counterclockwise from the side's forward direction; the table is on
 * the left, so every such direction points into it.
 *
 * Templates are instantiated in double for general use and in quad precision
 * where long orbits on negatively curved tables need the extra digits.
 */

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "billiards/polygon.hpp"

namespace billiards {

/// Hits within this distance of a vertex terminate the orbit.
inline constexpr double kVertexTolerance = 1e-9;
/// Outgoing angles closer than this to 0 or pi are rejected as grazing.
inline constexpr double kGrazingTolerance = 1e-9;
/// Diagonal lengths within this of m*pi count as conjugacies.
inline constexpr double kConjugacyTolerance = 1e-8;

template <class Real>
struct BasicBoundaryState {
  int side{1};
  Real s{0};
  Real psi{0};

  template <class Other>
  BasicBoundaryState<Other> cast() const {
    return {side, static_cast<Other>(s), static_cast<Other>(psi)};
  }
};
using BoundaryState = BasicBoundaryState<double>;

/// Outcome of one flight of the collision map.
template <class Real>
struct Flight {
  BasicBoundaryState<Real> next;  ///< valid unless vertex != 0
  int vertex{0};                  ///< label of the vertex hit, 0 when none
  Real length{0};
  Vec3<Real> point;

  bool hit_vertex() const { return vertex != 0; }
};

enum class Termination { vertex_hit, horizon, periodic };
enum class Direction { forward, backward, bidirectional };

/**
 * Side labels I(n) for n in [first_index, first_index + labels.size()).
 * Index 0 is the side carrying the initial state.
 */
struct Itinerary {
  long first_index{0};
  std::vector<int> labels;
  std::optional<Termination> forward;
  std::optional<Termination> backward;
  int forward_vertex{0};
  int backward_vertex{0};

  int at(long n) const { return labels.at(static_cast<std::size_t>(n - first_index)); }
  long last_index() const { return first_index + static_cast<long>(labels.size()) - 1; }
};

std::string to_string(Termination t);
/// Comma-separated labels followed by termination tag(s), e.g. "1,3,1,3;horizon".
std::string format_itinerary(const Itinerary& it);

/// Time-reversal involution: same point, reversed incoming velocity.
template <class Real>
BasicBoundaryState<Real> reverse(const BasicBoundaryState<Real>& b) {
  return {b.side, b.s, num::pi<Real>() - b.psi};
}

/// Position and outgoing unit direction of a boundary state.
template <class Real>
BasicTangent<Real> boundary_tangent(const BasicPolygon<Real>& poly, const BasicBoundaryState<Real>& b) {
  const auto& sp = poly.space();
  const auto& side = poly.side(static_cast<std::size_t>(b.side - 1));
  BasicTangent<Real> at = sp.geodesic_at(side.geodesic, b.s);
  return {at.base, sp.rotate(at.base, at.dir, b.psi)};
}

template <class Real>
void check_state(const BasicPolygon<Real>& poly, const BasicBoundaryState<Real>& b, long index = 0) {
  if (b.side < 1 || static_cast<std::size_t>(b.side) > poly.size())
    throw DegenerateStateError("side label " + std::to_string(b.side) + " out of range", index);
  const Real len = poly.side(static_cast<std::size_t>(b.side - 1)).length;
  if (!(b.s >= 0) || !(b.s <= len))
    throw DegenerateStateError("arc-length parameter outside the side", index);
  const Real g = Real(kGrazingTolerance);
  if (!(b.psi > g) || !(b.psi < num::pi<Real>() - g))
    throw DegenerateStateError("grazing boundary state (psi within 1e-9 of 0 or pi)", index);
}

/// First boundary side met by the geodesic `g` (sides in `skip` ignored).
template <class Real>
std::optional<std::pair<std::size_t, SideHit<Real>>> first_hit(const BasicPolygon<Real>& poly,
                                                               const BasicGeodesic<Real>& g,
                                                               std::size_t skip_a,
                                                               std::size_t skip_b = static_cast<std::size_t>(-1)) {
  const auto& sp = poly.space();
  std::optional<std::pair<std::size_t, SideHit<Real>>> best;
  for (std::size_t j = 0; j < poly.size(); ++j) {
    if (j == skip_a || j == skip_b) continue;
    const auto& side = poly.side(j);
    if (auto h = sp.intersect(g, side.geodesic, side.length)) {
      if (!best || h->t < best->second.t) best = std::make_pair(j, *h);
    }
  }
  return best;
}

/// Resolves a hit on side j at parameter s into a vertex label (or 0).
template <class Real>
int vertex_at(const BasicPolygon<Real>& poly, std::size_t j, Real s) {
  const auto& side = poly.side(j);
  const Real tol = Real(kVertexTolerance);
  if (s < tol) return static_cast<int>(side.from) + 1;
  if (side.length - s < tol) return static_cast<int>(side.to) + 1;
  return 0;
}

/**
 * Outgoing state after the next bounce, or the vertex the orbit runs into.
 * Throws DegenerateStateError for grazing input.
 */
template <class Real>
Flight<Real> collision_step(const BasicBoundaryState<Real>& b, const BasicPolygon<Real>& poly) {
  check_state(poly, b);
  const auto& sp = poly.space();
  BasicGeodesic<Real> g{boundary_tangent(poly, b)};
  auto hit = first_hit(poly, g, static_cast<std::size_t>(b.side - 1));
  if (!hit) throw DegenerateStateError("shot leaves the table without meeting the boundary");
  const auto [j, h] = *hit;
  Flight<Real> out;
  out.length = h.t;
  BasicTangent<Real> arrive = sp.geodesic_at(g, h.t);
  out.point = arrive.base;
  if (int v = vertex_at(poly, j, h.s)) {
    out.vertex = v;
    return out;
  }
  // Mirror law: the reversed incoming direction makes angle psi_in with the
  // side; the outgoing one makes pi - psi_in.
  const auto& side = poly.side(j);
  Vec3<Real> e = sp.geodesic_at(side.geodesic, h.s).dir;
  Real psi_in = sp.oriented_angle(arrive.base, e, -arrive.dir);
  out.next = {static_cast<int>(j) + 1, h.s, num::pi<Real>() - psi_in};
  return out;
}

template <class Real>
std::vector<int> forward_labels(const BasicBoundaryState<Real>& b, const BasicPolygon<Real>& poly,
                                std::size_t count, Termination& end, int& vertex, long sign) {
  std::vector<int> labels{b.side};
  BasicBoundaryState<Real> cur = b;
  end = Termination::horizon;
  vertex = 0;
  while (labels.size() < count) {
    Flight<Real> f;
    try {
      f = collision_step(cur, poly);
    } catch (const DegenerateStateError& e) {
      throw DegenerateStateError(e.what(), sign * static_cast<long>(labels.size() - 1));
    }
    if (f.hit_vertex()) {
      end = Termination::vertex_hit;
      vertex = f.vertex;
      break;
    }
    cur = f.next;
    labels.push_back(cur.side);
  }
  return labels;
}

/**
 * Itinerary of b up to `horizon` labels in each requested direction. Backward
 * labels come from the forward itinerary of the reversed state.
 */
template <class Real>
Itinerary itinerary(const BasicBoundaryState<Real>& b, const BasicPolygon<Real>& poly, std::size_t horizon,
                    Direction dir = Direction::forward) {
  if (horizon == 0) throw Error("itinerary: horizon must be at least 1");
  Itinerary it;
  std::vector<int> fwd, bwd;
  if (dir != Direction::backward) {
    Termination end;
    fwd = forward_labels(b, poly, horizon, end, it.forward_vertex, 1);
    it.forward = end;
  }
  if (dir != Direction::forward) {
    Termination end;
    bwd = forward_labels(reverse(b), poly, horizon, end, it.backward_vertex, -1);
    it.backward = end;
  }
  if (dir == Direction::forward) {
    it.labels = std::move(fwd);
    return it;
  }
  it.first_index = -static_cast<long>(bwd.size()) + 1;
  it.labels.assign(bwd.rbegin(), bwd.rend());
  if (dir == Direction::bidirectional) it.labels.insert(it.labels.end(), fwd.begin() + 1, fwd.end());
  return it;
}

// ---- generalized diagonals -------------------------------------------------

struct Diagonal {
  int start_vertex{0};
  int end_vertex{0};
  std::vector<int> bounces;  ///< side labels hit strictly between the vertices
  double length{0};
  double angle{0};     ///< launch angle from the start vertex's outgoing side
  double residual{0};  ///< distance of the final hit to the end vertex
};

struct ConjugatePair {
  int first_vertex{0};
  int second_vertex{0};
  Diagonal diagonal;
  int multiple{0};  ///< m with length = m * pi
};

struct DiagonalSearch {
  std::size_t angles_per_vertex{10000};
  int bisection_steps{200};
};

/// Trajectory from a vertex, recorded as a list of symbols: side label for
/// a bounce, -vertex for a vertex hit, 0 once a budget is exhausted.
template <class Real>
struct VertexShot {
  std::vector<int> symbols;
  std::vector<Real> lengths;  ///< cumulative length at each symbol
  Vec3<Real> last_point;
};

template <class Real>
VertexShot<Real> shoot_from_vertex(const BasicPolygon<Real>& poly, std::size_t v, Real phi,
                                   std::size_t max_bounces, Real max_length) {
  const auto& sp = poly.space();
  VertexShot<Real> out;
  const Vec3<Real>& p = poly.vertex(v);
  BasicGeodesic<Real> g{{p, sp.rotate(p, poly.side(v).geodesic.start.dir, phi)}};
  auto hit = first_hit(poly, g, v, poly.prev(v));
  Real total = 0;
  for (std::size_t n = 0; n <= max_bounces; ++n) {
    if (!hit) {
      out.symbols.push_back(0);
      out.lengths.push_back(total);
      return out;
    }
    auto [j, h] = *hit;
    total += h.t;
    if (total > max_length) {
      out.symbols.push_back(0);
      out.lengths.push_back(total);
      return out;
    }
    BasicTangent<Real> arrive = sp.geodesic_at(g, h.t);
    out.last_point = arrive.base;
    out.lengths.push_back(total);
    if (int vx = vertex_at(poly, j, h.s)) {
      out.symbols.push_back(-vx);
      return out;
    }
    out.symbols.push_back(static_cast<int>(j) + 1);
    if (n == max_bounces) break;
    g = {sp.reflect(arrive, poly.side(j).geodesic)};
    hit = first_hit(poly, g, j);
  }
  out.symbols.push_back(0);
  out.lengths.push_back(total);
  return out;
}

namespace detail {

inline std::optional<std::size_t> first_difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == b[i]) {
      if (a[i] <= 0) return std::nullopt;
      continue;
    }
    if (a[i] == 0 || b[i] == 0) return std::nullopt;
    return i;
  }
  return std::nullopt;
}

template <class Real>
Diagonal make_diagonal(const BasicPolygon<Real>& poly, std::size_t v, Real phi, const VertexShot<Real>& shot) {
  Diagonal d;
  d.start_vertex = static_cast<int>(v) + 1;
  d.end_vertex = -shot.symbols.back();
  d.bounces.assign(shot.symbols.begin(), shot.symbols.end() - 1);
  d.length = static_cast<double>(shot.lengths.back());
  d.angle = static_cast<double>(phi);
  d.residual = static_cast<double>(
      poly.space().distance(shot.last_point, poly.vertex(static_cast<std::size_t>(d.end_vertex - 1))));
  return d;
}

void canonicalize(std::vector<Diagonal>& found);

}  // namespace detail

/**
 * Vertex-to-vertex billiard trajectories with at most `max_bounces` bounces
 * and length at most `max_length`. Launch angles from each vertex are
 * scanned on a grid; a change of symbol sequence between neighbouring angles
 * brackets a vertex hit, which is then refined by bisection. Reverse
 * duplicates are merged. A search, not a decision procedure: diagonals
 * narrower than the grid can be missed.
 */
template <class Real>
std::vector<Diagonal> generalized_diagonals(const BasicPolygon<Real>& poly, std::size_t max_bounces,
                                            Real max_length, const DiagonalSearch& opts = {}) {
  std::vector<Diagonal> found;
  const std::size_t n = std::max<std::size_t>(opts.angles_per_vertex, 2);
  for (std::size_t v = 0; v < poly.size(); ++v) {
    const Real theta = poly.angle(v);
    auto angle_of = [&](std::size_t i) { return theta * (Real(i) + Real(0.5)) / Real(n); };
    auto shoot = [&](Real phi) { return shoot_from_vertex(poly, v, phi, max_bounces, max_length); };
    VertexShot<Real> prev = shoot(angle_of(0));
    Real prev_phi = angle_of(0);
    if (prev.symbols.back() < 0) found.push_back(detail::make_diagonal(poly, v, prev_phi, prev));
    for (std::size_t i = 1; i < n; ++i) {
      Real phi = angle_of(i);
      VertexShot<Real> cur = shoot(phi);
      if (cur.symbols.back() < 0) found.push_back(detail::make_diagonal(poly, v, phi, cur));
      if (auto m = detail::first_difference(prev.symbols, cur.symbols)) {
        Real lo = prev_phi, hi = phi;
        VertexShot<Real> lo_shot = prev;
        std::size_t idx = *m;
        for (int it = 0; it < opts.bisection_steps && hi - lo > Real(0); ++it) {
          Real mid = (lo + hi) / Real(2);
          if (!(mid > lo && mid < hi)) break;
          VertexShot<Real> ms = shoot(mid);
          if (ms.symbols.size() <= idx + 1 && ms.symbols.back() < 0) {
            found.push_back(detail::make_diagonal(poly, v, mid, ms));
            break;
          }
          auto d = detail::first_difference(lo_shot.symbols, ms.symbols);
          if (d && *d <= idx) {
            hi = mid;
            idx = *d;
          } else {
            lo = mid;
            lo_shot = std::move(ms);
          }
        }
      }
      prev = std::move(cur);
      prev_phi = phi;
    }
  }
  detail::canonicalize(found);
  return found;
}

/// Diagonals whose length is a positive multiple of pi (spherical tables only).
template <class Real>
std::vector<ConjugatePair> conjugated_vertices(const BasicPolygon<Real>& poly, std::size_t max_bounces,
                                               Real max_length, const DiagonalSearch& opts = {}) {
  if (poly.curvature() != Curvature::spherical)
    throw Error("conjugated vertices are only defined on the sphere");
  std::vector<ConjugatePair> out;
  const double pi = num::pi<double>();
  for (const Diagonal& d : generalized_diagonals(poly, max_bounces, max_length, opts)) {
    double m = std::round(d.length / pi);
    if (m >= 1 && std::abs(d.length - m * pi) < kConjugacyTolerance)
      out.push_back({d.start_vertex, d.end_vertex, d, static_cast<int>(m)});
  }
  return out;
}

}  // namespace billiards
