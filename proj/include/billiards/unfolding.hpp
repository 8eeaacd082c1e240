#pragma once
/**
 * Unfolding: instead of reflecting the trajectory at a side, reflect the
 * table across it and let the geodesic run straight on. The chain of table
 * copies is kept as a list of model isometries (copy 0 is the table itself).
 *
 * The unfolded orbit is traced in the frame of the current copy: the
 * arriving tangent is pushed through the mirror matrix of the crossed side
 * and the copy's isometry is multiplied by the same matrix. Global points
 * are the images of the local crossing points under the copy isometries.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "billiards/collision.hpp"

namespace billiards {

template <class Real>
struct UnfoldCopy {
  Mat3<Real> isometry;  ///< maps this copy's coordinates to the base table's
  int crossed{0};       ///< side label crossed to enter this copy (0 for the base)
};

template <class Real>
struct BasicUnfoldingChain {
  std::vector<UnfoldCopy<Real>> copies;
  /// labels[0] is the starting side, labels[i] the side crossed i-th.
  std::vector<int> labels;
  /// Starting point, then one point per crossing (or the final vertex hit).
  std::vector<Vec3<Real>> points;
  bool truncated{false};
  int vertex{0};  ///< vertex label hit when truncated
};
using UnfoldingChain = BasicUnfoldingChain<double>;

/// Unfolds the orbit of b through `bounces` side crossings.
template <class Real>
BasicUnfoldingChain<Real> unfold(const BasicBoundaryState<Real>& b, const BasicPolygon<Real>& poly,
                                 std::size_t bounces) {
  check_state(poly, b);
  const auto& sp = poly.space();
  BasicUnfoldingChain<Real> chain;
  Mat3<Real> M = Mat3<Real>::identity();
  BasicTangent<Real> start = boundary_tangent(poly, b);
  chain.copies.push_back({M, 0});
  chain.labels.push_back(b.side);
  chain.points.push_back(start.base);
  BasicGeodesic<Real> g{start};
  std::size_t skip = static_cast<std::size_t>(b.side - 1);
  for (std::size_t i = 0; i < bounces; ++i) {
    auto hit = first_hit(poly, g, skip);
    if (!hit) throw DegenerateStateError("unfolded geodesic leaves the table copy", static_cast<long>(i));
    const auto [j, h] = *hit;
    BasicTangent<Real> arrive = sp.geodesic_at(g, h.t);
    chain.points.push_back(M * arrive.base);
    if (int v = vertex_at(poly, j, h.s)) {
      chain.truncated = true;
      chain.vertex = v;
      break;
    }
    const auto& side = poly.side(j);
    Mat3<Real> R = sp.reflection_matrix(side.geodesic);
    M = M * R;
    chain.copies.push_back({M, static_cast<int>(j) + 1});
    chain.labels.push_back(static_cast<int>(j) + 1);
    // In the new copy's frame the straight continuation is the mirror image.
    Vec3<Real> base = sp.geodesic_at(side.geodesic, h.s).base;
    g = {{base, sp.normalize_tangent(base, R * arrive.dir)}};
    skip = j;
  }
  return chain;
}

enum class IsometryKind { identity, translation, rotation, parabolic, reflection };

std::string to_string(IsometryKind k);

struct Holonomy {
  IsometryKind kind{IsometryKind::identity};
  bool orientation_preserving{true};
  /// Rotation angle in [0, pi] (rotations, or the rotary part of a spherical
  /// rotoreflection); 0 otherwise.
  double angle{0};
  /// Translation length (flat translations and glides, hyperbolic translations).
  double translation{0};
  Mat3<double> matrix;
};

/// Classifies an isometry of the model of curvature k.
Holonomy classify_isometry(const Mat3<double>& m, Curvature k, double tol = 1e-9);

/// Composed isometry of the whole chain.
template <class Real>
Holonomy holonomy(const BasicUnfoldingChain<Real>& chain, Curvature k) {
  if (chain.copies.empty()) throw Error("holonomy of an empty chain");
  return classify_isometry(chain.copies.back().isometry.template cast<double>(), k);
}

/**
 * Largest distance of the points from the best-fitting geodesic: a
 * least-squares line for k = 0, a least-squares plane through the origin
 * (great circle / hyperbolic geodesic) otherwise, measured as the Euclidean
 * residual relative to each point's norm.
 */
double unfolded_geodesic_residual(Curvature k, const std::vector<Vec3<double>>& points);

struct PeriodicOrbitReport {
  BoundaryState start;
  std::vector<int> bounces;  ///< sides hit during one period, ending on start.side
  std::size_t period{0};
  double length{0};
  Holonomy holonomy;
  double residual{0};  ///< return error after re-simulation
};

struct PeriodicSearch {
  std::size_t max_bounces{50};
  std::size_t samples{10000};
  std::uint64_t seed{1};
  double candidate_tol{1e-4};
  double verify_tol{1e-8};
  /// Orbits with a bounce closer than this to a vertex (as a fraction of the
  /// side length) or to grazing are rejected: there the absolute return
  /// error no longer measures closure.
  double min_clearance{1e-4};
};

/**
 * Seeded search for periodic orbits. Samples lie on a per-side grid, jittered
 * in s, with psi at cell centres (an odd number of cells so that psi = pi/2
 * is sampled). A sample whose return map comes within candidate_tol of it is
 * polished by Levenberg-Marquardt on the return displacement and kept if it
 * re-simulates within verify_tol with every bounce at least min_clearance
 * away from vertices and grazing. Orbits are reported once per cyclic (and
 * time-reversed) bounce sequence, sorted by that sequence.
 */
std::vector<PeriodicOrbitReport> find_periodic(const Polygon& poly, const PeriodicSearch& opts = {});

/// True iff 2 n theta = k pi up to rounding (relative 1e-13). Requires n >= 1.
bool spherical_periodicity_condition(double theta, long n, long k);

// ---- SVG ------------------------------------------------------------------

struct SvgOptions {
  int size_px{600};
  bool draw_copies{true};
};

/// Unfolded copies and trajectory: plane coordinates (k = 0), Poincare disc
/// (k = -1), orthographic view from +z with the back hemisphere clipped (k = +1).
std::string unfolding_svg(const Polygon& poly, const UnfoldingChain& chain, const SvgOptions& opts = {});

}  // namespace billiards
