#pragma once
// Reference tables used by tests, the acceptance suite and the CLI.

#include <cstddef>

#include "billiards/polygon.hpp"

namespace billiards {

/// Unit square [0,1]^2 in the plane model.
Polygon unit_square();

/// Regular flat N-gon inscribed in the unit circle.
Polygon regular_polygon(std::size_t n);

/// Regular right-angled pentagon on the hyperboloid, centred at the origin.
Polygon hyperbolic_pentagon();

/// Spherical triangle V1 = north pole, V2 = (1,0,0), V3 = (cos t, sin t, 0):
/// angles (t, pi/2, pi/2), area t.
Polygon sphere_triangle(double theta);

/// Flat square [-2,2]^2 with the square hole [-1,1]^2.
Polygon flat_annulus();

}  // namespace billiards
