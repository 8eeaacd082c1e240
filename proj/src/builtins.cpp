#include "billiards/builtins.hpp"

#include <cmath>
#include <numbers>

namespace billiards {

using P = Vec3<double>;

Polygon unit_square() {
  return Polygon::build(Curvature::flat, {{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}});
}

Polygon regular_polygon(std::size_t n) {
  if (n < 3) throw ValidationError("a polygon needs at least 3 vertices");
  std::vector<P> loop;
  for (std::size_t i = 0; i < n; ++i) {
    double a = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    loop.push_back({std::cos(a), std::sin(a), 1});
  }
  return Polygon::build(Curvature::flat, {loop});
}

Polygon hyperbolic_pentagon() {
  // Right-angled regular pentagon: cosh(R) = cot(pi/5) cot(pi/4).
  const double pi = std::numbers::pi;
  const double R = std::acosh(1.0 / std::tan(pi / 5));
  std::vector<P> loop;
  for (int i = 0; i < 5; ++i) {
    double a = 2 * pi * i / 5;
    loop.push_back({std::sinh(R) * std::cos(a), std::sinh(R) * std::sin(a), std::cosh(R)});
  }
  return Polygon::build(Curvature::hyperbolic, {loop});
}

Polygon sphere_triangle(double theta) {
  if (!(theta > 0) || !(theta < std::numbers::pi))
    throw ValidationError("sphere triangle angle must lie in (0, pi)");
  return Polygon::build(Curvature::spherical,
                        {{{0, 0, 1}, {1, 0, 0}, {std::cos(theta), std::sin(theta), 0}}});
}

Polygon flat_annulus() {
  return Polygon::build(Curvature::flat, {{{-2, -2, 1}, {2, -2, 1}, {2, 2, 1}, {-2, 2, 1}},
                                          {{-1, -1, 1}, {-1, 1, 1}, {1, 1, 1}, {1, -1, 1}}});
}

}  // namespace billiards
