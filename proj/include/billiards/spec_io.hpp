#pragma once
// Plain-text polygon files.
//
//   # comment
//   curvature = -1 | 0 | 1
//   model = plane | poincare-disc | unit-sphere   (optional, must match curvature)
//   outer = x y; x y; x y                          (x y z on the unit sphere)
//   holes = x y; x y; x y | x y; x y; x y          (optional)

#include <string>

#include "billiards/polygon.hpp"

namespace billiards {

/// Input file could not be read.
class FileError : public Error {
 public:
  using Error::Error;
};

/// Parses spec text; `source` names it in error messages.
Polygon parse_polygon(const std::string& text, const std::string& source = "<input>");

/// Reads and parses a spec file. Throws FileError when it cannot be opened.
Polygon load_polygon(const std::string& path);

/// Named reference tables: square, hyperbolic-pentagon, sphere-triangle
/// (uses theta), annulus. Throws Error for unknown names.
Polygon builtin_polygon(const std::string& name, double theta = 1.0);

}  // namespace billiards
