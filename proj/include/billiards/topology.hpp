#pragma once
// Topology of the doubled surface S and of the compactified phase space M.
//
// Tables are planar domains with b boundary loops, so S is a closed
// orientable surface of genus b - 1. With N vertices, pi_1(M) has generators
// a_1, b_1, ..., a_g, b_g, g_q subject to
//   [a_1,b_1] ... [a_g,b_g] = g_q^(X(S) - N),  g_q central.

#include <string>
#include <vector>

#include "billiards/polygon.hpp"

namespace billiards {

struct SurfaceInvariants {
  int genus{0};
  int euler_characteristic{2};
};

SurfaceInvariants double_surface_invariants(const Polygon& poly);

enum class GroupClass { trivial, finite_cyclic, other };

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<std::string> relations;
  int genus{0};
  int euler_characteristic{2};
  int vertices{0};
  int exponent{0};  ///< X(S) - N
  GroupClass classification{GroupClass::other};
  int order{0};  ///< for finite_cyclic (1 for trivial)
};

GroupPresentation pi1_presentation(const Polygon& poly);
/// Same, from the counts alone (b boundary loops, n vertices).
GroupPresentation pi1_presentation(int boundary_components, int n);

enum class Growth { not_exponential, unknown };

std::string to_string(GroupClass c);
std::string to_string(Growth g);

Growth growth_class(const GroupPresentation& p);

/// "<a1, b1, g_q | [a1,b1] = g_q^-4, g_q central>" style text.
std::string presentation_text(const GroupPresentation& p);

/// One-line summary, e.g. "trivial; phase space: S³" or "cyclic of order 3".
std::string summary(const GroupPresentation& p);

}  // namespace billiards
