#include "billiards/topology.hpp"

#include <sstream>

namespace billiards {

SurfaceInvariants double_surface_invariants(const Polygon& poly) {
  SurfaceInvariants s;
  s.genus = static_cast<int>(poly.boundary_components()) - 1;
  s.euler_characteristic = 2 - 2 * s.genus;
  return s;
}

GroupPresentation pi1_presentation(int boundary_components, int n) {
  if (n < 3) throw ValidationError("a polygon needs at least 3 vertices");
  if (boundary_components < 1) throw ValidationError("a table needs an outer boundary");
  GroupPresentation p;
  p.genus = boundary_components - 1;
  p.euler_characteristic = 2 - 2 * p.genus;
  p.vertices = n;
  p.exponent = p.euler_characteristic - n;
  std::string lhs;
  for (int i = 1; i <= p.genus; ++i) {
    p.generators.push_back("a" + std::to_string(i));
    p.generators.push_back("b" + std::to_string(i));
    lhs += "[a" + std::to_string(i) + ",b" + std::to_string(i) + "]";
  }
  p.generators.push_back("g_q");
  if (lhs.empty()) lhs = "1";
  p.relations.push_back(lhs + " = g_q^" + std::to_string(p.exponent));
  p.relations.push_back("g_q central");
  if (p.genus == 0) {
    // Only g_q^(2-N) = 1 survives: cyclic of order N - 2.
    p.order = n - 2;
    p.classification = p.order == 1 ? GroupClass::trivial : GroupClass::finite_cyclic;
  }
  return p;
}

GroupPresentation pi1_presentation(const Polygon& poly) {
  return pi1_presentation(static_cast<int>(poly.boundary_components()), static_cast<int>(poly.size()));
}

std::string to_string(GroupClass c) {
  switch (c) {
    case GroupClass::trivial: return "trivial";
    case GroupClass::finite_cyclic: return "finite_cyclic";
    case GroupClass::other: return "other";
  }
  return "other";
}

std::string to_string(Growth g) { return g == Growth::not_exponential ? "not_exponential" : "unknown"; }

Growth growth_class(const GroupPresentation& p) {
  return p.classification == GroupClass::other ? Growth::unknown : Growth::not_exponential;
}

std::string presentation_text(const GroupPresentation& p) {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < p.generators.size(); ++i) os << (i ? ", " : "") << p.generators[i];
  os << " | ";
  for (std::size_t i = 0; i < p.relations.size(); ++i) os << (i ? ", " : "") << p.relations[i];
  os << ">";
  return os.str();
}

std::string summary(const GroupPresentation& p) {
  switch (p.classification) {
    case GroupClass::trivial: return "trivial; phase space: S³";
    case GroupClass::finite_cyclic: return "cyclic of order " + std::to_string(p.order);
    case GroupClass::other: break;
  }
  return presentation_text(p);
}

}  // namespace billiards
