#include "billiards/collision.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace billiards {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::vertex_hit: return "vertex_hit";
    case Termination::horizon: return "horizon";
    case Termination::periodic: return "periodic";
  }
  return "unknown";
}

std::string format_itinerary(const Itinerary& it) {
  std::ostringstream os;
  for (std::size_t i = 0; i < it.labels.size(); ++i) {
    if (i) os << ',';
    os << it.labels[i];
  }
  if (it.backward && it.forward)
    os << ';' << to_string(*it.backward) << '|' << to_string(*it.forward);
  else if (it.forward)
    os << ';' << to_string(*it.forward);
  else if (it.backward)
    os << ';' << to_string(*it.backward);
  return os.str();
}

namespace detail {

namespace {

using Key = std::tuple<int, std::vector<int>, int, long long>;

Key key_of(const Diagonal& d) {
  // Lengths are compared on a 1e-6 grid so that bisection noise does not
  // split one diagonal into several.
  long long len = std::llround(d.length * 1e6);
  Key fwd{d.start_vertex, d.bounces, d.end_vertex, len};
  Key bwd{d.end_vertex, std::vector<int>(d.bounces.rbegin(), d.bounces.rend()), d.start_vertex, len};
  return std::min(fwd, bwd);
}

}  // namespace

void canonicalize(std::vector<Diagonal>& found) {
  std::map<Key, Diagonal> best;
  for (const Diagonal& d : found) {
    Key k = key_of(d);
    auto it = best.find(k);
    if (it == best.end())
      best.emplace(std::move(k), d);
    else if (d.residual < it->second.residual)
      it->second = d;
  }
  found.clear();
  for (auto& [k, d] : best) found.push_back(d);
}

}  // namespace detail
}  // namespace billiards
