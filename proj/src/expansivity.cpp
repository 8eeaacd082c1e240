#include "billiards/expansivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

namespace billiards {

namespace {

constexpr double pi = std::numbers::pi;

bool close_states(const BoundaryState& a, const BoundaryState& b, double tol) {
  return a.side == b.side && std::abs(a.s - b.s) < tol && std::abs(a.psi - b.psi) < tol;
}

/// Labels of b at indices 0..count-1; `cut` is set when the orbit stopped early.
std::vector<int> labels_of(const BoundaryState& b, const Polygon& poly, std::size_t count, bool& cut) {
  std::vector<int> out{b.side};
  BoundaryState cur = b;
  cut = false;
  try {
    while (out.size() < count) {
      Flight<double> f = collision_step(cur, poly);
      if (f.hit_vertex()) {
        cut = true;
        break;
      }
      cur = f.next;
      out.push_back(cur.side);
    }
  } catch (const DegenerateStateError&) {
    cut = true;
  }
  return out;
}

std::string numstr(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string state_text(const BoundaryState& b) {
  return "side " + std::to_string(b.side) + " s=" + numstr(b.s) + " psi=" + numstr(b.psi);
}

std::string labels_text(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

const PeriodicOrbitReport& shortest(const std::vector<PeriodicOrbitReport>& v) {
  return *std::min_element(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.period < b.period; });
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::expansive: return "expansive";
    case Verdict::not_expansive: return "not_expansive";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::negative_curvature: return "negative-curvature";
    case Rule::flat_periodic_orbit: return "flat-periodic-orbit";
    case Rule::flat_no_witness: return "flat-no-witness";
    case Rule::spherical_periodic_orbit: return "spherical-periodic-orbit";
    case Rule::spherical_same_itinerary: return "spherical-same-itinerary";
    case Rule::conjugated_vertices: return "conjugated-vertices";
    case Rule::spherical_no_witness: return "spherical-no-witness";
  }
  return "unknown";
}

std::string describe(Rule r) {
  switch (r) {
    case Rule::negative_curvature:
      return "billiard flows of polygons of negative curvature are expansive";
    case Rule::flat_periodic_orbit:
      return "a flat billiard flow is expansive exactly when it has no periodic orbit; one was found";
    case Rule::flat_no_witness:
      return "no periodic orbit found within budget; absence cannot be certified by search";
    case Rule::spherical_periodic_orbit:
      return "a spherical billiard flow with a periodic orbit is not expansive";
    case Rule::spherical_same_itinerary:
      return "an expansive spherical billiard flow has an injective itinerary map; two distinct orbits share one";
    case Rule::conjugated_vertices:
      return "conjugated vertices prevent the spherical billiard flow from being expansive";
    case Rule::spherical_no_witness:
      return "no periodic orbit, same-itinerary pair or conjugated vertices found within budget";
  }
  return "";
}

std::string to_string(WitnessKind w) {
  switch (w) {
    case WitnessKind::periodic_orbit: return "periodic orbit";
    case WitnessKind::same_itinerary_pair: return "same-itinerary pair";
    case WitnessKind::conjugated_vertices: return "conjugated vertices";
  }
  return "";
}

bool on_same_orbit(const BoundaryState& a, const BoundaryState& b, const Polygon& poly, std::size_t window) {
  for (int pass = 0; pass < 2; ++pass) {
    BoundaryState cur = pass == 0 ? b : reverse(b);
    for (std::size_t n = 0; n <= window; ++n) {
      BoundaryState here = pass == 0 ? cur : reverse(cur);
      if (close_states(a, here, kSameOrbitTolerance)) return true;
      try {
        Flight<double> f = collision_step(cur, poly);
        if (f.hit_vertex()) break;
        cur = f.next;
      } catch (const DegenerateStateError&) {
        break;
      }
    }
  }
  return false;
}

PairProbe probe_pair(const BoundaryState& a, const BoundaryState& b, const Polygon& poly, std::size_t horizon) {
  if (horizon == 0) throw Error("probe_pair: horizon must be at least 1");
  check_state(poly, a);
  check_state(poly, b);
  if (on_same_orbit(a, b, poly) || on_same_orbit(b, a, poly))
    throw Error("probe_pair: the two states lie on the same orbit");
  PairProbe p;
  p.a = a;
  p.b = b;
  p.horizon = horizon;
  bool cut_fa, cut_fb, cut_ba, cut_bb;
  auto fa = labels_of(a, poly, horizon + 1, cut_fa);
  auto fb = labels_of(b, poly, horizon + 1, cut_fb);
  auto ba = labels_of(reverse(a), poly, horizon + 1, cut_ba);
  auto bb = labels_of(reverse(b), poly, horizon + 1, cut_bb);
  const std::size_t nf = std::min(fa.size(), fb.size());
  const std::size_t nb = std::min(ba.size(), bb.size());
  // Earliest disagreement in |index|, forward first on ties.
  for (std::size_t n = 0; n < std::max(nf, nb); ++n) {
    if (n < nf) {
      ++p.compared;
      if (fa[n] != fb[n]) {
        p.outcome = PairOutcome::itineraries_diverge;
        p.index = static_cast<long>(n);
        return p;
      }
    }
    if (n > 0 && n < nb) {
      ++p.compared;
      if (ba[n] != bb[n]) {
        p.outcome = PairOutcome::itineraries_diverge;
        p.index = -static_cast<long>(n);
        return p;
      }
    }
  }
  p.outcome = PairOutcome::itineraries_agree;
  p.truncated = nf < horizon + 1 || nb < horizon + 1;
  return p;
}

NeighborhoodCheck periodic_orbit_neighborhood_check(const PeriodicOrbitReport& report, const Polygon& poly,
                                                    const std::vector<double>& offsets) {
  if (poly.curvature() != Curvature::flat) throw Error("neighbourhood check applies to flat tables only");
  NeighborhoodCheck out;
  out.all_periodic = true;
  const double L = poly.side(static_cast<std::size_t>(report.start.side - 1)).length;
  for (double d : offsets) {
    NeighborhoodCheck::Entry e;
    e.offset = d;
    BoundaryState b{report.start.side, report.start.s + d, report.start.psi};
    if (!(b.s > 0 && b.s < L)) {
      e.escaped = true;
    } else {
      bool cut = false;
      auto labels = labels_of(b, poly, report.period + 1, cut);
      if (cut) {
        e.escaped = true;
      } else {
        // Re-run to get the final state.
        BoundaryState cur = b;
        for (std::size_t n = 0; n < report.period; ++n) cur = collision_step(cur, poly).next;
        std::vector<int> seq(labels.begin() + 1, labels.end());
        e.periodic = seq == report.bounces && close_states(cur, b, 1e-8);
      }
    }
    out.all_periodic = out.all_periodic && e.periodic;
    out.entries.push_back(e);
  }
  return out;
}

bool verify_witness(const Witness& w, const Polygon& poly) {
  switch (w.kind) {
    case WitnessKind::periodic_orbit: {
      if (!w.orbit) return false;
      const auto& r = *w.orbit;
      bool cut = false;
      auto labels = labels_of(r.start, poly, r.period + 1, cut);
      if (cut) return false;
      BoundaryState cur = r.start;
      for (std::size_t n = 0; n < r.period; ++n) cur = collision_step(cur, poly).next;
      return close_states(cur, r.start, 1e-8) && std::vector<int>(labels.begin() + 1, labels.end()) == r.bounces;
    }
    case WitnessKind::same_itinerary_pair: {
      if (!w.pair) return false;
      PairProbe again = probe_pair(w.pair->a, w.pair->b, poly, w.pair->horizon);
      return again.outcome == PairOutcome::itineraries_agree && !again.truncated;
    }
    case WitnessKind::conjugated_vertices: {
      if (!w.conjugacy) return false;
      const Diagonal& d = w.conjugacy->diagonal;
      auto shot = shoot_from_vertex(poly, static_cast<std::size_t>(d.start_vertex - 1), d.angle, d.bounces.size(),
                                    d.length + 1.0);
      if (shot.symbols.back() != -d.end_vertex) return false;
      const double len = shot.lengths.back();
      const double res = poly.space().distance(shot.last_point, poly.vertex(static_cast<std::size_t>(d.end_vertex - 1)));
      return res < kConjugacyTolerance && std::abs(len - w.conjugacy->multiple * pi) < kConjugacyTolerance;
    }
  }
  return false;
}

ExpansivenessVerdict classify(const Polygon& poly, const ClassifyBudget& budget) {
  ExpansivenessVerdict v;
  if (poly.curvature() == Curvature::hyperbolic) {
    v.verdict = Verdict::expansive;
    v.rule = Rule::negative_curvature;
    return v;
  }
  PeriodicSearch ps;
  ps.max_bounces = budget.periodic_bounces;
  ps.samples = budget.samples;
  ps.seed = budget.seed;
  auto orbits = find_periodic(poly, ps);

  if (poly.curvature() == Curvature::flat) {
    v.rule = Rule::flat_no_witness;
    if (!orbits.empty()) {
      Witness w;
      w.kind = WitnessKind::periodic_orbit;
      w.rule = Rule::flat_periodic_orbit;
      w.orbit = shortest(orbits);
      w.neighborhood = periodic_orbit_neighborhood_check(*w.orbit, poly);
      if (verify_witness(w, poly)) v.witnesses.push_back(std::move(w));
    }
    if (!v.witnesses.empty()) {
      v.verdict = Verdict::not_expansive;
      v.rule = Rule::flat_periodic_orbit;
    }
    return v;
  }

  // Sphere: gather every kind of witness the budget allows.
  if (!orbits.empty()) {
    Witness w;
    w.kind = WitnessKind::periodic_orbit;
    w.rule = Rule::spherical_periodic_orbit;
    w.orbit = shortest(orbits);
    if (verify_witness(w, poly)) v.witnesses.push_back(std::move(w));
  }
  std::mt19937_64 rng(budget.seed);
  for (std::size_t i = 0; i < budget.pair_attempts; ++i) {
    const int side = 1 + static_cast<int>(uniform01(rng) * static_cast<double>(poly.size()));
    const double L = poly.side(static_cast<std::size_t>(side - 1)).length;
    BoundaryState a{side, L * (0.1 + 0.8 * uniform01(rng)), 0.2 + (pi - 0.4) * uniform01(rng)};
    BoundaryState b{a.side, a.s, a.psi + budget.pair_offset};
    try {
      PairProbe p = probe_pair(a, b, poly, budget.horizon);
      if (p.outcome != PairOutcome::itineraries_agree || p.truncated) continue;
      Witness w;
      w.kind = WitnessKind::same_itinerary_pair;
      w.rule = Rule::spherical_same_itinerary;
      w.pair = p;
      if (verify_witness(w, poly)) {
        v.witnesses.push_back(std::move(w));
        break;
      }
    } catch (const Error&) {
      continue;
    }
  }
  DiagonalSearch ds;
  ds.angles_per_vertex = budget.diagonal_angles;
  const double max_len = budget.diagonal_length > 0 ? budget.diagonal_length : 2 * pi + 1e-6;
  for (const ConjugatePair& c : conjugated_vertices(poly, budget.diagonal_depth, max_len, ds)) {
    Witness w;
    w.kind = WitnessKind::conjugated_vertices;
    w.rule = Rule::conjugated_vertices;
    w.conjugacy = c;
    if (verify_witness(w, poly)) {
      v.witnesses.push_back(std::move(w));
      break;
    }
  }
  v.rule = Rule::spherical_no_witness;
  if (!v.witnesses.empty()) {
    v.verdict = Verdict::not_expansive;
    v.rule = v.witnesses.front().rule;
  }
  return v;
}

std::string format_verdict(const ExpansivenessVerdict& v) {
  std::ostringstream os;
  os << "verdict: " << to_string(v.verdict) << " (" << to_string(v.rule) << ")\n";
  os << "reason: " << describe(v.rule) << "\n";
  for (std::size_t i = 0; i < v.witnesses.size(); ++i) {
    const Witness& w = v.witnesses[i];
    os << "witness " << i + 1 << ": " << to_string(w.kind) << " [" << to_string(w.rule) << "]\n";
    if (w.orbit) {
      const auto& r = *w.orbit;
      os << "  start: " << state_text(r.start) << "\n";
      os << "  period: " << r.period << " bounces, length " << numstr(r.length) << "\n";
      os << "  bounces: " << labels_text(r.bounces) << "\n";
      os << "  holonomy: " << to_string(r.holonomy.kind);
      if (r.holonomy.angle != 0) os << ", angle " << numstr(r.holonomy.angle);
      if (r.holonomy.translation != 0) os << ", length " << numstr(r.holonomy.translation);
      os << "\n  return residual: " << numstr(r.residual) << "\n";
    }
    if (w.neighborhood) {
      os << "  parallel neighbours periodic: " << (w.neighborhood->all_periodic ? "yes" : "no") << "\n";
      for (const auto& e : w.neighborhood->entries)
        os << "    offset " << numstr(e.offset) << ": " << (e.periodic ? "periodic" : (e.escaped ? "escaped" : "not periodic"))
           << "\n";
    }
    if (w.pair) {
      os << "  a: " << state_text(w.pair->a) << "\n";
      os << "  b: " << state_text(w.pair->b) << "\n";
      os << "  itineraries agree on indices -" << w.pair->horizon << ".." << w.pair->horizon << "\n";
    }
    if (w.conjugacy) {
      const auto& c = *w.conjugacy;
      os << "  vertices: V" << c.first_vertex << " - V" << c.second_vertex << "\n";
      os << "  length: " << numstr(c.diagonal.length) << " = " << c.multiple << " pi\n";
      os << "  bounces: " << labels_text(c.diagonal.bounces) << "\n";
      os << "  launch angle: " << numstr(c.diagonal.angle) << ", residual " << numstr(c.diagonal.residual) << "\n";
    }
  }
  return os.str();
}

}  // namespace billiards
