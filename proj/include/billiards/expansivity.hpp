#pragma once
/**
 * Finite-horizon evidence about expansiveness of the billiard flow.
 *
 * Verdicts follow fixed witness rules:
 *  - negative curvature: the flow is expansive (a known result; nothing is computed);
 *  - flat tables: expansive iff there is no periodic orbit, so a verified
 *    periodic orbit proves non-expansiveness and its absence proves nothing;
 *  - spherical tables: a periodic orbit, two distinct orbits with the same
 *    itinerary, or a pair of conjugated vertices each rule expansiveness out.
 * "unknown" is returned whenever no witness turns up.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "billiards/collision.hpp"
#include "billiards/unfolding.hpp"

namespace billiards {

enum class Verdict { expansive, not_expansive, unknown };

enum class Rule {
  negative_curvature,        ///< k = -1: expansive unconditionally
  flat_periodic_orbit,       ///< k = 0: periodic orbit <=> not expansive
  flat_no_witness,           ///< k = 0: nothing found; absence is not certifiable
  spherical_periodic_orbit,  ///< k = +1: periodic orbits prevent expansiveness
  spherical_same_itinerary,  ///< k = +1: expansive flows have injective itineraries
  conjugated_vertices,       ///< k = +1: conjugated vertices prevent expansiveness
  spherical_no_witness,
};

std::string to_string(Verdict v);
std::string to_string(Rule r);
/// One-sentence statement of the rule.
std::string describe(Rule r);

enum class PairOutcome { itineraries_diverge, itineraries_agree };

struct PairProbe {
  BoundaryState a;
  BoundaryState b;
  std::size_t horizon{0};
  PairOutcome outcome{PairOutcome::itineraries_agree};
  /// Index of the first disagreement (negative: in the past); 0 on agreement.
  long index{0};
  /// A vertex hit or grazing bounce cut the comparison short.
  bool truncated{false};
  /// Number of itinerary indices actually compared.
  std::size_t compared{0};
};

/// Orbits closer than this (max of |ds|, |dpsi|) count as the same orbit.
inline constexpr double kSameOrbitTolerance = 1e-6;
/// Bounces scanned in each direction for the same-orbit test.
inline constexpr std::size_t kSameOrbitWindow = 20;

/// True when a lies within kSameOrbitTolerance of f^n(b) for some |n| <= window.
bool on_same_orbit(const BoundaryState& a, const BoundaryState& b, const Polygon& poly,
                   std::size_t window = kSameOrbitWindow);

/**
 * Compares the itineraries of a and b at indices -horizon..horizon. Throws
 * Error when the two states lie on the same orbit.
 */
PairProbe probe_pair(const BoundaryState& a, const BoundaryState& b, const Polygon& poly, std::size_t horizon);

struct NeighborhoodCheck {
  struct Entry {
    double offset{0};
    bool periodic{false};
    bool escaped{false};  ///< left the side or hit a vertex
  };
  bool all_periodic{false};
  std::vector<Entry> entries;
};

/**
 * Shifts a flat periodic orbit's start along its side by each offset, keeping
 * the direction, and checks that the shifted orbit is periodic with the same
 * bounce sequence. Throws Error for non-flat tables.
 */
NeighborhoodCheck periodic_orbit_neighborhood_check(const PeriodicOrbitReport& report, const Polygon& poly,
                                                    const std::vector<double>& offsets = {-1e-3, -5e-4, 2.5e-4,
                                                                                          5e-4, 1e-3});

enum class WitnessKind { periodic_orbit, same_itinerary_pair, conjugated_vertices };

std::string to_string(WitnessKind w);

struct Witness {
  WitnessKind kind{WitnessKind::periodic_orbit};
  Rule rule{Rule::flat_periodic_orbit};
  std::optional<PeriodicOrbitReport> orbit;
  std::optional<PairProbe> pair;
  std::optional<ConjugatePair> conjugacy;
  std::optional<NeighborhoodCheck> neighborhood;
};

/// Recomputes the witness from scratch.
bool verify_witness(const Witness& w, const Polygon& poly);

struct ClassifyBudget {
  std::size_t horizon{1000};         ///< pair-probe horizon
  std::size_t samples{10000};        ///< periodic-search samples
  std::size_t periodic_bounces{50};  ///< periodic-search period bound
  std::size_t diagonal_depth{20};    ///< bounces allowed along a diagonal
  double diagonal_length{0};         ///< 0: 2 pi + 1e-6
  std::size_t diagonal_angles{10000};
  std::size_t pair_attempts{20};
  double pair_offset{1e-5};  ///< psi difference of probed pairs
  std::uint64_t seed{1};
};

struct ExpansivenessVerdict {
  Verdict verdict{Verdict::unknown};
  Rule rule{Rule::spherical_no_witness};
  std::vector<Witness> witnesses;
};

ExpansivenessVerdict classify(const Polygon& poly, const ClassifyBudget& budget = {});

/// Human-readable multi-line report.
std::string format_verdict(const ExpansivenessVerdict& v);

}  // namespace billiards
