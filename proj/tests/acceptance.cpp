// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "billiards/builtins.hpp"
#include "billiards/collision.hpp"
#include "billiards/expansivity.hpp"
#include "billiards/flow.hpp"
#include "billiards/spec_io.hpp"
#include "billiards/topology.hpp"
#include "billiards/unfolding.hpp"

using namespace billiards;
constexpr double pi = std::numbers::pi;
const std::array<Curvature, 3> all_k{Curvature::hyperbolic, Curvature::flat, Curvature::spherical};

namespace {

struct Result {
  bool pass{false};
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double angle_diff(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

template <class Real>
BasicBoundaryState<Real> random_state(const BasicPolygon<Real>& p, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> side(1, static_cast<int>(p.size()));
  std::uniform_real_distribution<double> u(0.02, 0.98);
  int j = side(rng);
  const double L = static_cast<double>(p.side(static_cast<std::size_t>(j - 1)).length);
  return {j, Real(u(rng) * L), Real(u(rng) * pi)};
}

// ---- 1 ---------------------------------------------------------------------

Result flow_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0, 1);
  const double eps = 1.5;  // chart radius; below pi so the sphere chart is a disc
  IntegrationOptions opts;
  opts.eps = eps;
  double worst = 0;
  std::size_t samples = 0;
  for (Curvature k : all_k) {
    int accepted = 0;
    while (accepted < 1000) {
      ChartState s0{0.1 + 1.3 * u(rng), 2 * pi * u(rng), 2 * pi * u(rng)};
      const double T = 2 * u(rng);
      // In-chart: the exact path stays inside the chart and away from the vertex.
      bool inside = true;
      for (int i = 0; i <= 64 && inside; ++i) {
        try {
          inside = closed_form_flow(s0, T * i / 64, k, eps).r > 0.05;
        } catch (const ChartExitError&) {
          inside = false;
        }
      }
      if (!inside) continue;
      ++accepted;
      opts.sample_dt = T / 16;
      for (const auto& p : integrate_velocity_field(s0, T, k, opts)) {
        ChartState cf = closed_form_flow(s0, p.t, k);
        worst = std::max({worst, std::abs(p.s.r - cf.r) / std::max(1.0, std::abs(cf.r)),
                          std::abs(p.s.gamma - cf.gamma) / std::max(1.0, std::abs(cf.gamma)),
                          std::abs(p.s.beta - cf.beta) / std::max(1.0, std::abs(cf.beta))});
        ++samples;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-8 && elapsed < 60,
          "3x1000 initial conditions, " + std::to_string(samples) + " samples, max relative error " +
              fmt("%.3g", worst) + " (< 1e-8), " + fmt("%.2f", elapsed) + " s (< 60 s)"};
}

// ---- 2 ---------------------------------------------------------------------

Result extended_field() {
  double worst_z = 0, worst_eig = 0;
  for (Curvature k : all_k)
    for (double theta : {pi / 6, pi / 2, 2.0}) {
      for (int i = 0; i < 1000; ++i) {
        const double z = -pi + 2 * pi * i / 999.0;
        FieldValue v = extended_field_Z({0, 0, z}, theta, k);
        worst_z = std::max({worst_z, std::abs(v.d0), std::abs(v.d1), std::abs(v.d2 + std::sin(z))});
      }
      const std::array<std::array<double, 3>, 2> expected{{{1, 1, -1}, {1, -1, -1}}};
      for (int w = 0; w < 2; ++w) {
        const double z0 = w == 0 ? 0.0 : pi;
        auto fd = eigenvalues(jacobian_Z_numeric({0, 0, z0}, theta, k));
        auto an = singularity_jacobian(z0, theta, k).eigenvalues;
        for (int i = 0; i < 3; ++i)
          worst_eig = std::max({worst_eig, std::abs(fd[i] - expected[w][i]), std::abs(an[i] - expected[w][i]),
                                std::abs(an[i] - fd[i])});
      }
    }
  return {worst_z <= 1e-15 && worst_eig < 1e-6,
          "Z(0,0,z) error " + fmt("%.3g", worst_z) + " on 1000 z values (<= 1e-15); eigenvalues {1,1,-1} at z=0 and "
          "{1,-1,-1} at z=pi, analytic and finite-difference error " + fmt("%.3g", worst_eig) + " (< 1e-6)"};
}

// ---- 3 ---------------------------------------------------------------------

Result chart_round_trip() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double theta = 0.1 + 3 * u(rng);
    ChartState s{0.01 + 1.4 * u(rng), 2 * theta * u(rng), 2 * pi * u(rng)};
    ChartState b = chart_inverse(chart_forward(s, theta), theta);
    worst = std::max({worst, std::abs(b.r - s.r), angle_diff(b.gamma, s.gamma, 2 * theta),
                      angle_diff(b.beta, s.beta, 2 * pi)});
    CartesianChartState c = chart_forward(s, theta);
    CartesianChartState c2 = chart_forward(chart_inverse(c, theta), theta);
    worst = std::max({worst, std::abs(c2.x - c.x), std::abs(c2.y - c.y), std::abs(c2.z - c.z)});
    for (Curvature k : all_k) {
      ChartState f = field_chart_inverse(field_chart_forward(s, theta, k), theta, k);
      worst = std::max({worst, std::abs(f.r - s.r), angle_diff(f.gamma, s.gamma, 2 * theta),
                        angle_diff(f.beta, s.beta, 2 * pi)});
    }
  }
  return {worst < 1e-12, "1000 states, both composition orders plus the three field charts, max error " +
                             fmt("%.3g", worst) + " (< 1e-12)"};
}

// ---- 4 ---------------------------------------------------------------------

Result collision_laws() {
  std::mt19937_64 rng(404);
  double worst = 0;
  std::size_t steps = 0, vertex_stops = 0;
  for (const Polygon& p : {unit_square(), hyperbolic_pentagon(), sphere_triangle(1.0)}) {
    const auto& sp = p.space();
    for (int i = 0; i < 1000; ++i) {
      BoundaryState b = random_state(p, rng);
      for (int n = 0; n < 50; ++n) {
        Flight<double> f = collision_step(b, p);
        if (f.hit_vertex()) {
          ++vertex_stops;
          break;
        }
        auto out = boundary_tangent(p, f.next);
        auto in_dir = sp.geodesic_at({boundary_tangent(p, b)}, f.length).dir;
        auto e = sp.geodesic_at(p.side(static_cast<std::size_t>(f.next.side - 1)).geodesic, f.next.s).dir;
        const double mirror =
            std::abs(sp.angle_between({out.base, e}, {out.base, out.dir}) -
                     sp.angle_between({out.base, e}, {out.base, in_dir}));
        Flight<double> back = collision_step(reverse(f.next), p);
        BoundaryState rb = reverse(b);
        double rev = back.hit_vertex() || back.next.side != rb.side
                         ? INFINITY
                         : std::max(std::abs(back.next.s - rb.s), std::abs(back.next.psi - rb.psi));
        worst = std::max({worst, mirror, rev});
        ++steps;
        b = f.next;
      }
    }
  }
  return {worst < 1e-9, "square, hyperbolic pentagon, sphere triangle: " + std::to_string(steps) +
                            " bounces from 3x1000 states (" + std::to_string(vertex_stops) +
                            " orbits stopped at a vertex), mirror and reversal residual " + fmt("%.3g", worst) +
                            " (< 1e-9)"};
}

// ---- 5 ---------------------------------------------------------------------

Result unfolding_equivalence() {
  std::mt19937_64 rng(505);
  Polygon irregular =
      Polygon::build(Curvature::flat, {{{0, 0, 1}, {2, 0, 1}, {2.5, 1.2, 1}, {0.7, 2, 1}, {-0.4, 1, 1}}});
  std::size_t mismatches = 0, runs = 0;
  double collinear = 0;
  for (const Polygon& p : {unit_square(), irregular}) {
    for (int i = 0; i < 1000; ++i) {
      BoundaryState b = random_state(p, rng);
      UnfoldingChain c = unfold(b, p, 50);
      Itinerary it = itinerary(b, p, 51);
      if (c.labels != it.labels || c.truncated != (it.forward == Termination::vertex_hit)) ++mismatches;
      collinear = std::max(collinear, unfolded_geodesic_residual(Curvature::flat, c.points));
      ++runs;
    }
  }
  // Hyperbolic chains are followed in quad precision: over 50 bounces the
  // flow separates nearby orbits by far more than double precision resolves.
  BasicPolygon<Quad> pent = hyperbolic_pentagon().cast<Quad>();
  double hyper_residual = 0;
  for (int i = 0; i < 1000; ++i) {
    BasicBoundaryState<Quad> b = random_state(pent, rng);
    BasicUnfoldingChain<Quad> c = unfold(b, pent, 50);
    Itinerary it = itinerary(b, pent, 51);
    if (c.labels != it.labels || c.truncated != (it.forward == Termination::vertex_hit)) ++mismatches;
    std::vector<Vec3<double>> pts;
    for (std::size_t j = 0; j < std::min<std::size_t>(c.points.size(), 13); ++j)
      pts.push_back(c.points[j].template cast<double>());
    hyper_residual = std::max(hyper_residual, unfolded_geodesic_residual(Curvature::hyperbolic, pts));
    ++runs;
  }
  return {mismatches == 0 && collinear < 1e-9,
          std::to_string(runs) + " chains of 50 bounces (square, irregular pentagon, hyperbolic pentagon), " +
              std::to_string(mismatches) + " label mismatches, flat collinearity " + fmt("%.3g", collinear) +
              " (< 1e-9), hyperbolic geodesic residual over the first 12 copies " + fmt("%.3g", hyper_residual)};
}

// ---- 6 ---------------------------------------------------------------------

Result spherical_periodicity() {
  PeriodicSearch opts;
  opts.samples = 10000;
  opts.max_bounces = 50;
  auto none = find_periodic(sphere_triangle(1.0), opts);
  long hits = 0;
  for (long n = 1; n <= 1000000; ++n) {
    const long k0 = std::lround(2.0 * n / pi);
    for (long k = std::max(1L, k0 - 1); k <= std::min(1000000L, k0 + 1); ++k)
      if (spherical_periodicity_condition(1.0, n, k)) ++hits;
  }

  const double theta = pi / 6;
  auto found = find_periodic(sphere_triangle(theta), opts);
  bool ok = false;
  std::string orbit;
  for (const auto& o : found) {
    // Sides 1 and 3 meet at V1; consecutive reflections in them rotate about V1 by 2 theta.
    long meridian = 0;
    for (int s : o.bounces) meridian += s != 2;
    const long n = meridian / 2;
    const double total = 2 * n * theta;
    const long k = std::lround(total / pi);
    const bool angle_ok = angle_diff(o.holonomy.angle, total, 2 * pi) < 1e-8;
    if (n == 3 && k == 1 && spherical_periodicity_condition(theta, n, k) && angle_ok) {
      ok = true;
      orbit = "period " + std::to_string(o.period) + ", holonomy " + to_string(o.holonomy.kind) + " angle " +
              fmt("%.12g", o.holonomy.angle) + " = 2*3*theta";
    }
  }
  return {none.empty() && hits == 0 && ok,
          "theta=1: " + std::to_string(none.size()) + " orbits from 10^4 samples x 50 bounces, " +
              std::to_string(hits) + " (n,k) <= 10^6 satisfying 2 n theta = k pi; theta=pi/6: " +
              std::to_string(found.size()) + " orbit(s)" + (ok ? ", " + orbit + ", (n,k)=(3,1)" : ", none with (n,k)=(3,1)")};
}

// ---- 7 ---------------------------------------------------------------------

Result conjugated() {
  auto pairs = conjugated_vertices(sphere_triangle(1.0), 20, 2 * pi + 1e-6);
  for (const auto& c : pairs)
    if (c.first_vertex == 1 && c.second_vertex == 1 && std::abs(c.diagonal.length - pi) < 1e-8 &&
        c.diagonal.residual < 1e-8)
      return {true, "V1-V1 diagonal, length error " + fmt("%.3g", std::abs(c.diagonal.length - pi)) +
                        ", residual " + fmt("%.3g", c.diagonal.residual) + " (< 1e-8)"};
  return {false, std::to_string(pairs.size()) + " conjugate pairs, none V1-V1 of length pi"};
}

// ---- 8 ---------------------------------------------------------------------

Result expansiveness() {
  std::vector<std::string> notes;
  bool ok = true;

  Polygon sphere = sphere_triangle(1.0);
  // Side 3 runs from V3 to V1.
  PairProbe probe = probe_pair({3, 0.6, 1.2}, {3, 0.6, 1.2 + 1e-5}, sphere, 1000);
  const bool agree = probe.outcome == PairOutcome::itineraries_agree && !probe.truncated;
  ok &= agree;
  notes.push_back(std::string("sphere pair ") + (agree ? "agrees" : "does not agree") + " on " +
                  std::to_string(probe.compared) + " indices");

  ExpansivenessVerdict vs = classify(sphere);
  const bool spherical_rule = vs.rule == Rule::spherical_periodic_orbit || vs.rule == Rule::spherical_same_itinerary ||
                              vs.rule == Rule::conjugated_vertices;
  ok &= vs.verdict == Verdict::not_expansive && spherical_rule;
  notes.push_back("sphere " + to_string(vs.verdict) + " (" + to_string(vs.rule) + ")");

  Polygon square = unit_square();
  ExpansivenessVerdict vq = classify(square);
  bool verified = !vq.witnesses.empty() && vq.witnesses[0].kind == WitnessKind::periodic_orbit &&
                  verify_witness(vq.witnesses[0], square);
  ok &= vq.verdict == Verdict::not_expansive && verified;
  notes.push_back("square " + to_string(vq.verdict) + " (" + to_string(vq.rule) + ")" +
                  (verified ? " with verified periodic witness" : " without a verified periodic witness"));

  Polygon pent = hyperbolic_pentagon();
  ExpansivenessVerdict vh = classify(pent);
  ok &= vh.verdict == Verdict::expansive && vh.rule == Rule::negative_curvature;
  notes.push_back("pentagon " + to_string(vh.verdict) + " (" + to_string(vh.rule) + ")");

  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> off(1e-6, 1e-4);
  std::size_t diverged = 0, pairs = 0;
  for (; pairs < 10000; ++pairs) {
    BoundaryState a = random_state(pent, rng);
    BoundaryState b{a.side, a.s + off(rng), a.psi + off(rng)};
    PairProbe pr = probe_pair(a, b, pent, 100);
    if (pr.outcome == PairOutcome::itineraries_diverge && std::abs(pr.index) <= 100) ++diverged;
  }
  ok &= diverged == pairs;
  notes.push_back(std::to_string(diverged) + "/" + std::to_string(pairs) + " pentagon pairs diverge within 100");

  std::string detail;
  for (std::size_t i = 0; i < notes.size(); ++i) detail += (i ? "; " : "") + notes[i];
  return {ok, detail};
}

// ---- 9 ---------------------------------------------------------------------

Result topology() {
  bool ok = true;
  std::string detail;
  GroupPresentation tri = pi1_presentation(regular_polygon(3));
  ok &= tri.classification == GroupClass::trivial && summary(tri) == "trivial; phase space: S³";
  detail += "triangle: " + summary(tri);
  for (int n = 4; n <= 8; ++n) {
    GroupPresentation p = pi1_presentation(regular_polygon(n));
    ok &= p.classification == GroupClass::finite_cyclic && p.order == n - 2 &&
          growth_class(p) == Growth::not_exponential;
  }
  detail += "; N=4..8: cyclic of order N-2, growth not_exponential";

  // Doubling the table along its boundary: X(S) = 2 X(D) - X(boundary) = 2 (2 - b).
  // Each vertex is a singular point of index 1 and the extra point carries the
  // rest, so the relation exponent must be X(S) - N.
  Polygon ann = flat_annulus();
  GroupPresentation pa = pi1_presentation(ann);
  const int b = static_cast<int>(ann.boundary_components());
  const int n = static_cast<int>(ann.size());
  const int euler = 2 * (2 - b);
  const int extra_index = euler - n;
  ok &= pa.euler_characteristic == euler && pa.exponent == extra_index && extra_index + n == euler &&
        pa.genus == b - 1;
  detail += "; annulus: X(S)=" + std::to_string(euler) + ", N=" + std::to_string(n) + ", exponent " +
            std::to_string(pa.exponent) + ", relation " + presentation_text(pa);
  return {ok, detail};
}

// ---- 10 --------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with stdout captured to a file; returns stdout plus every output file.
std::string run_cli(const std::string& args, const std::filesystem::path& dir) {
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto out = dir / "stdout.txt";
  std::string cmd = std::string("\"") + BILLIARD_CLI + "\" " + args + " --out \"" + dir.string() + "\" > \"" +
                    out.string() + "\" 2>&1";
  int status = std::system(cmd.c_str());
  std::string all = "status " + std::to_string(status) + "\n";
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) all += "== " + f.filename().string() + "\n" + slurp(f);
  return all;
}

Result determinism() {
  const std::string specs = BILLIARD_SPECS;
  const std::vector<std::string> commands{
      "simulate --spec " + specs + "/square.txt --side 1 --s 0.5 --psi 1.5707963 --bounces 10",
      "simulate --builtin hyperbolic-pentagon --side 2 --s 0.4 --psi 1.1 --bounces 200 --format json",
      "simulate --builtin sphere-triangle --theta 1.0 --vertex 1 --r 0.3 --gamma 0.4 --beta 2.0 --time 2",
      "unfold --builtin sphere-triangle --theta 1.0 --side 3 --s 0.6 --psi 1.2 --bounces 40",
      "periodic --builtin sphere-triangle --theta 0.5235987755982988 --samples 2000 --seed 7",
      "periodic --builtin square --samples 500 --seed 3 --format json",
      "diagonals --builtin square --bounces 4 --length 4",
      "conjugate --builtin sphere-triangle --theta 1.0",
      "expansivity --builtin square --seed 5 --format json",
      "expansivity --builtin sphere-triangle --theta 1.0",
      "topology --spec " + specs + "/annulus.txt",
  };
  const auto base = std::filesystem::temp_directory_path() / ("billiard-acceptance-" + std::to_string(::getpid()));
  std::size_t same = 0, nonzero = 0;
  std::string bad;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string a = run_cli(commands[i], base / ("a" + std::to_string(i)));
    std::string b = run_cli(commands[i], base / ("b" + std::to_string(i)));
    // Output paths differ between the runs by construction; compare with them removed.
    auto strip = [&](std::string s, const std::string& d) {
      for (std::size_t pos; (pos = s.find(d)) != std::string::npos;) s.erase(pos, d.size());
      return s;
    };
    a = strip(a, (base / ("a" + std::to_string(i))).string());
    b = strip(b, (base / ("b" + std::to_string(i))).string());
    if (a.rfind("status 0\n", 0) != 0) {
      ++nonzero;
      bad += " [" + commands[i] + "]";
    }
    if (a == b) ++same;
  }
  std::filesystem::remove_all(base);
  return {same == commands.size() && nonzero == 0,
          std::to_string(same) + "/" + std::to_string(commands.size()) +
              " commands byte-identical over two runs (stdout and written files)" +
              (nonzero ? ", failing commands:" + bad : "")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"flow oracle equivalence", flow_oracle},
      {"extended field and singular points", extended_field},
      {"chart round trip", chart_round_trip},
      {"collision map laws", collision_laws},
      {"unfolding equivalence", unfolding_equivalence},
      {"spherical periodicity", spherical_periodicity},
      {"conjugated vertices", conjugated},
      {"expansiveness witnesses", expansiveness},
      {"topology", topology},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::printf("%s %2zu %s: %s [%.2f s]\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                r.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
