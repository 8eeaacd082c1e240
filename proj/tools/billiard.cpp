// Command-line front end: one subcommand per analysis.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "billiards/builtins.hpp"
#include "billiards/collision.hpp"
#include "billiards/expansivity.hpp"
#include "billiards/flow.hpp"
#include "billiards/spec_io.hpp"
#include "billiards/topology.hpp"
#include "billiards/unfolding.hpp"

using namespace billiards;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string spec;
  std::string builtin;
  double theta{1.0};
  std::uint64_t seed{1};
  std::string format{"text"};
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  auto* spec = cmd->add_option("--spec", c.spec, "Polygon file");
  auto* builtin = cmd->add_option("--builtin", c.builtin, "Named table")
                      ->check(CLI::IsMember({"square", "hyperbolic-pentagon", "sphere-triangle", "annulus"}));
  spec->excludes(builtin);
  cmd->add_option("--theta", c.theta, "Angle of the sphere-triangle table (radians)");
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--out", c.out, "Output directory (default: $BILLIARD_OUT_DIR or .)");
}

Polygon table(const Common& c) {
  if (!c.spec.empty()) return load_polygon(c.spec);
  if (!c.builtin.empty()) return builtin_polygon(c.builtin, c.theta);
  throw Error("give --spec FILE or --builtin NAME");
}

std::filesystem::path out_dir(const Common& c) {
  std::string d = c.out;
  if (d.empty())
    if (const char* env = std::getenv("BILLIARD_OUT_DIR")) d = env;
  if (d.empty()) d = ".";
  std::filesystem::create_directories(d);
  return d;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string g10(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw FileError("cannot write '" + p.string() + "'");
  f << text;
}

json state_json(const BoundaryState& b) { return {{"side", b.side}, {"s", b.s}, {"psi", b.psi}}; }

json holonomy_json(const Holonomy& h) {
  return {{"kind", to_string(h.kind)},
          {"orientation_preserving", h.orientation_preserving},
          {"angle", h.angle},
          {"translation", h.translation}};
}

std::string holonomy_text(const Holonomy& h) {
  std::string s = to_string(h.kind);
  if (h.angle != 0) s += ", angle " + g10(h.angle);
  if (h.translation != 0) s += ", length " + g10(h.translation);
  return s;
}

json orbit_json(const PeriodicOrbitReport& o) {
  return {{"start", state_json(o.start)}, {"bounces", o.bounces}, {"period", o.period},
          {"length", o.length},           {"holonomy", holonomy_json(o.holonomy)}, {"residual", o.residual}};
}

std::string orbit_text(const PeriodicOrbitReport& o) {
  return "period " + std::to_string(o.period) + " bounces " + join(o.bounces) + " from side " +
         std::to_string(o.start.side) + " s=" + g10(o.start.s) + " psi=" + g10(o.start.psi) + " length " +
         g10(o.length) + " holonomy " + holonomy_text(o.holonomy) + " residual " + g10(o.residual);
}

json diagonal_json(const Diagonal& d) {
  return {{"start_vertex", d.start_vertex}, {"end_vertex", d.end_vertex}, {"bounces", d.bounces},
          {"length", d.length},             {"angle", d.angle},           {"residual", d.residual}};
}

std::string diagonal_text(const Diagonal& d) {
  return "V" + std::to_string(d.start_vertex) + " -> V" + std::to_string(d.end_vertex) + " bounces [" +
         join(d.bounces) + "] length " + g10(d.length) + " angle " + g10(d.angle) + " residual " + g10(d.residual);
}

void emit(const Common& c, const json& j, const std::string& text) {
  if (c.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
  int side{0};
  double s{0}, psi{0};
  std::size_t bounces{100};
  int vertex{0};
  double r{0}, gamma{0}, beta{0}, time{1}, dt{0};
};

int run_simulate(const Common& c, const SimulateArgs& a) {
  Polygon poly = table(c);
  const auto dir = out_dir(c);
  if (a.vertex != 0) {
    if (a.vertex < 1 || static_cast<std::size_t>(a.vertex) > poly.size())
      throw Error("--vertex must be in 1.." + std::to_string(poly.size()));
    const std::size_t v = static_cast<std::size_t>(a.vertex - 1);
    const double theta = poly.angle(v);
    IntegrationOptions opts;
    opts.eps = poly.vertex_neighborhood_radius(v);
    opts.sample_dt = a.dt > 0 ? a.dt : a.time / 100;
    ChartState s0{a.r, a.gamma, a.beta};
    Trajectory tr = integrate(field_chart_forward(s0, theta, poly.curvature()), a.time, theta, poly.curvature(), opts);
    std::ostringstream rec;
    write_trajectory(rec, tr);
    const auto path = dir / "trajectory.txt";
    write_file(path, rec.str());
    json j{{"mode", "chart"},      {"vertex", a.vertex},        {"theta", theta},
           {"radius", opts.eps},   {"samples", tr.points.size()}, {"exited", tr.exited},
           {"exit_time", tr.exited ? json(tr.exit_time) : json(nullptr)}, {"records", path.string()}};
    std::string text = "chart flow at V" + std::to_string(a.vertex) + " (angle " + g10(theta) + ", radius " +
                       g10(opts.eps) + ")\n" + std::to_string(tr.points.size()) + " samples written to " +
                       path.string() + "\n" +
                       (tr.exited ? "left the chart at t=" + g17(tr.exit_time) : "stayed in the chart") + "\n";
    emit(c, j, text);
    return 0;
  }

  BoundaryState cur{a.side, a.s, a.psi};
  check_state(poly, cur);
  std::ostringstream rec;
  std::vector<int> labels{cur.side};
  rec << 0 << ' ' << cur.side << ' ' << g17(cur.s) << ' ' << g17(cur.psi) << ' ' << 0 << '\n';
  std::string end = "horizon";
  int vertex = 0;
  double total = 0;
  for (std::size_t n = 1; n <= a.bounces; ++n) {
    Flight<double> f;
    try {
      f = collision_step(cur, poly);
    } catch (const DegenerateStateError&) {
      end = "grazing";
      break;
    }
    total += f.length;
    if (f.hit_vertex()) {
      end = "vertex_hit";
      vertex = f.vertex;
      break;
    }
    cur = f.next;
    labels.push_back(cur.side);
    rec << n << ' ' << cur.side << ' ' << g17(cur.s) << ' ' << g17(cur.psi) << ' ' << g17(f.length) << '\n';
  }
  const auto path = dir / "trajectory.txt";
  write_file(path, rec.str());
  const std::string itin = join(labels) + ";" + end;
  write_file(dir / "itinerary.txt", itin + "\n");
  json j{{"mode", "boundary"}, {"itinerary", labels}, {"termination", end},
         {"vertex", vertex ? json(vertex) : json(nullptr)}, {"length", total}, {"records", path.string()}};
  std::string text = "itinerary: " + itin + "\n";
  if (vertex) text += "terminated at vertex V" + std::to_string(vertex) + " after length " + g10(total) + "\n";
  text += "records: " + path.string() + "\n";
  emit(c, j, text);
  return 0;
}

// ---- unfold -------------------------------------------------------------

int run_unfold(const Common& c, const SimulateArgs& a, bool no_copies) {
  Polygon poly = table(c);
  BoundaryState b{a.side, a.s, a.psi};
  UnfoldingChain chain = unfold(b, poly, a.bounces);
  SvgOptions so;
  so.draw_copies = !no_copies;
  const auto path = out_dir(c) / "unfolding.svg";
  write_file(path, unfolding_svg(poly, chain, so));
  Holonomy h = holonomy(chain, poly.curvature());
  double res = unfolded_geodesic_residual(poly.curvature(), chain.points);
  json j{{"labels", chain.labels}, {"copies", chain.copies.size()}, {"truncated", chain.truncated},
         {"vertex", chain.vertex ? json(chain.vertex) : json(nullptr)}, {"holonomy", holonomy_json(h)},
         {"geodesic_residual", res}, {"svg", path.string()}};
  std::string text = "sides crossed: " + join(chain.labels) + "\ncopies: " + std::to_string(chain.copies.size()) +
                     (chain.truncated ? " (stopped at vertex V" + std::to_string(chain.vertex) + ")" : "") +
                     "\nholonomy: " + holonomy_text(h) + "\ngeodesic residual: " + g10(res) + "\nsvg: " +
                     path.string() + "\n";
  emit(c, j, text);
  return 0;
}

// ---- periodic -----------------------------------------------------------

int run_periodic(const Common& c, std::size_t samples, std::size_t bounces) {
  Polygon poly = table(c);
  PeriodicSearch opts;
  opts.samples = samples;
  opts.max_bounces = bounces;
  opts.seed = c.seed;
  auto found = find_periodic(poly, opts);
  const std::string budget = std::to_string(samples) + " samples x " + std::to_string(bounces) +
                             " bounces, seed " + std::to_string(c.seed);
  json j{{"budget", {{"samples", samples}, {"bounces", bounces}, {"seed", c.seed}}}, {"orbits", json::array()}};
  std::string text;
  for (const auto& o : found) {
    j["orbits"].push_back(orbit_json(o));
    text += orbit_text(o) + "\n";
  }
  if (found.empty()) text = "none found (budget: " + budget + ")\n";
  emit(c, j, text);
  return 0;
}

// ---- diagonals / conjugate ----------------------------------------------

int run_diagonals(const Common& c, std::size_t depth, double length, std::size_t angles, bool conjugate) {
  Polygon poly = table(c);
  DiagonalSearch ds;
  ds.angles_per_vertex = angles;
  if (length <= 0) length = 2 * num::pi<double>() + 1e-6;
  json j{{"budget", {{"bounces", depth}, {"length", length}, {"angles", angles}}}};
  std::string text;
  if (conjugate) {
    auto pairs = conjugated_vertices(poly, depth, length, ds);
    j["pairs"] = json::array();
    for (const auto& p : pairs) {
      j["pairs"].push_back({{"first_vertex", p.first_vertex}, {"second_vertex", p.second_vertex},
                            {"multiple", p.multiple}, {"diagonal", diagonal_json(p.diagonal)}});
      text += "V" + std::to_string(p.first_vertex) + " ~ V" + std::to_string(p.second_vertex) + " (length " +
              std::to_string(p.multiple) + " pi): " + diagonal_text(p.diagonal) + "\n";
    }
    if (pairs.empty()) text = "no conjugated vertices found\n";
  } else {
    auto ds_found = generalized_diagonals(poly, depth, length, ds);
    j["diagonals"] = json::array();
    for (const auto& d : ds_found) {
      j["diagonals"].push_back(diagonal_json(d));
      text += diagonal_text(d) + "\n";
    }
    if (ds_found.empty()) text = "no diagonals found\n";
  }
  emit(c, j, text);
  return 0;
}

// ---- expansivity --------------------------------------------------------

int run_expansivity(const Common& c, ClassifyBudget budget) {
  Polygon poly = table(c);
  budget.seed = c.seed;
  ExpansivenessVerdict v = classify(poly, budget);
  json j{{"verdict", to_string(v.verdict)}, {"rule", to_string(v.rule)}, {"reason", describe(v.rule)},
         {"witnesses", json::array()}};
  for (const auto& w : v.witnesses) {
    json wj{{"kind", to_string(w.kind)}, {"rule", to_string(w.rule)}, {"verified", verify_witness(w, poly)}};
    if (w.orbit) wj["orbit"] = orbit_json(*w.orbit);
    if (w.pair)
      wj["pair"] = {{"a", state_json(w.pair->a)},
                    {"b", state_json(w.pair->b)},
                    {"horizon", w.pair->horizon},
                    {"compared", w.pair->compared},
                    {"outcome", w.pair->outcome == PairOutcome::itineraries_agree ? "itineraries_agree"
                                                                                   : "itineraries_diverge"}};
    if (w.conjugacy)
      wj["conjugacy"] = {{"first_vertex", w.conjugacy->first_vertex},
                         {"second_vertex", w.conjugacy->second_vertex},
                         {"multiple", w.conjugacy->multiple},
                         {"diagonal", diagonal_json(w.conjugacy->diagonal)}};
    if (w.neighborhood) wj["neighborhood_periodic"] = w.neighborhood->all_periodic;
    j["witnesses"].push_back(wj);
  }
  emit(c, j, format_verdict(v));
  return 0;
}

// ---- topology -----------------------------------------------------------

int run_topology(const Common& c) {
  Polygon poly = table(c);
  GroupPresentation p = pi1_presentation(poly);
  json j{{"boundary_components", poly.boundary_components()},
         {"vertices", p.vertices},
         {"genus", p.genus},
         {"euler_characteristic", p.euler_characteristic},
         {"exponent", p.exponent},
         {"generators", p.generators},
         {"relations", p.relations},
         {"class", to_string(p.classification)},
         {"order", p.order},
         {"growth", to_string(growth_class(p))},
         {"summary", summary(p)}};
  std::string text = summary(p) + "\npresentation: " + presentation_text(p) + "\ngenus " + std::to_string(p.genus) +
                     ", euler characteristic " + std::to_string(p.euler_characteristic) + ", vertices " +
                     std::to_string(p.vertices) + ", growth " + to_string(growth_class(p)) + "\n";
  emit(c, j, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Billiards in polygons of constant curvature"};
  app.require_subcommand(1);

  Common common;
  SimulateArgs sim;
  bool no_copies = false;
  std::size_t samples = 10000, bounces = 50, depth = 20, angles = 10000;
  double length = 0;
  ClassifyBudget budget;

  auto boundary_flags = [&](CLI::App* cmd, bool required) {
    auto* side = cmd->add_option("--side", sim.side, "Side label (1-based)");
    cmd->add_option("--s", sim.s, "Arc-length position on the side");
    cmd->add_option("--psi", sim.psi, "Angle from the side tangent, in (0, pi)");
    cmd->add_option("--bounces", sim.bounces, "Number of bounces");
    if (required) side->required();
    return side;
  };

  auto* simulate = app.add_subcommand("simulate", "Follow a trajectory; writes trajectory.txt");
  add_common(simulate, common);
  auto* side_opt = boundary_flags(simulate, false);
  auto* vertex_opt = simulate->add_option("--vertex", sim.vertex, "Chart vertex label; selects the chart flow");
  simulate->add_option("--r", sim.r, "Chart radius");
  simulate->add_option("--gamma", sim.gamma, "Chart angle around the vertex");
  simulate->add_option("--beta", sim.beta, "Chart direction angle");
  simulate->add_option("--time", sim.time, "Chart flow duration");
  simulate->add_option("--dt", sim.dt, "Chart sampling interval (default time/100)");
  side_opt->excludes(vertex_opt);

  auto* unfold_cmd = app.add_subcommand("unfold", "Unfold a trajectory; writes unfolding.svg");
  add_common(unfold_cmd, common);
  boundary_flags(unfold_cmd, true);
  unfold_cmd->add_flag("--no-copies", no_copies, "Draw only the base table and the trajectory");

  auto* periodic = app.add_subcommand("periodic", "Search for periodic orbits");
  add_common(periodic, common);
  periodic->add_option("--samples", samples, "Initial conditions sampled");
  periodic->add_option("--bounces", bounces, "Largest period tried");

  auto* diagonals = app.add_subcommand("diagonals", "Vertex-to-vertex trajectories");
  auto* conjugate = app.add_subcommand("conjugate", "Vertices joined by a diagonal of length a multiple of pi");
  for (auto* cmd : {diagonals, conjugate}) {
    add_common(cmd, common);
    cmd->add_option("--bounces", depth, "Bounces allowed along a diagonal");
    cmd->add_option("--length", length, "Largest length (default 2 pi)");
    cmd->add_option("--angles", angles, "Launch angles per vertex");
  }

  auto* expansivity = app.add_subcommand("expansivity", "Classify the billiard flow as expansive or not");
  add_common(expansivity, common);
  expansivity->add_option("--samples", budget.samples, "Periodic-search samples");
  expansivity->add_option("--bounces", budget.periodic_bounces, "Periodic-search period bound");
  expansivity->add_option("--horizon", budget.horizon, "Bounces compared for nearby pairs");
  expansivity->add_option("--angles", budget.diagonal_angles, "Diagonal-search launch angles per vertex");

  auto* topology = app.add_subcommand("topology", "Fundamental group of the phase space");
  add_common(topology, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      if (!*vertex_opt && sim.side == 0) throw Error("give --side/--s/--psi or --vertex/--r/--gamma/--beta");
      return run_simulate(common, sim);
    }
    if (*unfold_cmd) return run_unfold(common, sim, no_copies);
    if (*periodic) return run_periodic(common, samples, bounces);
    if (*diagonals) return run_diagonals(common, depth, length, angles, false);
    if (*conjugate) return run_diagonals(common, depth, length, angles, true);
    if (*expansivity) return run_expansivity(common, budget);
    if (*topology) return run_topology(common);
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
