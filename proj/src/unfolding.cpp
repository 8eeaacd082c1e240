#include "billiards/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace billiards {

namespace {

constexpr double pi = std::numbers::pi;

double clamp1(double x) { return std::max(-1.0, std::min(1.0, x)); }

// ---- return-map refinement --------------------------------------------------

struct ReturnDisplacement {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const Polygon* poly;
  int side;
  std::size_t period;

  int inputs() const { return 2; }
  int values() const { return 2; }

  int operator()(const InputType& x, ValueType& f) const {
    f.resize(2);
    f << 1.0, 1.0;  // returned whenever the orbit does not come back cleanly
    BoundaryState cur{side, x[0], x[1]};
    try {
      for (std::size_t n = 0; n < period; ++n) {
        Flight<double> fl = collision_step(cur, *poly);
        if (fl.hit_vertex()) return 0;
        cur = fl.next;
      }
    } catch (const DegenerateStateError&) {
      return 0;
    }
    if (cur.side != side) return 0;
    f << cur.s - x[0], cur.psi - x[1];
    return 0;
  }
};

struct Simulated {
  std::vector<int> labels;
  BoundaryState end;
  double length{0};
  /// Smallest distance of a bounce to a vertex (fraction of the side) or to grazing.
  double clearance{1};
  bool clean{false};
};

Simulated simulate(const Polygon& poly, const BoundaryState& b, std::size_t n) {
  Simulated out;
  BoundaryState cur = b;
  try {
    for (std::size_t i = 0; i < n; ++i) {
      Flight<double> f = collision_step(cur, poly);
      out.length += f.length;
      if (f.hit_vertex()) return out;
      cur = f.next;
      out.labels.push_back(cur.side);
      const double L = poly.side(static_cast<std::size_t>(cur.side - 1)).length;
      out.clearance = std::min({out.clearance, cur.s / L, 1 - cur.s / L, cur.psi, pi - cur.psi});
    }
  } catch (const DegenerateStateError&) {
    return out;
  }
  out.end = cur;
  out.clean = true;
  return out;
}

/// Smallest cyclic rotation of the sequence or of its reversal.
std::vector<int> canonical_cycle(const std::vector<int>& seq) {
  std::vector<int> best = seq;
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<int> s = seq;
    if (pass == 1) std::reverse(s.begin(), s.end());
    for (std::size_t r = 0; r < s.size(); ++r) {
      std::rotate(s.begin(), s.begin() + 1, s.end());
      if (s < best) best = s;
    }
  }
  return best;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string to_string(IsometryKind k) {
  switch (k) {
    case IsometryKind::identity: return "identity";
    case IsometryKind::translation: return "translation";
    case IsometryKind::rotation: return "rotation";
    case IsometryKind::parabolic: return "parabolic";
    case IsometryKind::reflection: return "reflection-type";
  }
  return "unknown";
}

Holonomy classify_isometry(const Mat3<double>& m, Curvature k, double tol) {
  Holonomy h;
  h.matrix = m;
  double off = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) off = std::max(off, std::abs(m(r, c) - (r == c ? 1.0 : 0.0)));
  if (k == Curvature::flat) {
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    h.orientation_preserving = det > 0;
    if (det > 0) {
      h.angle = std::abs(std::atan2(m(1, 0), m(0, 0)));
      h.translation = std::hypot(m(0, 2), m(1, 2));
      if (h.angle > tol)
        h.kind = IsometryKind::rotation;
      else
        h.kind = h.translation > tol ? IsometryKind::translation : IsometryKind::identity;
      if (h.kind != IsometryKind::translation) h.translation = 0;
    } else {
      // Glide component along the mirror axis.
      const double phi = std::atan2(m(1, 0), m(0, 0));
      h.translation = std::abs(m(0, 2) * std::cos(phi / 2) + m(1, 2) * std::sin(phi / 2));
      h.kind = IsometryKind::reflection;
    }
    return h;
  }
  const double det = m.det();
  const double tr = m.trace();
  h.orientation_preserving = det > 0;
  if (det < 0) {
    h.kind = IsometryKind::reflection;
    if (k == Curvature::spherical) h.angle = std::acos(clamp1((tr + 1) / 2));
    return h;
  }
  if (off < tol) return h;
  if (k == Curvature::spherical) {
    h.kind = IsometryKind::rotation;
    h.angle = std::acos(clamp1((tr - 1) / 2));
    return h;
  }
  // Hyperbolic: trace = 1 + 2 cosh(d) or 1 + 2 cos(phi).
  if (std::abs(tr - 3) < tol) {
    h.kind = IsometryKind::parabolic;
  } else if (tr > 3) {
    h.kind = IsometryKind::translation;
    h.translation = std::acosh((tr - 1) / 2);
  } else {
    h.kind = IsometryKind::rotation;
    h.angle = std::acos(clamp1((tr - 1) / 2));
  }
  return h;
}

double unfolded_geodesic_residual(Curvature k, const std::vector<Vec3<double>>& points) {
  if (points.size() < 3) return 0;
  if (k == Curvature::flat) {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (const auto& p : points) c += Eigen::Vector2d(p.x, p.y);
    c /= static_cast<double>(points.size());
    Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
    for (const auto& p : points) {
      Eigen::Vector2d d = Eigen::Vector2d(p.x, p.y) - c;
      S += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
    Eigen::Vector2d n = es.eigenvectors().col(0);
    double r = 0;
    for (const auto& p : points) r = std::max(r, std::abs(n.dot(Eigen::Vector2d(p.x, p.y) - c)));
    return r;
  }
  Eigen::Matrix3d S = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    Eigen::Vector3d v(p.x, p.y, p.z);
    S += v * v.transpose() / v.squaredNorm();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(S);
  Eigen::Vector3d n = es.eigenvectors().col(0);
  double r = 0;
  for (const auto& p : points) {
    Eigen::Vector3d v(p.x, p.y, p.z);
    r = std::max(r, std::abs(n.dot(v)) / v.norm());
  }
  return r;
}

std::vector<PeriodicOrbitReport> find_periodic(const Polygon& poly, const PeriodicSearch& opts) {
  if (opts.max_bounces == 0 || opts.samples == 0) throw Error("find_periodic: bounds must be positive");
  const std::size_t N = poly.size();
  const std::size_t per_side = (opts.samples + N - 1) / N;
  std::size_t m_psi = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(per_side))));
  if (m_psi % 2 == 0) ++m_psi;
  const std::size_t m_s = (per_side + m_psi - 1) / m_psi;

  std::mt19937_64 rng(opts.seed);
  std::map<std::vector<int>, PeriodicOrbitReport> found;
  const double tol = opts.candidate_tol;

  for (std::size_t i = 0; i < opts.samples; ++i) {
    const std::size_t j = i % N;
    const std::size_t c = i / N;
    const double jitter = uniform01(rng);
    const double L = poly.side(j).length;
    const double psi = pi * (static_cast<double>(c % m_psi) + 0.5) / static_cast<double>(m_psi);
    const double s = L * (static_cast<double>((c / m_psi) % m_s) + jitter) / static_cast<double>(m_s);
    BoundaryState b{static_cast<int>(j) + 1, std::clamp(s, 1e-6 * L, L - 1e-6 * L), psi};

    // Candidate: first near-return to the starting state.
    std::vector<int> labels;
    std::size_t period = 0;
    BoundaryState cur = b;
    try {
      for (std::size_t n = 1; n <= opts.max_bounces; ++n) {
        Flight<double> f = collision_step(cur, poly);
        if (f.hit_vertex()) break;
        cur = f.next;
        labels.push_back(cur.side);
        if (cur.side == b.side && std::abs(cur.s - b.s) < tol && std::abs(cur.psi - b.psi) < tol) {
          period = n;
          break;
        }
      }
    } catch (const DegenerateStateError&) {
      continue;
    }
    if (period == 0) continue;
    if (found.count(canonical_cycle(labels))) continue;

    // Polish on the two-dimensional return displacement.
    ReturnDisplacement fun{&poly, b.side, period};
    Eigen::NumericalDiff<ReturnDisplacement> nd(fun);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<ReturnDisplacement>, double> lm(nd);
    lm.parameters.xtol = 1e-15;
    lm.parameters.ftol = 1e-15;
    lm.parameters.maxfev = 400;
    Eigen::VectorXd x(2);
    x << b.s, b.psi;
    lm.minimize(x);
    BoundaryState refined{b.side, x[0], x[1]};
    if (!(refined.s > 0 && refined.s < L && refined.psi > kGrazingTolerance && refined.psi < pi - kGrazingTolerance))
      continue;

    Simulated sim = simulate(poly, refined, period);
    if (!sim.clean || sim.end.side != refined.side || sim.clearance < opts.min_clearance) continue;
    const double residual = std::max(std::abs(sim.end.s - refined.s), std::abs(sim.end.psi - refined.psi));
    if (!(residual < opts.verify_tol)) continue;

    UnfoldingChain chain = unfold(refined, poly, period);
    if (chain.truncated) continue;
    Holonomy hol = holonomy(chain, poly.curvature());
    if (poly.curvature() == Curvature::flat) {
      // A flat periodic orbit comes back parallel to itself.
      Vec3<double> d = boundary_tangent(poly, refined).dir;
      const auto& M = chain.copies.back().isometry;
      Vec3<double> Md{M(0, 0) * d.x + M(0, 1) * d.y, M(1, 0) * d.x + M(1, 1) * d.y, 0};
      if (std::hypot(Md.x - d.x, Md.y - d.y) > opts.verify_tol) continue;
    }
    auto key = canonical_cycle(sim.labels);
    if (found.count(key)) continue;
    PeriodicOrbitReport rep;
    rep.start = refined;
    rep.bounces = sim.labels;
    rep.period = period;
    rep.length = sim.length;
    rep.holonomy = hol;
    rep.residual = residual;
    found.emplace(std::move(key), std::move(rep));
  }
  std::vector<PeriodicOrbitReport> out;
  for (auto& [k, r] : found) out.push_back(std::move(r));
  return out;
}

bool spherical_periodicity_condition(double theta, long n, long k) {
  if (n < 1) throw DomainError("periodicity condition needs n >= 1");
  if (!(theta > 0 && theta < pi)) throw DomainError("theta must lie in (0, pi)");
  const long double lhs = 2.0L * static_cast<long double>(n) * static_cast<long double>(theta);
  const long double rhs = static_cast<long double>(k) * 3.14159265358979323846264338327950288L;
  return std::abs(lhs - rhs) <= 1e-13L * std::max(1.0L, lhs);
}

// ---- SVG --------------------------------------------------------------------

std::string unfolding_svg(const Polygon& poly, const UnfoldingChain& chain, const SvgOptions& opts) {
  const auto& sp = poly.space();
  const Curvature k = poly.curvature();
  const double W = opts.size_px;

  // Collect copies' vertex images (skipping numerically broken ones).
  std::vector<std::vector<Vec3<double>>> copies;
  for (std::size_t c = 0; c < chain.copies.size(); ++c) {
    if (c > 0 && !opts.draw_copies) break;
    std::vector<Vec3<double>> vs;
    try {
      for (const auto& v : poly.vertices()) vs.push_back(sp.normalize_point(chain.copies[c].isometry * v));
    } catch (const GeometryError&) {
      continue;
    }
    copies.push_back(std::move(vs));
  }

  // Plane bounds for k = 0; the unit disc otherwise.
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  if (k == Curvature::flat) {
    x0 = y0 = 1e300;
    x1 = y1 = -1e300;
    auto grow = [&](const Vec3<double>& p) {
      x0 = std::min(x0, p.x), x1 = std::max(x1, p.x), y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    };
    for (const auto& cp : copies)
      for (const auto& p : cp) grow(p);
    for (const auto& p : chain.points) grow(p);
  }
  const double margin = 10;
  const double scale = (W - 2 * margin) / std::max(x1 - x0, y1 - y0);
  struct Pt {
    double X, Y;
    bool visible;
  };
  auto project = [&](const Vec3<double>& p) -> Pt {
    double u = p.x, v = p.y;
    bool vis = true;
    if (k == Curvature::hyperbolic) {
      auto w = sp.to_disc(p);
      u = w[0], v = w[1];
    } else if (k == Curvature::spherical) {
      vis = p.z >= 0;
    }
    return {margin + (u - x0) * scale, W - margin - (v - y0) * scale, vis};
  };

  std::ostringstream os;
  auto polylines = [&](const Vec3<double>& a, const Vec3<double>& b, const char* style) {
    const int steps = k == Curvature::flat ? 1 : 32;
    std::vector<Pt> pts;
    if (k == Curvature::flat) {
      pts = {project(a), project(b)};
    } else {
      double d = sp.distance(a, b);
      if (!(d > 0) || !std::isfinite(d)) return;
      auto g = sp.geodesic_through(a, b);
      for (int i = 0; i <= steps; ++i) pts.push_back(project(sp.point_at(g, d * i / steps)));
    }
    std::string cur;
    auto flush = [&] {
      if (cur.find(' ') != std::string::npos) os << "<polyline points=\"" << cur << "\" " << style << "/>\n";
      cur.clear();
    };
    for (const auto& p : pts) {
      if (!p.visible || !std::isfinite(p.X) || !std::isfinite(p.Y)) {
        flush();
        continue;
      }
      if (!cur.empty()) cur += ' ';
      cur += fmt(p.X) + "," + fmt(p.Y);
    }
    flush();
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.size_px << "\" height=\"" << opts.size_px
     << "\" viewBox=\"0 0 " << opts.size_px << " " << opts.size_px << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (k != Curvature::flat)
    os << "<circle cx=\"" << fmt(W / 2) << "\" cy=\"" << fmt(W / 2) << "\" r=\"" << fmt(W / 2 - margin)
       << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  for (std::size_t c = 0; c < copies.size(); ++c) {
    const char* style = c == 0 ? "fill=\"none\" stroke=\"#000\" stroke-width=\"1.5\""
                               : "fill=\"none\" stroke=\"#999\" stroke-width=\"0.6\"";
    for (std::size_t i = 0; i < poly.size(); ++i) polylines(copies[c][i], copies[c][poly.next(i)], style);
  }
  for (std::size_t i = 0; i + 1 < chain.points.size(); ++i)
    polylines(chain.points[i], chain.points[i + 1], "fill=\"none\" stroke=\"#c00\" stroke-width=\"1.2\"");
  os << "</svg>\n";
  return os.str();
}

}  // namespace billiards
