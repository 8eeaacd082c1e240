#include "billiards/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

namespace billiards {

namespace {

constexpr double pi = std::numbers::pi;

void check_theta(double theta) {
  if (!(theta > 0)) throw DomainError("vertex angle must be positive");
}

double sn(Curvature k, double t) { return Space<double>(k).sn(t); }
double cs(Curvature k, double t) { return Space<double>(k).cs(t); }

/// Inverse of sn_k on the chart range.
double asn(Curvature k, double v) {
  switch (k) {
    case Curvature::spherical:
      if (v > 1) throw DomainError("field-chart radius exceeds 1 on the sphere");
      return std::asin(v);
    case Curvature::hyperbolic: return std::asinh(v);
    case Curvature::flat: break;
  }
  return v;
}

struct PolarState {
  double r, dgamma, beta;
};

// Exact transport of a chart state; see closed_form_flow.
PolarState transport(const ChartState& s0, double t, Curvature k) {
  const double sb = std::sin(s0.beta), cb = std::cos(s0.beta);
  const double A = sn(k, s0.r) * sb;
  const double B = cs(k, s0.r) * sn(k, t) + sn(k, s0.r) * cs(k, t) * cb;
  PolarState out{};
  const double h = std::hypot(A, B);
  switch (k) {
    case Curvature::flat: out.r = h; break;
    case Curvature::hyperbolic: out.r = std::asinh(h); break;
    case Curvature::spherical:
      out.r = std::atan2(h, std::cos(s0.r) * std::cos(t) - std::sin(s0.r) * std::sin(t) * cb);
      break;
  }
  out.beta = std::atan2(A, B);
  if (sb < 0 && out.beta < 0) out.beta += 2 * pi;

  if (k != Curvature::spherical) {
    out.dgamma = std::atan2(sb * sn(k, t), sn(k, s0.r) * cs(k, t) + cs(k, s0.r) * sn(k, t) * cb);
    return out;
  }
  // On the sphere the angle keeps turning: one full turn per 2 pi of time.
  const double turns = std::floor(t / (2 * pi));
  const double tm = t - 2 * pi * turns;
  double g = std::atan2(sb * std::sin(tm), std::sin(s0.r) * std::cos(tm) + std::cos(s0.r) * std::sin(tm) * cb);
  const double dir = sb > 0 ? 1.0 : (sb < 0 ? -1.0 : 0.0);
  if (tm > pi) {
    if (dir > 0 && g < 0) g += 2 * pi;
    if (dir < 0 && g > 0) g -= 2 * pi;
  }
  out.dgamma = g + 2 * pi * turns * dir;
  return out;
}

double smooth_h(double u) { return u > 0 ? std::exp(-1 / u) : 0.0; }

template <class State, class System, class Stop, class Record>
void run_dopri(System sys, State x, double T, const IntegrationOptions& opts, Stop outside, Record record,
               bool& exited, double& exit_time) {
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
  exited = false;
  exit_time = 0;
  record(0.0, x);
  if (T <= 0) return;
  stepper.initialize(x, 0.0, std::min(opts.initial_step, T));
  double next_sample = opts.sample_dt;
  State tmp;
  while (true) {
    auto [t0, t1] = stepper.do_step(sys);
    const double end = std::min(t1, T);
    stepper.calc_state(end, tmp);
    if (outside(tmp)) {
      // Locate the exit on the dense-output interpolant.
      double lo = t0, hi = end;
      for (int i = 0; i < 80 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
        double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, tmp);
        (outside(tmp) ? hi : lo) = mid;
      }
      if (opts.sample_dt > 0)
        for (; next_sample < hi; next_sample += opts.sample_dt) {
          stepper.calc_state(next_sample, tmp);
          record(next_sample, tmp);
        }
      stepper.calc_state(hi, tmp);
      record(hi, tmp);
      exited = true;
      exit_time = hi;
      return;
    }
    if (opts.sample_dt > 0) {
      for (; next_sample < end; next_sample += opts.sample_dt) {
        stepper.calc_state(next_sample, tmp);
        record(next_sample, tmp);
      }
      if (end >= T) {
        stepper.calc_state(T, tmp);
        record(T, tmp);
      }
    } else {
      record(end, tmp);
    }
    if (end >= T) return;
  }
}

void put(std::ostream& os, std::initializer_list<double> v) {
  char buf[32];
  bool first = true;
  for (double d : v) {
    std::snprintf(buf, sizeof buf, "%.17g", d);
    if (!first) os << ' ';
    os << buf;
    first = false;
  }
  os << '\n';
}

}  // namespace

CartesianChartState chart_forward(const ChartState& s, double theta) {
  check_theta(theta);
  const double a = s.gamma * pi / theta;
  return {s.r * std::cos(a), s.r * std::sin(a), s.beta};
}

ChartState chart_inverse(const CartesianChartState& c, double theta) {
  check_theta(theta);
  const double r = std::hypot(c.x, c.y);
  const double a = r > 0 ? num::wrap(std::atan2(c.y, c.x), 2 * pi) : 0.0;
  return {r, a * theta / pi, num::wrap(c.z, 2 * pi)};
}

CartesianChartState field_chart_forward(const ChartState& s, double theta, Curvature k) {
  CartesianChartState c = chart_forward({sn(k, s.r), s.gamma, s.beta}, theta);
  return c;
}

ChartState field_chart_inverse(const CartesianChartState& c, double theta, Curvature k) {
  ChartState s = chart_inverse(c, theta);
  s.r = asn(k, s.r);
  return s;
}

FieldValue velocity_field_X(const ChartState& s, Curvature k) {
  if (!(s.r > 0)) throw DomainError("velocity field X is singular at r = 0; use the extended field Z");
  const double sb = std::sin(s.beta);
  const double q = sn(k, s.r);
  return {std::cos(s.beta), sb / q, -cs(k, s.r) * sb / q};
}

ChartState closed_form_flow(const ChartState& s0, double t, Curvature k, double eps) {
  if (!(s0.r >= 0)) throw DomainError("negative chart radius");
  if (std::isfinite(eps)) {
    if (!(s0.r < eps)) throw DomainError("initial state lies outside the chart");
    if (transport(s0, t, k).r >= eps) {
      // r is 1-Lipschitz in t, so stepping by eps - r never jumps over the exit.
      double tau = 0;
      for (int i = 0; i < 100000; ++i) {
        double gap = eps - transport(s0, tau, k).r;
        if (gap < 1e-14) break;
        tau += gap;
      }
      throw ChartExitError("orbit leaves the vertex chart at t = " + std::to_string(tau), tau);
    }
  }
  PolarState p = transport(s0, t, k);
  return {p.r, s0.gamma + p.dgamma, p.beta};
}

FieldValue extended_field_Z(const CartesianChartState& c, double theta, Curvature k) {
  check_theta(theta);
  const double rho2 = c.x * c.x + c.y * c.y;
  const double q = 1 - sign_of(k) * rho2;
  if (!(q > 0)) throw DomainError("extended field Z is undefined off the unit disc on the sphere");
  const double f = std::sqrt(q);
  const double a = pi / theta;
  const double cz = std::cos(c.z), sz = std::sin(c.z);
  return {f * c.x * cz - a * c.y * sz, f * c.y * cz + a * c.x * sz, -f * sz};
}

double reparameterization_rho(double r, Curvature k, double eps) {
  if (!(eps > 0)) throw DomainError("chart radius must be positive");
  if (r >= eps) return 1.0;
  const double local = sn(k, r);
  if (r <= eps / 2) return local;
  const double u = (r - eps / 2) / (eps / 2);
  const double b = smooth_h(u) / (smooth_h(u) + smooth_h(1 - u));
  return (1 - b) * local + b;
}

Trajectory integrate(const CartesianChartState& c0, double T, double theta, Curvature k,
                     const IntegrationOptions& opts) {
  check_theta(theta);
  using State = std::array<double, 4>;
  auto sys = [&](const State& x, State& dx, double) {
    FieldValue z = extended_field_Z({x[0], x[1], x[2]}, theta, k);
    dx = {z.d0, z.d1, z.d2, std::hypot(x[0], x[1])};
  };
  auto outside = [&](const State& x) { return std::hypot(x[0], x[1]) >= opts.eps; };
  Trajectory tr;
  auto record = [&](double t, const State& x) { tr.points.push_back({t, {x[0], x[1], x[2]}, x[3]}); };
  run_dopri(sys, State{c0.x, c0.y, c0.z, 0.0}, T, opts, outside, record, tr.exited, tr.exit_time);
  return tr;
}

std::vector<ChartTrajectoryPoint> integrate_velocity_field(const ChartState& s0, double T, Curvature k,
                                                           const IntegrationOptions& opts) {
  using State = std::array<double, 3>;
  auto sys = [&](const State& x, State& dx, double) {
    FieldValue v = velocity_field_X({x[0], x[1], x[2]}, k);
    dx = {v.d0, v.d1, v.d2};
  };
  auto outside = [&](const State& x) { return x[0] >= opts.eps; };
  std::vector<ChartTrajectoryPoint> out;
  auto record = [&](double t, const State& x) { out.push_back({t, {x[0], x[1], x[2]}}); };
  bool exited = false;
  double exit_time = 0;
  run_dopri(sys, State{s0.r, s0.gamma, s0.beta}, T, opts, outside, record, exited, exit_time);
  if (exited) throw ChartExitError("orbit leaves the vertex chart at t = " + std::to_string(exit_time), exit_time);
  return out;
}

Matrix3 jacobian_Z(const CartesianChartState& c, double theta, Curvature k) {
  check_theta(theta);
  const double kk = sign_of(k);
  const double q = 1 - kk * (c.x * c.x + c.y * c.y);
  if (!(q > 0)) throw DomainError("extended field Z is undefined off the unit disc on the sphere");
  const double f = std::sqrt(q);
  const double fx = -kk * c.x / f, fy = -kk * c.y / f;
  const double a = pi / theta;
  const double cz = std::cos(c.z), sz = std::sin(c.z);
  Matrix3 J{};
  J[0] = {f * cz + c.x * cz * fx, c.x * cz * fy - a * sz, -f * c.x * sz - a * c.y * cz};
  J[1] = {c.y * cz * fx + a * sz, f * cz + c.y * cz * fy, -f * c.y * sz + a * c.x * cz};
  J[2] = {-sz * fx, -sz * fy, -f * cz};
  return J;
}

Matrix3 jacobian_Z_numeric(const CartesianChartState& c, double theta, Curvature k, double h) {
  Matrix3 J{};
  for (int j = 0; j < 3; ++j) {
    CartesianChartState p = c, m = c;
    double* pp = j == 0 ? &p.x : (j == 1 ? &p.y : &p.z);
    double* mm = j == 0 ? &m.x : (j == 1 ? &m.y : &m.z);
    *pp += h;
    *mm -= h;
    FieldValue a = extended_field_Z(p, theta, k), b = extended_field_Z(m, theta, k);
    J[0][j] = (a.d0 - b.d0) / (2 * h);
    J[1][j] = (a.d1 - b.d1) / (2 * h);
    J[2][j] = (a.d2 - b.d2) / (2 * h);
  }
  return J;
}

std::array<std::complex<double>, 3> eigenvalues(const Matrix3& m) {
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = m[i][j];
  Eigen::EigenSolver<Eigen::Matrix3d> es(M, false);
  std::array<std::complex<double>, 3> ev;
  for (int i = 0; i < 3; ++i) ev[i] = es.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return ev;
}

SingularityAnalysis singularity_jacobian(double z0, double theta, Curvature k) {
  if (!(std::abs(z0) < 1e-12 || std::abs(z0 - pi) < 1e-12))
    throw DomainError("singular points of Z sit at z = 0 and z = pi");
  SingularityAnalysis out;
  out.jacobian = jacobian_Z({0, 0, z0}, theta, k);
  out.eigenvalues = eigenvalues(out.jacobian);
  for (const auto& e : out.eigenvalues) {
    if (e.real() > 0) ++out.unstable_dimension;
    if (e.real() < 0) ++out.stable_dimension;
  }
  return out;
}

ChartTangent chart_to_tangent(const Space<double>& sp, const Vec3<double>& p, const Vec3<double>& e,
                              double theta, const ChartState& s) {
  check_theta(theta);
  double g = num::wrap(s.gamma, 2 * theta);
  double beta = s.beta;
  ChartTangent out;
  if (g > theta) {
    out.sheet = Sheet::bottom;
    g = 2 * theta - g;
    beta = -beta;
  }
  BasicGeodesic<double> ray{{p, sp.rotate(p, e, g)}};
  BasicTangent<double> at = sp.geodesic_at(ray, s.r);
  out.tangent = {at.base, sp.rotate(at.base, at.dir, beta)};
  return out;
}

ChartState tangent_to_chart(const Space<double>& sp, const Vec3<double>& p, const Vec3<double>& e,
                            double theta, const ChartTangent& t) {
  check_theta(theta);
  const Vec3<double>& x = t.tangent.base;
  ChartState s;
  s.r = sp.distance(p, x);
  double g = 0, beta = 0;
  if (s.r < 1e-15) {
    beta = sp.oriented_angle(p, e, t.tangent.dir);
  } else {
    g = num::wrap(sp.oriented_angle(p, e, sp.log_direction(p, x)), 2 * pi);
    Vec3<double> radial = sp.geodesic_at(sp.geodesic_through(p, x), s.r).dir;
    beta = sp.oriented_angle(x, radial, t.tangent.dir);
  }
  if (t.sheet == Sheet::bottom) {
    g = 2 * theta - g;
    beta = -beta;
  }
  s.gamma = g;
  s.beta = num::wrap(beta, 2 * pi);
  return s;
}

ChartTangent chart_to_tangent(const Polygon& poly, std::size_t vertex, const ChartState& s) {
  return chart_to_tangent(poly.space(), poly.vertex(vertex), poly.side(vertex).geodesic.start.dir,
                          poly.angle(vertex), s);
}

ChartState tangent_to_chart(const Polygon& poly, std::size_t vertex, const ChartTangent& t) {
  return tangent_to_chart(poly.space(), poly.vertex(vertex), poly.side(vertex).geodesic.start.dir,
                          poly.angle(vertex), t);
}

void write_trajectory(std::ostream& os, const Trajectory& tr) {
  for (const auto& p : tr.points) put(os, {p.t, p.c.x, p.c.y, p.c.z});
}

void write_trajectory(std::ostream& os, const std::vector<ChartTrajectoryPoint>& tr) {
  for (const auto& p : tr) put(os, {p.t, p.s.r, p.s.gamma, p.s.beta});
}

}  // namespace billiards
