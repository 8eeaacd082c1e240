#pragma once
/**
 * Billiard flow near a vertex.
 *
 * Chart coordinates (r, gamma, beta): r is the distance to the vertex, gamma
 * the angular position measured from the vertex's outgoing side (taken mod
 * 2 theta on the doubled surface), beta the direction of motion measured
 * counterclockwise from the outgoing radial direction.
 *
 * Two Cartesian charts are provided. chart_forward uses r itself as the
 * radial coordinate. field_chart_forward uses sn_k(r) (sinh r, r, sin r); in
 * that chart the extended field Z is exactly the push-forward of rho X with
 * rho = sn_k(r). Both coincide for k = 0.
 */

#include <array>
#include <complex>
#include <iosfwd>
#include <limits>
#include <vector>

#include "billiards/geometry.hpp"
#include "billiards/polygon.hpp"

namespace billiards {

struct ChartState {
  double r{0};
  double gamma{0};
  double beta{0};
};

struct CartesianChartState {
  double x{0};
  double y{0};
  double z{0};
};

/// Time derivative of a chart state (either chart).
struct FieldValue {
  double d0{0};
  double d1{0};
  double d2{0};
};

CartesianChartState chart_forward(const ChartState& s, double theta);
ChartState chart_inverse(const CartesianChartState& c, double theta);

CartesianChartState field_chart_forward(const ChartState& s, double theta, Curvature k);
ChartState field_chart_inverse(const CartesianChartState& c, double theta, Curvature k);

/// (dr, dgamma, dbeta) of the unit-speed geodesic flow. Throws DomainError at r = 0.
FieldValue velocity_field_X(const ChartState& s, Curvature k);

/**
 * Exact chart state after time t along the geodesic. gamma is returned
 * unreduced so that it varies continuously in t. When `eps` is finite and
 * the orbit leaves the disc r < eps before time t, throws ChartExitError
 * carrying the exit time.
 */
ChartState closed_form_flow(const ChartState& s0, double t, Curvature k,
                            double eps = std::numeric_limits<double>::infinity());

/// Extended field Z at a field-chart state. Throws DomainError for k = +1 off the unit disc.
FieldValue extended_field_Z(const CartesianChartState& c, double theta, Curvature k);

/// Time-change factor: sn_k(r) below eps/2, 1 from eps on, smooth in between.
double reparameterization_rho(double r, Curvature k, double eps);

struct TrajectoryPoint {
  double t{0};
  CartesianChartState c;
  double tau{0};  ///< elapsed time of the unreparameterized flow
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  bool exited{false};
  double exit_time{0};
};

struct IntegrationOptions {
  double abs_tol{1e-12};
  double rel_tol{1e-10};
  double initial_step{1e-3};
  /// Chart radius in the field chart's radial coordinate; infinity disables exit checks.
  double eps{std::numeric_limits<double>::infinity()};
  /// Spacing of recorded samples; 0 records every accepted step.
  double sample_dt{0};
};

/**
 * Integrates Z from a field-chart state for time T. States on the circle
 * x = y = 0 stay there and run along -sin z. Leaving the chart stops the
 * integration at the located exit time.
 */
Trajectory integrate(const CartesianChartState& c0, double T, double theta, Curvature k,
                     const IntegrationOptions& opts = {});

struct ChartTrajectoryPoint {
  double t{0};
  ChartState s;
};

/// Integrates X in (r, gamma, beta) for time T; gamma is not reduced.
std::vector<ChartTrajectoryPoint> integrate_velocity_field(const ChartState& s0, double T, Curvature k,
                                                           const IntegrationOptions& opts = {});

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Analytic derivative of Z at a field-chart state.
Matrix3 jacobian_Z(const CartesianChartState& c, double theta, Curvature k);
/// Central-difference derivative of Z (step h).
Matrix3 jacobian_Z_numeric(const CartesianChartState& c, double theta, Curvature k, double h = 1e-6);

struct SingularityAnalysis {
  Matrix3 jacobian;
  std::array<std::complex<double>, 3> eigenvalues;  ///< sorted by real part, descending
  int unstable_dimension{0};
  int stable_dimension{0};
};

/// Linearisation of Z at (0, 0, z0) with z0 in {0, pi}.
SingularityAnalysis singularity_jacobian(double z0, double theta, Curvature k);

/// Eigenvalues of a 3x3 matrix, sorted by real part, descending.
std::array<std::complex<double>, 3> eigenvalues(const Matrix3& m);

// ---- chart <-> tangent vectors --------------------------------------------

/**
 * Unit tangent described by a chart state at vertex `p`, with gamma measured
 * from the reference direction `e` (unit tangent at p). States with gamma in
 * (theta, 2 theta) belong to the bottom sheet; they are returned mirrored
 * into [0, theta] with `sheet` set accordingly.
 */
struct ChartTangent {
  BasicTangent<double> tangent;
  Sheet sheet{Sheet::top};
};

ChartTangent chart_to_tangent(const Space<double>& sp, const Vec3<double>& p, const Vec3<double>& e,
                              double theta, const ChartState& s);
ChartState tangent_to_chart(const Space<double>& sp, const Vec3<double>& p, const Vec3<double>& e,
                            double theta, const ChartTangent& t);

/// Vertex frame of a polygon: vertex i (0-based) with its outgoing side direction.
ChartTangent chart_to_tangent(const Polygon& poly, std::size_t vertex, const ChartState& s);
ChartState tangent_to_chart(const Polygon& poly, std::size_t vertex, const ChartTangent& t);

// ---- export ---------------------------------------------------------------

/// One "t x y z" (cartesian) or "t r gamma beta" line per sample, 17 significant digits.
void write_trajectory(std::ostream& os, const Trajectory& tr);
void write_trajectory(std::ostream& os, const std::vector<ChartTrajectoryPoint>& tr);

}  // namespace billiards
