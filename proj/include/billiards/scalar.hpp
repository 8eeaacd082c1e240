#pragma once

// Scalar math shims so the geometry kernel can be instantiated both in double
// and in quad precision (__float128 via libquadmath).

#include <cmath>
#include <quadmath.h>

namespace billiards {

using Quad = __float128;

namespace num {

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double cosh(double x) { return std::cosh(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double asin(double x) { return std::asin(x); }
inline double acos(double x) { return std::acos(x); }
inline double atan(double x) { return std::atan(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }
inline double asinh(double x) { return std::asinh(x); }
inline double acosh(double x) { return std::acosh(x); }
inline double atanh(double x) { return std::atanh(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double abs(double x) { return std::fabs(x); }
inline double floor(double x) { return std::floor(x); }
inline double round(double x) { return std::round(x); }
inline double hypot(double x, double y) { return std::hypot(x, y); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }

inline Quad sin(Quad x) { return sinq(x); }
inline Quad cos(Quad x) { return cosq(x); }
inline Quad tan(Quad x) { return tanq(x); }
inline Quad sinh(Quad x) { return sinhq(x); }
inline Quad cosh(Quad x) { return coshq(x); }
inline Quad tanh(Quad x) { return tanhq(x); }
inline Quad asin(Quad x) { return asinq(x); }
inline Quad acos(Quad x) { return acosq(x); }
inline Quad atan(Quad x) { return atanq(x); }
inline Quad atan2(Quad y, Quad x) { return atan2q(y, x); }
inline Quad asinh(Quad x) { return asinhq(x); }
inline Quad acosh(Quad x) { return acoshq(x); }
inline Quad atanh(Quad x) { return atanhq(x); }
inline Quad sqrt(Quad x) { return sqrtq(x); }
inline Quad abs(Quad x) { return fabsq(x); }
inline Quad floor(Quad x) { return floorq(x); }
inline Quad round(Quad x) { return roundq(x); }
inline Quad hypot(Quad x, Quad y) { return hypotq(x, y); }
inline Quad exp(Quad x) { return expq(x); }
inline Quad log(Quad x) { return logq(x); }

template <class Real>
constexpr Real pi() {
  if constexpr (sizeof(Real) > sizeof(double)) {
    return M_PIq;
  } else {
    return Real(3.14159265358979323846);
  }
}

template <class Real>
Real clamp(Real x, Real lo, Real hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

/// Reduce an angle into [0, period).
template <class Real>
Real wrap(Real x, Real period) {
  Real r = x - period * num::floor(x / period);
  return r >= period ? Real(0) : r;
}

}  // namespace num
}  // namespace billiards
