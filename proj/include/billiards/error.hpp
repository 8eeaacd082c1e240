#pragma once

#include <stdexcept>
#include <string>

namespace billiards {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input to a geometric primitive (zero vector, point off a side, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Polygon failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Boundary state too close to grazing to be shot reliably.
class DegenerateStateError : public Error {
 public:
  DegenerateStateError(const std::string& what, long index = 0)
      : Error(what), index_(index) {}
  /// Itinerary index at which the degeneracy was met.
  long index() const { return index_; }

 private:
  long index_;
};

/// Vector field evaluated where it is not defined (r = 0 for the X fields,
/// outside the unit disc for the spherical Z field).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A chart trajectory left the vertex neighbourhood before the requested time.
class ChartExitError : public Error {
 public:
  ChartExitError(const std::string& what, double exit_time)
      : Error(what), exit_time_(exit_time) {}
  double exit_time() const { return exit_time_; }

 private:
  double exit_time_;
};

/// Polygon spec file could not be parsed.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& field,
             const std::string& message)
      : Error(source + ":" + std::to_string(line) +
              (field.empty() ? "" : ": field '" + field + "'") + ": " + message),
        line_(line),
        field_(field) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace billiards
