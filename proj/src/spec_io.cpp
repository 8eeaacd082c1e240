#include "billiards/spec_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "billiards/builtins.hpp"

namespace billiards {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

struct Entry {
  int line;
  std::string value;
};

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& field, const std::string& msg) const {
    throw ParseError(source_, line, field, msg);
  }

  double number(const std::string& tok, int line, const std::string& field) const {
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail(line, field, "'" + tok + "' is not a number");
    return v;
  }

  std::vector<Vec3<double>> loop(const std::string& text, int line, const std::string& field, Curvature k) const {
    std::vector<Vec3<double>> out;
    const std::size_t dim = k == Curvature::spherical ? 3 : 2;
    for (const std::string& pt : split(text, ';')) {
      if (pt.empty()) continue;
      std::istringstream is(pt);
      std::vector<std::string> toks;
      for (std::string t; is >> t;) toks.push_back(t);
      if (toks.size() != dim)
        fail(line, field, "expected " + std::to_string(dim) + " coordinates per vertex, got '" + pt + "'");
      double x = number(toks[0], line, field), y = number(toks[1], line, field);
      switch (k) {
        case Curvature::flat: out.push_back({x, y, 1}); break;
        case Curvature::hyperbolic:
          if (!(x * x + y * y < 1)) fail(line, field, "point (" + pt + ") is not inside the unit disc");
          out.push_back(Space<double>(k).from_disc(x, y));
          break;
        case Curvature::spherical: {
          double z = number(toks[2], line, field);
          if (!(x * x + y * y + z * z > 0)) fail(line, field, "zero vector is not a point of the sphere");
          out.push_back({x, y, z});
          break;
        }
      }
    }
    if (out.size() < 3) fail(line, field, "a boundary loop needs at least 3 vertices");
    return out;
  }

  Polygon parse(const std::string& text) {
    std::map<std::string, Entry> entries;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
      ++line;
      std::string s = trim(raw.substr(0, raw.find('#')));
      if (s.empty()) continue;
      auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, "", "expected 'key = value'");
      std::string key = trim(s.substr(0, eq));
      std::string value = trim(s.substr(eq + 1));
      if (key != "curvature" && key != "model" && key != "outer" && key != "holes")
        fail(line, key, "unknown field");
      if (entries.count(key)) fail(line, key, "given twice (first on line " + std::to_string(entries[key].line) + ")");
      if (value.empty()) fail(line, key, "empty value");
      entries[key] = {line, value};
    }
    if (!entries.count("curvature")) fail(line, "curvature", "missing");
    if (!entries.count("outer")) fail(line, "outer", "missing");

    const Entry& ce = entries["curvature"];
    Curvature k;
    if (ce.value == "-1") k = Curvature::hyperbolic;
    else if (ce.value == "0") k = Curvature::flat;
    else if (ce.value == "1" || ce.value == "+1") k = Curvature::spherical;
    else fail(ce.line, "curvature", "must be -1, 0 or 1");

    if (entries.count("model")) {
      const Entry& me = entries["model"];
      const char* want = k == Curvature::flat ? "plane" : (k == Curvature::hyperbolic ? "poincare-disc" : "unit-sphere");
      if (me.value != "plane" && me.value != "poincare-disc" && me.value != "unit-sphere")
        fail(me.line, "model", "must be plane, poincare-disc or unit-sphere");
      if (me.value != want) fail(me.line, "model", "'" + me.value + "' does not match curvature " + ce.value);
    }

    std::vector<std::vector<Vec3<double>>> loops;
    const Entry& oe = entries["outer"];
    loops.push_back(loop(oe.value, oe.line, "outer", k));
    if (entries.count("holes")) {
      const Entry& he = entries["holes"];
      for (const std::string& h : split(he.value, '|')) loops.push_back(loop(h, he.line, "holes", k));
    }
    try {
      return Polygon::build(k, std::move(loops));
    } catch (const ValidationError& e) {
      throw ValidationError(source_ + ": " + e.what());
    } catch (const GeometryError& e) {
      throw ValidationError(source_ + ": " + e.what());
    }
  }

 private:
  std::string source_;
};

}  // namespace

Polygon parse_polygon(const std::string& text, const std::string& source) { return Parser(source).parse(text); }

Polygon load_polygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open polygon file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_polygon(ss.str(), path);
}

Polygon builtin_polygon(const std::string& name, double theta) {
  if (name == "square") return unit_square();
  if (name == "hyperbolic-pentagon") return hyperbolic_pentagon();
  if (name == "sphere-triangle") return sphere_triangle(theta);
  if (name == "annulus") return flat_annulus();
  throw Error("unknown built-in polygon '" + name + "' (square, hyperbolic-pentagon, sphere-triangle, annulus)");
}

}  // namespace billiards
