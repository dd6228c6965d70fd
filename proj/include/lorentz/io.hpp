#pragma once

// JSON space files and line files. Reals are written as decimal strings
// and read from strings or numbers.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lorentz/asymptotics.hpp"
#include "lorentz/core.hpp"
#include "lorentz/model_spaces.hpp"

namespace lorentz::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Unreadable or malformed file; `line`/`column` locate JSON syntax errors.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line(line), column(column) {}
  std::size_t line, column;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Reals
// ---------------------------------------------------------------------------

inline std::string real_string(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

inline json real(double x) { return real_string(x); }

inline double read_real(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    double v = 0.0;
    is >> v;
    if (is.fail() || !is.eof()) throw StructuralError(what + ": not a decimal real: '" + s + "'");
    return v;
  }
  throw StructuralError(what + ": expected a real (string or number)");
}

inline const json& field(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) throw StructuralError(ctx + ": missing field '" + key + "'");
  return j.at(key);
}

inline double real_field(const json& j, const std::string& key, const std::string& ctx) {
  return read_real(field(j, key, ctx), ctx + "." + key);
}

inline std::size_t index_field(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw StructuralError(ctx + "." + key + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

// ---------------------------------------------------------------------------
// Reading files
// ---------------------------------------------------------------------------

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error", line, col);
  }
}

/// Writes to a temporary file next to `path`, then renames it into place.
inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename into '" + path + "': " + ec.message());
}

// ---------------------------------------------------------------------------
// Space files
// ---------------------------------------------------------------------------

struct Tolerances {
  double eps = kEps;
  std::optional<double> busemann;
  std::optional<double> parallel;
  std::optional<double> null;
  std::optional<double> curvature;
};

using AnySpace = std::variant<FiniteLorentzSpace, MinkowskiSpace, ProductSpace>;

struct SpaceFile {
  int format_version = kFormatVersion;
  std::string kind;
  double mesh = 0.0;
  Tolerances tol;
  AnySpace space;
  std::vector<std::string> labels;  // finite spaces: optional point names
};

namespace detail {

template <class T, class Read>
Table<T> read_table(const json& j, std::size_t n, const std::string& ctx, Read read) {
  if (!j.is_array() || j.size() != n) throw StructuralError(ctx + ": expected " + std::to_string(n) + " rows");
  Table<T> out(n, std::vector<T>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != n)
      throw StructuralError(ctx + ": row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) out[i][k] = read(row[k], ctx + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  }
  return out;
}

inline bool read_bool(const json& v, const std::string& ctx) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1)) return v.get<int>() == 1;
  throw StructuralError(ctx + ": expected 0/1 or a boolean");
}

inline TimeGrid read_grid(const json& j, const std::string& ctx) {
  TimeGrid g{real_field(j, "t_min", ctx), real_field(j, "t_max", ctx), real_field(j, "t_step", ctx)};
  if (!(g.t_step > 0.0) || g.t_max < g.t_min) throw StructuralError(ctx + ": invalid time grid");
  return g;
}

inline MetricSpaceModel read_factor(const json& j, const std::string& ctx) {
  const std::string kind = field(j, "kind", ctx).get<std::string>();
  if (kind == "euclidean_segment")
    return MetricSpaceModel::euclidean_segment(real_field(j, "a", ctx), real_field(j, "b", ctx), index_field(j, "n", ctx));
  if (kind == "segment_points") {
    std::vector<double> xs;
    for (const auto& v : field(j, "xs", ctx)) xs.push_back(read_real(v, ctx + ".xs"));
    return MetricSpaceModel::segment_points(xs, real_field(j, "mesh", ctx));
  }
  if (kind == "euclidean_plane_sample") {
    std::vector<std::pair<double, double>> pts;
    for (const auto& v : field(j, "points", ctx)) {
      if (!v.is_array() || v.size() != 2) throw StructuralError(ctx + ".points: expected [x, y] pairs");
      pts.emplace_back(read_real(v[0], ctx + ".points"), read_real(v[1], ctx + ".points"));
    }
    return MetricSpaceModel::euclidean_plane_sample(pts, real_field(j, "mesh", ctx));
  }
  if (kind == "metric_graph") {
    std::vector<GraphEdge> edges;
    for (const auto& e : field(j, "edges", ctx)) {
      if (!e.is_array() || e.size() != 3) throw StructuralError(ctx + ".edges: expected [u, v, length]");
      edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), read_real(e[2], ctx + ".edges")});
    }
    return MetricSpaceModel::metric_graph(index_field(j, "vertices", ctx), edges, real_field(j, "mesh", ctx));
  }
  if (kind == "explicit_table") {
    const json& d = field(j, "d", ctx);
    auto table = read_table<double>(d, d.size(), ctx + ".d", read_real);
    return MetricSpaceModel::explicit_table(std::move(table), real_field(j, "mesh", ctx));
  }
  throw StructuralError(ctx + ": unknown factor kind '" + kind + "'");
}

}  // namespace detail

inline SpaceFile parse_space(const json& j) {
  SpaceFile f;
  const std::string ctx = "space";
  const json& ver = field(j, "format_version", ctx);
  if (!ver.is_number_integer() || ver.get<int>() != kFormatVersion)
    throw StructuralError("unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");
  f.kind = field(j, "kind", ctx).get<std::string>();
  if (j.contains("mesh")) f.mesh = read_real(j["mesh"], "mesh");
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (t.contains("eps")) f.tol.eps = read_real(t["eps"], "tolerances.eps");
    if (t.contains("busemann")) f.tol.busemann = read_real(t["busemann"], "tolerances.busemann");
    if (t.contains("parallel")) f.tol.parallel = read_real(t["parallel"], "tolerances.parallel");
    if (t.contains("null")) f.tol.null = read_real(t["null"], "tolerances.null");
    if (t.contains("curvature")) f.tol.curvature = read_real(t["curvature"], "tolerances.curvature");
  }
  if (f.kind == "finite") {
    const json& p = field(j, "finite", ctx);
    const std::size_t n = index_field(p, "n", "finite");
    auto d = detail::read_table<double>(field(p, "d", "finite"), n, "finite.d", read_real);
    auto leq = detail::read_table<bool>(field(p, "leq", "finite"), n, "finite.leq", detail::read_bool);
    auto ll = detail::read_table<bool>(field(p, "ll", "finite"), n, "finite.ll", detail::read_bool);
    auto tau = detail::read_table<double>(field(p, "tau", "finite"), n, "finite.tau", read_real);
    if (p.contains("labels"))
      for (const auto& l : p["labels"]) f.labels.push_back(l.get<std::string>());
    f.space = FiniteLorentzSpace(std::move(d), std::move(leq), std::move(ll), std::move(tau));
  } else if (f.kind == "minkowski") {
    MinkowskiSpace m(f.tol.eps);
    if (j.contains("minkowski")) {
      const json& p = j["minkowski"];
      if (p.contains("segments")) m.set_segments(p["segments"].get<int>());
      if (p.contains("strip")) {
        const json& s = p["strip"];
        m.set_strip(real_field(s, "x_min", "strip"), real_field(s, "x_max", "strip"), real_field(s, "x_step", "strip"),
                    detail::read_grid(s, "strip"));
      }
    }
    if (f.mesh == 0.0) f.mesh = m.mesh();
    f.space = std::move(m);
  } else if (f.kind == "product") {
    const json& p = field(j, "product", ctx);
    std::optional<TimeGrid> grid;
    if (p.contains("grid")) grid = detail::read_grid(p["grid"], "product.grid");
    ProductSpace X(detail::read_factor(field(p, "factor", "product"), "product.factor"), grid, f.tol.eps);
    if (p.contains("vertical_segments")) X.set_vertical_segments(p["vertical_segments"].get<int>());
    if (f.mesh == 0.0) f.mesh = X.mesh();
    f.space = std::move(X);
  } else {
    throw StructuralError("unknown space kind '" + f.kind + "'");
  }
  return f;
}

inline SpaceFile load_space(const std::string& path) {
  const json j = parse_json(read_text(path), path);
  try {
    return parse_space(j);
  } catch (const json::exception& e) {
    throw StructuralError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

inline json point_json(PointId p) { return p; }
inline json point_json(const MinkowskiPoint& p) { return json::array({real(p.t), real(p.x)}); }
inline json point_json(const ProductPoint& p) { return json::array({real(p.t), p.x}); }

template <class P>
P read_point(const json& j, const std::string& ctx);

template <>
inline PointId read_point<PointId>(const json& j, const std::string& ctx) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw StructuralError(ctx + ": expected a point index");
  return j.get<PointId>();
}
template <>
inline MinkowskiPoint read_point<MinkowskiPoint>(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2) throw StructuralError(ctx + ": expected [t, x]");
  return {read_real(j[0], ctx), read_real(j[1], ctx)};
}
template <>
inline ProductPoint read_point<ProductPoint>(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2 || !j[1].is_number_integer())
    throw StructuralError(ctx + ": expected [t, factor_index]");
  return {read_real(j[0], ctx), j[1].get<std::size_t>()};
}

/// Command-line point syntax: "3" (finite), "t,x" (Minkowski), "t,i" (product).
template <class P>
P parse_point_arg(const std::string& s) {
  if constexpr (std::is_same_v<P, PointId>) {
    return read_point<PointId>(parse_json(s, "point"), "point");
  } else {
    return read_point<P>(parse_json("[" + s + "]", "point"), "point");
  }
}

template <class P>
void check_point(const FiniteLorentzSpace& space, const P& p) {
  if constexpr (std::is_same_v<P, PointId>)
    if (p >= space.size()) throw StructuralError("point index " + std::to_string(p) + " out of range");
}
inline void check_point(const ProductSpace& space, const ProductPoint& p) {
  if (p.x >= space.factor().size()) throw StructuralError("factor index " + std::to_string(p.x) + " out of range");
}
inline void check_point(const MinkowskiSpace&, const MinkowskiPoint&) {}

// ---------------------------------------------------------------------------
// Line files
// ---------------------------------------------------------------------------

/// {"format_version":1, "kind":"line", ...} with either "points" + "anchor"
/// (verified with is_line), "vertical" (product) or "straight" (Minkowski).
template <LorentzQuery S>
LineDescriptor<PointOf<S>> parse_line(const S& space, const json& j, std::optional<double> tol = std::nullopt) {
  using P = PointOf<S>;
  const std::string ctx = "line";
  const json& ver = field(j, "format_version", ctx);
  if (!ver.is_number_integer() || ver.get<int>() != kFormatVersion) throw StructuralError("unsupported line format_version");
  if (field(j, "kind", ctx).get<std::string>() != "line") throw StructuralError("line file: kind must be 'line'");
  if (j.contains("vertical")) {
    if constexpr (std::is_same_v<S, ProductSpace>) {
      const json& v = j["vertical"];
      return vertical_line(space, index_field(v, "x", "vertical"), real_field(v, "s_min", "vertical"),
                           real_field(v, "s_max", "vertical"), real_field(v, "step", "vertical"));
    } else {
      throw StructuralError("vertical lines need a product space");
    }
  }
  if (j.contains("straight")) {
    if constexpr (std::is_same_v<S, MinkowskiSpace>) {
      const json& v = j["straight"];
      return straight_line(read_point<MinkowskiPoint>(field(v, "origin", "straight"), "straight.origin"),
                           real_field(v, "rapidity", "straight"), real_field(v, "s_min", "straight"),
                           real_field(v, "s_max", "straight"), real_field(v, "step", "straight"));
    } else {
      throw StructuralError("straight lines need a Minkowski space");
    }
  }
  Chain<P> chain;
  for (const auto& p : field(j, "points", ctx)) {
    chain.push_back(read_point<P>(p, "line.points"));
    check_point(space, chain.back());
  }
  const std::size_t anchor = j.contains("anchor") ? index_field(j, "anchor", ctx) : 0;
  const LineCheck lc = is_line(space, chain, std::nullopt, tol);
  if (!lc.is_line) {
    std::string where = lc.first_failure
                            ? " at (" + std::to_string(lc.first_failure->first) + "," +
                                  std::to_string(lc.first_failure->second) + ")"
                            : "";
    throw VerificationError("line file: chain is not a line, tau-additivity fails" + where);
  }
  return make_line(space, chain, anchor, tol);
}

template <LorentzQuery S>
LineDescriptor<PointOf<S>> load_line(const S& space, const std::string& path, std::optional<double> tol = std::nullopt) {
  const json j = parse_json(read_text(path), path);
  try {
    return parse_line(space, j, tol);
  } catch (const json::exception& e) {
    throw StructuralError(path + ": " + e.what());
  }
}

}  // namespace lorentz::io
