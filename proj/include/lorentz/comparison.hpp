#pragma once

// Comparison geometry against R^{1,1}: the law of cosines, comparison
// triangles and angles, curvature testers, the two Alexandrov gluing lemmas,
// stacking and the line-angle checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lorentz/chains.hpp"
#include "lorentz/core.hpp"
#include "lorentz/model_spaces.hpp"

namespace lorentz {

// ---------------------------------------------------------------------------
// Law of cosines
// ---------------------------------------------------------------------------

struct SignedAngle {
  double omega = 0.0;  // hyperbolic angle, >= 0
  int sigma = 1;       // +1 when the vertex is not a time endpoint
  double signed_value() const { return sigma * omega; }
};

/// a13 from the two sides at x2 and the hyperbolic angle there:
/// a13^2 = a12^2 + a23^2 + 2 sigma a12 a23 cosh(omega).
/// Evaluated as (a12 + sigma a23)^2 + 4 sigma a12 a23 sinh^2(omega/2).
inline double law_of_cosines_side(double a12, double a23, double omega, int sigma) {
  if (!(a12 > 0.0 && a23 > 0.0)) throw PreconditionError("law of cosines: sides must be positive");
  if (!(omega >= 0.0)) throw PreconditionError("law of cosines: angle must be non-negative");
  if (sigma != 1 && sigma != -1) throw PreconditionError("law of cosines: sigma must be +1 or -1");
  const double sh = std::sinh(0.5 * omega);
  const double base = a12 + sigma * a23;
  const double radicand = base * base + 4.0 * sigma * a12 * a23 * sh * sh;
  if (radicand < 0.0) {
    if (radicand > -kEps * std::max(1.0, a12 * a23)) return 0.0;
    throw PreconditionError("law of cosines: negative radicand, endpoint configuration not realizable");
  }
  return std::sqrt(radicand);
}

/// Side lengths of a timelike triangle with the time order of its vertices.
///
/// Vertices are labelled 1, 2, 3; `order` lists the labels from earliest to
/// latest. The angle of interest sits at x2, so sigma = +1 iff x2 is in the middle.
struct SideTriple {
  double a12 = 0.0, a23 = 0.0, a13 = 0.0;
  std::array<int, 3> order{1, 2, 3};

  static SideTriple chain(double a12, double a23, double a13) { return {a12, a23, a13, {1, 2, 3}}; }
  /// x2 earliest (future-pointing hinge at x2); x1 before x3.
  static SideTriple future_hinge(double a12, double a23, double a13) { return {a12, a23, a13, {2, 1, 3}}; }

  int sigma() const { return order[1] == 2 ? 1 : -1; }

  double side(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i == 1 && j == 2) return a12;
    if (i == 2 && j == 3) return a23;
    if (i == 1 && j == 3) return a13;
    throw PreconditionError("side: bad vertex labels");
  }

  /// Relabel so that `label` becomes x2, keeping the time order of points.
  SideTriple centered_at(int label) const {
    if (label == 2) return *this;
    const int other = label == 1 ? 3 : 1;
    // new x1 = old 2, new x2 = old label, new x3 = old other
    auto remap = [&](int old) { return old == 2 ? 1 : (old == label ? 2 : 3); };
    SideTriple out;
    out.a12 = side(2, label);
    out.a23 = side(label, other);
    out.a13 = side(2, other);
    for (int k = 0; k < 3; ++k) out.order[k] = remap(order[k]);
    return out;
  }
};

namespace detail {

/// cosh(omega) - 1 at x2 from the sides, in factored form.
inline double cosh_minus_one(const SideTriple& s) {
  const double a = s.a12, b = s.a23, c = s.a13;
  if (s.sigma() == 1) return (c - a - b) * (c + a + b) / (2.0 * a * b);
  const double diff = std::abs(a - b);
  return (diff - c) * (diff + c) / (2.0 * a * b);
}

inline double realizability_slack(const SideTriple& s) {
  if (s.sigma() == 1) return s.a13 - s.a12 - s.a23;
  return std::abs(s.a12 - s.a23) - s.a13;
}

}  // namespace detail

/// True when the side lengths fit a triangle in R^{1,1} with the given order
/// (the reverse triangle inequality along the time order).
inline bool realizable(const SideTriple& s, double tol = kEps) {
  if (s.a12 < 0.0 || s.a23 < 0.0 || s.a13 < 0.0) return false;
  return detail::realizability_slack(s) >= -tol * std::max({1.0, s.a12, s.a23, s.a13});
}

/// The hyperbolic angle at x2 solving the law of cosines.
inline SignedAngle solve_angle(const SideTriple& s) {
  if (!(s.a12 > 0.0 && s.a23 > 0.0))
    throw PreconditionError("solve_angle: sides at x2 must be positive");
  if (!realizable(s)) throw PreconditionError("solve_angle: side lengths are not realizable");
  const double u = std::max(0.0, detail::cosh_minus_one(s));
  return {std::log1p(u + std::sqrt(u * (u + 2.0))), s.sigma()};
}

/// Angle at vertex `label` (1, 2 or 3) of the triangle.
inline SignedAngle angle_at(const SideTriple& s, int label) { return solve_angle(s.centered_at(label)); }

// ---------------------------------------------------------------------------
// Comparison triangles
// ---------------------------------------------------------------------------

struct ComparisonTriangle {
  std::array<MinkowskiPoint, 3> vertex;  // vertex[k] is the image of x_{k+1}
  SideTriple sides;
  const MinkowskiPoint& operator[](int label) const { return vertex.at(label - 1); }
};

/// Plants the triangle: earliest vertex at the origin, latest on the positive
/// t-axis, middle vertex at x >= 0.
inline ComparisonTriangle realize_triangle(const SideTriple& s) {
  if (!realizable(s)) throw PreconditionError("realize_triangle: side lengths are not realizable");
  const int e = s.order[0], m = s.order[1], l = s.order[2];
  const double big = s.side(e, l), a = s.side(e, m), b = s.side(m, l);
  if (!(big > 0.0)) throw PreconditionError("realize_triangle: longest side must be positive");
  ComparisonTriangle tri;
  tri.sides = s;
  tri.vertex[e - 1] = {0.0, 0.0};
  tri.vertex[l - 1] = {big, 0.0};
  const double t = (big * big + a * a - b * b) / (2.0 * big);
  const double lo = (big - a - b) * (big - a + b) / (2.0 * big);  // t - a
  const double hi = (big + a - b) * (big + a + b) / (2.0 * big);  // t + a
  tri.vertex[m - 1] = {t, std::sqrt(std::max(0.0, lo * hi))};
  return tri;
}

/// Point on the planted side between labels i and j at tau-arclength
/// `param` measured from the earlier of the two vertices.
inline MinkowskiPoint comparison_point(const ComparisonTriangle& tri, int i, int j, double param) {
  const auto& s = tri.sides;
  auto rank = [&](int label) { return int(std::find(s.order.begin(), s.order.end(), label) - s.order.begin()); };
  if (rank(i) > rank(j)) std::swap(i, j);
  const double len = s.side(i, j);
  if (param < -kEps || param > len + kEps)
    throw PreconditionError("comparison_point: parameter outside the side");
  if (len == 0.0) return tri[i];
  const double f = std::clamp(param / len, 0.0, 1.0);
  const auto& a = tri[i];
  const auto& b = tri[j];
  return {a.t + f * (b.t - a.t), a.x + f * (b.x - a.x)};
}

// ---------------------------------------------------------------------------
// Planar Minkowski helpers
// ---------------------------------------------------------------------------

/// Rapidity of a timelike vector, after flipping it to the future.
inline double rapidity(MinkowskiPoint v) {
  if (v.t < 0.0) v = -1.0 * v;
  return std::atanh(v.x / v.t);
}

/// Hyperbolic angle at `at` between the straight lines to a and b.
inline double minkowski_angle(const MinkowskiPoint& at, const MinkowskiPoint& a, const MinkowskiPoint& b) {
  return std::abs(rapidity(a - at) - rapidity(b - at));
}

namespace detail {
inline MinkowskiPoint plant_third_impl(MinkowskiPoint a, MinkowskiPoint b, double tau_ac, double tau_bc,
                                       const MinkowskiPoint& ref, bool away) {
  if (b.t < a.t) {
    std::swap(a, b);
    std::swap(tau_ac, tau_bc);
  }
  const MinkowskiPoint v = b - a;
  const double big = std::sqrt((v.t - v.x) * (v.t + v.x));
  if (!(big > 0.0)) throw PreconditionError("plant_third: base is not timelike");
  const double phi = std::atanh(v.x / v.t);
  const double ch = std::cosh(phi), sh = std::sinh(phi);
  auto to_frame = [&](MinkowskiPoint p) {
    p = p - a;
    return MinkowskiPoint{ch * p.t - sh * p.x, -sh * p.t + ch * p.x};
  };
  auto from_frame = [&](MinkowskiPoint p) {
    return a + MinkowskiPoint{ch * p.t + sh * p.x, sh * p.t + ch * p.x};
  };
  const double t = (big * big + tau_ac * tau_ac - tau_bc * tau_bc) / (2.0 * big);
  const double x2 = (t - tau_ac) * (t + tau_ac);
  if (x2 < -kEps * std::max(1.0, t * t)) throw PreconditionError("plant_third: configuration not realizable");
  double side = to_frame(ref).x > 0.0 ? -1.0 : 1.0;
  if (!away) side = -side;
  return from_frame({t, side * std::sqrt(std::max(0.0, x2))});
}
}  // namespace detail

/// Places C given tau-separations to A and B (A, B timelike related), on the
/// side of line AB opposite to `away_from` (or the positive side when that
/// point is on the line). The time order of C relative to A, B is implied by
/// the values.
inline MinkowskiPoint plant_third(const MinkowskiPoint& a, const MinkowskiPoint& b, double tau_ac, double tau_bc,
                                  const MinkowskiPoint& away_from) {
  return detail::plant_third_impl(a, b, tau_ac, tau_bc, away_from, true);
}

/// Same as plant_third, but on the side of the base line containing `toward`.
inline MinkowskiPoint plant_third_toward(const MinkowskiPoint& a, const MinkowskiPoint& b, double tau_ac,
                                         double tau_bc, const MinkowskiPoint& toward) {
  return detail::plant_third_impl(a, b, tau_ac, tau_bc, toward, false);
}

// ---------------------------------------------------------------------------
// Comparison angles of points in a space
// ---------------------------------------------------------------------------

/// Side triple of three points (x1,x2,x3) = (p,x,q) read off a space; the
/// time order comes from the causal relation.
template <LorentzQuery S>
SideTriple side_triple(const S& space, const PointOf<S>& p1, const PointOf<S>& p2, const PointOf<S>& p3) {
  const std::array<const PointOf<S>*, 3> pts{&p1, &p2, &p3};
  std::array<int, 3> past{0, 0, 0};  // number of other points in the causal past
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const bool fwd = space.causal(*pts[j], *pts[i]);
      const bool bwd = space.causal(*pts[i], *pts[j]);
      if (!fwd && !bwd) throw PreconditionError("side_triple: points are not causally related");
      past[i] += fwd && !bwd;
    }
  SideTriple s;
  s.a12 = unordered_tau(space, p1, p2);
  s.a23 = unordered_tau(space, p2, p3);
  s.a13 = unordered_tau(space, p1, p3);
  std::array<int, 3> labels{1, 2, 3};
  std::stable_sort(labels.begin(), labels.end(), [&](int a, int b) { return past[a - 1] < past[b - 1]; });
  s.order = labels;
  return s;
}

/// Comparison angle at x between p and q.
template <LorentzQuery S>
SignedAngle comparison_angle(const S& space, const PointOf<S>& x, const PointOf<S>& p, const PointOf<S>& q) {
  return solve_angle(side_triple(space, p, x, q));
}

// ---------------------------------------------------------------------------
// Curvature bounds by triangle comparison
// ---------------------------------------------------------------------------

enum class CurvatureBound { lower, upper };

/// A sampled timelike triangle v0 << v1 << v2 with its three sides as chains
/// from the earlier to the later vertex: sides[0] = v0->v1, sides[1] = v1->v2,
/// sides[2] = v0->v2.
template <class P>
struct SampledTriangle {
  std::array<Chain<P>, 3> sides;
};

struct CurvatureWitness {
  std::size_t triangle = 0;
  int side_p = 0, side_q = 0;
  std::size_t index_p = 0, index_q = 0;
  double tau = 0.0, tau_bar = 0.0;
};

struct CurvatureReport {
  bool pass = true;
  double worst_defect = 0.0;  // max (lower) or min (upper) of tau - tau_bar
  std::size_t triangles = 0;
  std::size_t pairs = 0;
  std::optional<CurvatureWitness> witness;
};

namespace detail {
inline constexpr std::array<std::array<int, 2>, 3> kSideLabels{{{1, 2}, {2, 3}, {1, 3}}};

/// a - b beyond tolerance, guarding against sqrt amplification near null pairs.
inline bool exceeds(double a, double b, double eps) {
  return a - b > eps && a * a - b * b > eps * std::max(1.0, a * a);
}
}  // namespace detail

/// Triangle comparison on each sampled triangle: every ordered pair (p,q) of
/// side vertices is compared with its comparison points.
template <LorentzQuery S>
CurvatureReport test_curvature(const S& space, const std::vector<SampledTriangle<PointOf<S>>>& triangles,
                               CurvatureBound bound, double eps = kEps) {
  CurvatureReport rep;
  rep.worst_defect = bound == CurvatureBound::lower ? -std::numeric_limits<double>::infinity()
                                                    : std::numeric_limits<double>::infinity();
  for (std::size_t ti = 0; ti < triangles.size(); ++ti) {
    const auto& tri = triangles[ti];
    for (int k = 0; k < 3; ++k) {
      if (tri.sides[k].size() < 2) throw PreconditionError("triangle side needs two points");
      if (!is_line(space, tri.sides[k]).is_line)
        throw PreconditionError("side " + std::to_string(k) + " of triangle " + std::to_string(ti) +
                                " is not maximizing");
    }
    const auto& v0 = tri.sides[0].front();
    const auto& v1 = tri.sides[1].front();
    const auto& v2 = tri.sides[1].back();
    const auto planted = realize_triangle(SideTriple::chain(space.tau(v0, v1), space.tau(v1, v2), space.tau(v0, v2)));
    ++rep.triangles;

    struct OnSide {
      PointOf<S> point;
      MinkowskiPoint bar;
      int side;
      std::size_t index;
    };
    std::vector<OnSide> pts;
    for (int k = 0; k < 3; ++k) {
      const auto [i, j] = detail::kSideLabels[k];
      const auto& chain = tri.sides[k];
      for (std::size_t n = 0; n < chain.size(); ++n) {
        const double param = space.tau(chain.front(), chain[n]);
        pts.push_back({chain[n], comparison_point(planted, i, j, param), k, n});
      }
    }
    for (const auto& a : pts)
      for (const auto& b : pts) {
        if (a.side == b.side) continue;
        const double t = space.tau(a.point, b.point);
        const double tb = tau_minkowski(a.bar, b.bar);
        ++rep.pairs;
        const double defect = t - tb;
        const bool worse = bound == CurvatureBound::lower ? defect > rep.worst_defect : defect < rep.worst_defect;
        const bool violates = bound == CurvatureBound::lower ? detail::exceeds(t, tb, eps) : detail::exceeds(tb, t, eps);
        if (worse) {
          rep.worst_defect = defect;
          if (rep.pass) rep.witness = CurvatureWitness{ti, a.side, b.side, a.index, b.index, t, tb};
        }
        if (violates && rep.pass) {
          rep.pass = false;
          rep.witness = CurvatureWitness{ti, a.side, b.side, a.index, b.index, t, tb};
        }
      }
  }
  if (rep.pairs == 0) rep.worst_defect = 0.0;
  return rep;
}

template <LorentzQuery S>
CurvatureReport test_curvature_lower0(const S& space, const std::vector<SampledTriangle<PointOf<S>>>& triangles,
                                      double eps = kEps) {
  return test_curvature(space, triangles, CurvatureBound::lower, eps);
}
template <LorentzQuery S>
CurvatureReport test_curvature_upper0(const S& space, const std::vector<SampledTriangle<PointOf<S>>>& triangles,
                                      double eps = kEps) {
  return test_curvature(space, triangles, CurvatureBound::upper, eps);
}

/// Sides of the triangle v0 << v1 << v2 from the space's own maximizers.
template <GeodesicSpace S>
SampledTriangle<PointOf<S>> triangle_from_realizers(const S& space, const PointOf<S>& v0, const PointOf<S>& v1,
                                                    const PointOf<S>& v2) {
  return {{space.realizer(v0, v1), space.realizer(v1, v2), space.realizer(v0, v2)}};
}

/// Random timelike triangles v0 << v1 << v2 drawn from a sample.
template <LorentzQuery S>
std::vector<std::array<PointOf<S>, 3>> sample_timelike_triangles(const S& space, const std::vector<PointOf<S>>& sample,
                                                                 std::size_t count, std::uint64_t seed,
                                                                 std::size_t max_tries = 1000000) {
  std::vector<std::array<PointOf<S>, 3>> out;
  if (sample.size() < 3) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
  for (std::size_t tries = 0; out.size() < count && tries < max_tries; ++tries) {
    std::array<PointOf<S>, 3> v{sample[pick(rng)], sample[pick(rng)], sample[pick(rng)]};
    // order by the timelike relation when possible
    for (int pass = 0; pass < 3; ++pass)
      for (int k = 0; k < 2; ++k)
        if (space.timelike(v[k + 1], v[k])) std::swap(v[k], v[k + 1]);
    if (space.timelike(v[0], v[1]) && space.timelike(v[1], v[2])) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monotonicity comparison
// ---------------------------------------------------------------------------

struct MonotonicityReport {
  bool pass = true;
  double max_violation = 0.0;  // largest step against the required direction
  std::size_t defined = 0;     // |D|
  /// theta[i][j] for alpha[i+1], beta[j+1]; NaN outside D.
  std::vector<std::vector<double>> theta;
};

/// theta(s,t) = signed comparison angle at x = alpha[0] = beta[0] between
/// alpha(s) and beta(t); lower bounds need it non-decreasing in both
/// arguments, upper bounds non-increasing.
template <LorentzQuery S>
MonotonicityReport test_monotonicity_comparison(const S& space, const Chain<PointOf<S>>& alpha,
                                                const Chain<PointOf<S>>& beta, CurvatureBound bound,
                                                double tol = 1e-7) {
  if (alpha.size() < 2 || beta.size() < 2) throw PreconditionError("hinge needs two non-trivial realizers");
  const auto& x = alpha.front();
  MonotonicityReport rep;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.theta.assign(alpha.size() - 1, std::vector<double>(beta.size() - 1, nan));
  for (std::size_t i = 1; i < alpha.size(); ++i)
    for (std::size_t j = 1; j < beta.size(); ++j) {
      if (!timelike_related(space, alpha[i], beta[j])) continue;
      rep.theta[i - 1][j - 1] = comparison_angle(space, x, alpha[i], beta[j]).signed_value();
      ++rep.defined;
    }
  if (rep.defined == 0) throw PreconditionError("monotonicity: no timelike related parameter pairs");
  const double dir = bound == CurvatureBound::lower ? 1.0 : -1.0;
  auto scan = [&](auto at, std::size_t outer, std::size_t inner) {
    for (std::size_t o = 0; o < outer; ++o) {
      double prev = nan;
      for (std::size_t in = 0; in < inner; ++in) {
        const double v = at(o, in);
        if (std::isnan(v)) continue;
        if (!std::isnan(prev)) rep.max_violation = std::max(rep.max_violation, dir * (prev - v));
        prev = v;
      }
    }
  };
  const std::size_t na = rep.theta.size(), nb = rep.theta.front().size();
  scan([&](std::size_t i, std::size_t j) { return rep.theta[i][j]; }, na, nb);
  scan([&](std::size_t j, std::size_t i) { return rep.theta[i][j]; }, nb, na);
  rep.pass = rep.max_violation <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Alexandrov lemmas
// ---------------------------------------------------------------------------

/// Triangle x << y << z with p on a side. For the across version p lies on
/// xz at tau(x,p) = s and `tau_p_other` is tau between p and y (p << y when
/// `p_before_other`, else y << p). For the future version p lies on xy and
/// `tau_p_other` is tau(p,z).
struct AlexandrovData {
  double a_xy = 0.0, a_yz = 0.0, a_xz = 0.0;
  double s = 0.0;
  double tau_p_other = 0.0;
  bool p_before_other = true;
};

struct AnglePair {
  const char* name;
  double bar;
  double tilde;
};

struct AlexandrovReport {
  double tau_actual = 0.0;      // tau(p,y) or tau(p,z)
  double tau_comparison = 0.0;  // same pair in the tilde triangle
  bool tau_condition = false;   // tau_actual <= tau_comparison
  bool convex = false;          // glued angle pattern at p
  bool biconditional = false;   // convex <=> tau_condition (or both equalities)
  bool flat = false;            // tau_actual == tau_comparison within tolerance
  std::vector<AnglePair> first;   // Delta-bar_1 vs Delta-tilde_1
  std::vector<AnglePair> second;  // Delta-bar_2 vs Delta-tilde_2
  bool first_ok = false, second_ok = false;
  double split_bar = 0.0, split_tilde = 0.0;
  bool split_ok = false;
  /// Every listed inequality is strict when tau_actual differs from the comparison value.
  bool strict = false;
  /// Glued planted coordinates of x, y, z, p.
  MinkowskiPoint x_bar, y_bar, z_bar, p_bar;
  bool all_ok() const { return biconditional && first_ok && second_ok && split_ok; }
};

namespace detail {

/// a >= b (dir=+1) or a <= b (dir=-1), with tolerance.
inline bool directed(double a, double b, int dir, double tol) { return dir * (a - b) >= -tol; }

inline bool all_directed(const std::vector<AnglePair>& v, int dir, double tol) {
  return std::all_of(v.begin(), v.end(), [&](const AnglePair& a) { return directed(a.bar, a.tilde, dir, tol); });
}
inline bool all_strict(const std::vector<AnglePair>& v, int dir, double margin) {
  return std::all_of(v.begin(), v.end(), [&](const AnglePair& a) { return dir * (a.bar - a.tilde) > margin; });
}

inline std::vector<AnglePair> triangle_angles(const char* na, const char* nb, const char* nc,
                                              const MinkowskiPoint& a, const MinkowskiPoint& b, const MinkowskiPoint& c,
                                              const MinkowskiPoint& ta, const MinkowskiPoint& tb, const MinkowskiPoint& tc) {
  return {{na, minkowski_angle(a, b, c), minkowski_angle(ta, tb, tc)},
          {nb, minkowski_angle(b, a, c), minkowski_angle(tb, ta, tc)},
          {nc, minkowski_angle(c, a, b), minkowski_angle(tc, ta, tb)}};
}

inline ComparisonTriangle plant_ordered(double ab, double bc, double ac) {
  return realize_triangle(SideTriple::chain(ab, bc, ac));
}

}  // namespace detail

/// Across version: p on xz, subtriangles (x,p,y) and (p,y,z) glued along py
/// with x and z on opposite sides.
inline AlexandrovReport verify_alexandrov_across(const AlexandrovData& d, double tol = 1e-9) {
  if (!(d.s > 0.0 && d.s < d.a_xz)) throw PreconditionError("alexandrov: p must be interior to side xz");
  const auto tilde = detail::plant_ordered(d.a_xy, d.a_yz, d.a_xz);
  const MinkowskiPoint xt = tilde[1], yt = tilde[2], zt = tilde[3];
  const MinkowskiPoint pt = comparison_point(tilde, 1, 3, d.s);
  AlexandrovReport r;
  r.tau_actual = d.tau_p_other;
  r.tau_comparison = d.p_before_other ? tau_minkowski(pt, yt) : tau_minkowski(yt, pt);
  if (!(r.tau_comparison > 0.0)) throw PreconditionError("alexandrov: p~ and y~ are not timelike related in the stated order");
  const double b = d.tau_p_other, c = d.a_xz - d.s;

  // Delta-bar_1 = (x,p,y), then z on the other side of line py
  MinkowskiPoint xb, pb, yb;
  if (d.p_before_other) {
    const auto t1 = realize_triangle(SideTriple::chain(d.s, b, d.a_xy));  // x << p << y
    xb = t1[1], pb = t1[2], yb = t1[3];
  } else {
    const auto t1 = realize_triangle({d.a_xy, b, d.s, {1, 2, 3}});  // labels x=1,y=2,p=3: x << y << p
    xb = t1[1], yb = t1[2], pb = t1[3];
  }
  const MinkowskiPoint zb = plant_third(pb, yb, c, d.a_yz, xb);
  r.x_bar = xb, r.y_bar = yb, r.z_bar = zb, r.p_bar = pb;

  r.first = detail::triangle_angles("x", "p", "y", xb, pb, yb, xt, pt, yt);
  r.second = detail::triangle_angles("p", "y", "z", pb, yb, zb, pt, yt, zt);
  const double angle_p1 = minkowski_angle(pb, xb, yb), angle_p2 = minkowski_angle(pb, yb, zb);
  r.convex = angle_p1 >= angle_p2 - tol;
  r.tau_condition = r.tau_actual <= r.tau_comparison + tol;
  r.flat = std::abs(r.tau_actual - r.tau_comparison) <= tol;
  const bool concave = angle_p1 <= angle_p2 + tol;
  r.biconditional = r.flat ? (r.convex && concave) : (r.convex == r.tau_condition && concave != r.tau_condition);
  const int dir = r.tau_condition ? 1 : -1;
  r.first_ok = detail::all_directed(r.first, dir, tol) && (!r.flat || detail::all_directed(r.first, -dir, tol));
  r.second_ok = detail::all_directed(r.second, dir, tol) && (!r.flat || detail::all_directed(r.second, -dir, tol));
  r.split_bar = minkowski_angle(yb, xb, zb);
  r.split_tilde = minkowski_angle(yt, xt, zt);
  r.split_ok = r.split_bar >= r.split_tilde - tol;
  r.strict = !r.flat && detail::all_strict(r.first, dir, 0.0) && detail::all_strict(r.second, dir, 0.0) &&
             r.split_bar > r.split_tilde && std::abs(angle_p1 - angle_p2) > 0.0;
  return r;
}

/// Future version: p on xy, subtriangles (x,p,z) and (p,y,z) glued along pz
/// with x and y on opposite sides. Convexity compares the angle at p in the
/// first subtriangle with the one in the second.
inline AlexandrovReport verify_alexandrov_future(const AlexandrovData& d, double tol = 1e-9) {
  if (!(d.s > 0.0 && d.s < d.a_xy)) throw PreconditionError("alexandrov: p must be interior to side xy");
  const auto tilde = detail::plant_ordered(d.a_xy, d.a_yz, d.a_xz);
  const MinkowskiPoint xt = tilde[1], yt = tilde[2], zt = tilde[3];
  const MinkowskiPoint pt = comparison_point(tilde, 1, 2, d.s);
  AlexandrovReport r;
  r.tau_actual = d.tau_p_other;
  r.tau_comparison = tau_minkowski(pt, zt);
  const double c = d.tau_p_other, a2 = d.a_xy - d.s;

  const auto t1 = realize_triangle(SideTriple::chain(d.s, c, d.a_xz));  // x << p << z
  const MinkowskiPoint xb = t1[1], pb = t1[2], zb = t1[3];
  const MinkowskiPoint yb = plant_third(pb, zb, a2, d.a_yz, xb);
  r.x_bar = xb, r.y_bar = yb, r.z_bar = zb, r.p_bar = pb;

  r.first = detail::triangle_angles("x", "p", "z", xb, pb, zb, xt, pt, zt);
  r.second = detail::triangle_angles("p", "y", "z", pb, yb, zb, pt, yt, zt);
  const double angle_p1 = minkowski_angle(pb, xb, zb), angle_p2 = minkowski_angle(pb, yb, zb);
  r.convex = angle_p1 >= angle_p2 - tol;
  r.tau_condition = r.tau_actual <= r.tau_comparison + tol;
  r.flat = std::abs(r.tau_actual - r.tau_comparison) <= tol;
  const bool concave = angle_p1 <= angle_p2 + tol;
  r.biconditional = r.flat ? (r.convex && concave) : (r.convex == r.tau_condition && concave != r.tau_condition);
  const int dir = r.tau_condition ? 1 : -1;
  r.first_ok = detail::all_directed(r.first, dir, tol) && (!r.flat || detail::all_directed(r.first, -dir, tol));
  r.second_ok = detail::all_directed(r.second, -dir, tol) && (!r.flat || detail::all_directed(r.second, dir, tol));
  r.split_bar = minkowski_angle(zb, xb, yb);
  r.split_tilde = minkowski_angle(zt, xt, yt);
  r.split_ok = r.split_bar <= r.split_tilde + tol;
  r.strict = !r.flat && detail::all_strict(r.first, dir, 0.0) && detail::all_strict(r.second, -dir, 0.0) &&
             r.split_bar < r.split_tilde && std::abs(angle_p1 - angle_p2) > 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Lines: stacking, angle constancy, equal sides
// ---------------------------------------------------------------------------

namespace detail {
inline double segment_distance(const MinkowskiPoint& p, const MinkowskiPoint& a, const MinkowskiPoint& b) {
  const double vx = b.t - a.t, vy = b.x - a.x;
  const double len2 = vx * vx + vy * vy;
  double f = len2 > 0.0 ? ((p.t - a.t) * vx + (p.x - a.x) * vy) / len2 : 0.0;
  f = std::clamp(f, 0.0, 1.0);
  return std::hypot(p.t - (a.t + f * vx), p.x - (a.x + f * vy));
}

/// Planted triangle of (p, y) with p and y timelike related; the returned
/// pair is (p-bar, y-bar) placed by realize_triangle together with a third point.
template <LorentzQuery S>
ComparisonTriangle plant_points(const S& space, const PointOf<S>& a, const PointOf<S>& b, const PointOf<S>& c) {
  return realize_triangle(side_triple(space, a, b, c));
}
}  // namespace detail

struct StackingReport {
  double collinear_defect = 0.0;
  MinkowskiPoint p_bar, y1_bar, y2_bar, y3_bar;
};

/// Glues comparison triangles (p,y1,y2) and (p,y2,y3), y_k = line[i_k], along
/// p-y2 with y1 and y3 on opposite sides; measures how far y2-bar is from the
/// segment y1-bar y3-bar.
template <LorentzQuery S>
StackingReport verify_stacking(const S& space, const Chain<PointOf<S>>& line, const PointOf<S>& p,
                               std::array<std::size_t, 3> idx) {
  if (!(idx[0] < idx[1] && idx[1] < idx[2] && idx[2] < line.size()))
    throw PreconditionError("stacking: need indices i1 < i2 < i3 on the line");
  if (!is_line(space, line).is_line) throw PreconditionError("stacking: chain is not a line");
  const auto& y1 = line[idx[0]];
  const auto& y2 = line[idx[1]];
  const auto& y3 = line[idx[2]];
  for (const auto* y : {&y1, &y2, &y3})
    if (!timelike_related(space, p, *y)) throw PreconditionError("stacking: line point not timelike related to p");
  const auto t12 = detail::plant_points(space, p, y1, y2);  // labels p=1, y1=2, y2=3
  StackingReport r;
  r.p_bar = t12[1];
  r.y1_bar = t12[2];
  r.y2_bar = t12[3];
  r.y3_bar = plant_third(r.p_bar, r.y2_bar, unordered_tau(space, p, y3), unordered_tau(space, y2, y3), r.y1_bar);
  r.collinear_defect = detail::segment_distance(r.y2_bar, r.y1_bar, r.y3_bar);
  return r;
}

struct AngleSpreadReport {
  double max_spread = 0.0;
  double min_angle = 0.0, max_angle = 0.0;
  std::size_t probes = 0;
};

/// Comparison angles at x = alpha[0] between alpha points and line points on
/// both sides of x; constancy is the expected outcome.
template <LorentzQuery S>
AngleSpreadReport angle_equals_comparison_angle(const S& space, const Chain<PointOf<S>>& line, std::size_t x_index,
                                                const Chain<PointOf<S>>& alpha) {
  if (x_index >= line.size()) throw PreconditionError("angle check: x index outside the line");
  if (alpha.size() < 2) throw PreconditionError("angle check: realizer needs two points");
  const auto& x = line[x_index];
  AngleSpreadReport r;
  r.min_angle = std::numeric_limits<double>::infinity();
  r.max_angle = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < alpha.size(); ++i)
    for (std::size_t j = 0; j < line.size(); ++j) {
      if (j == x_index) continue;
      if (!timelike_related(space, alpha[i], line[j])) continue;
      if (!timelike_related(space, x, alpha[i]) || !timelike_related(space, x, line[j])) continue;
      const double w = comparison_angle(space, x, alpha[i], line[j]).omega;
      r.min_angle = std::min(r.min_angle, w);
      r.max_angle = std::max(r.max_angle, w);
      ++r.probes;
    }
  if (r.probes == 0) throw PreconditionError("angle check: no valid probes");
  if (r.max_angle < 1e-12) throw PreconditionError("angle check: degenerate, p lies on the line");
  r.max_spread = r.max_angle - r.min_angle;
  return r;
}

struct SidesEqualReport {
  bool holds = true;
  double worst_defect = 0.0;  // max |tau - tau_bar|
  std::size_t pairs = 0;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // (index on line side, index on other side list)
};

/// Triangle v0 << v1 << v2 given by sides as in SampledTriangle, with the
/// side `line_side` (0, 1 or 2) on a line. Compares tau and <= between points
/// of that side and points of the other two sides with the comparison triangle.
template <LorentzQuery S>
SidesEqualReport sides_equal_check(const S& space, const SampledTriangle<PointOf<S>>& tri, int line_side,
                                   double tol = 1e-9) {
  if (line_side < 0 || line_side > 2) throw PreconditionError("sides_equal: bad side index");
  const auto& v0 = tri.sides[0].front();
  const auto& v1 = tri.sides[1].front();
  const auto& v2 = tri.sides[1].back();
  const auto planted = realize_triangle(SideTriple::chain(space.tau(v0, v1), space.tau(v1, v2), space.tau(v0, v2)));
  auto bar = [&](int k, std::size_t n) {
    const auto [i, j] = detail::kSideLabels[k];
    return comparison_point(planted, i, j, space.tau(tri.sides[k].front(), tri.sides[k][n]));
  };
  MinkowskiSpace flat;
  SidesEqualReport r;
  const auto& ls = tri.sides[line_side];
  std::size_t other_index = 0;
  for (int k = 0; k < 3; ++k) {
    if (k == line_side) continue;
    for (std::size_t n = 0; n < tri.sides[k].size(); ++n, ++other_index) {
      const auto q2 = tri.sides[k][n];
      const auto q2b = bar(k, n);
      for (std::size_t m = 0; m < ls.size(); ++m) {
        const auto q1b = bar(line_side, m);
        for (int dir = 0; dir < 2; ++dir) {
          const auto& a = dir ? q2 : ls[m];
          const auto& b = dir ? ls[m] : q2;
          const auto& ab = dir ? q2b : q1b;
          const auto& bb = dir ? q1b : q2b;
          const double defect = std::abs(space.tau(a, b) - tau_minkowski(ab, bb));
          const bool rel_ok = space.causal(a, b) == flat.causal(ab, bb) ||
                              std::abs((bb.t - ab.t) - std::abs(bb.x - ab.x)) <= tol;
          ++r.pairs;
          r.worst_defect = std::max(r.worst_defect, defect);
          if ((defect > tol || !rel_ok) && r.holds) {
            r.holds = false;
            r.witness = std::make_pair(m, other_index);
          }
        }
      }
    }
  }
  return r;
}

}  // namespace lorentz
