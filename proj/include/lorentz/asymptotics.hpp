#pragma once

// Lines, asymptotes to a line, the timelike co-ray condition, asymptotic
// lines and Busemann values.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lorentz/chains.hpp"
#include "lorentz/comparison.hpp"
#include "lorentz/core.hpp"
#include "lorentz/model_spaces.hpp"

namespace lorentz {

enum class Direction { future, past };

inline const char* to_string(Direction d) { return d == Direction::future ? "future" : "past"; }

// ---------------------------------------------------------------------------
// Line descriptors
// ---------------------------------------------------------------------------

/// A sampled timelike line with its parameter table. Parameters increase
/// along the chain; the anchor is the knot with parameter 0.
template <class P>
struct LineDescriptor {
  Chain<P> chain;
  std::vector<double> tau_params;
  std::size_t anchor = 0;

  std::size_t size() const { return chain.size(); }
  double param_min() const { return tau_params.front(); }
  double param_max() const { return tau_params.back(); }

  /// Index of the knot whose parameter is within `tol` of s.
  std::optional<std::size_t> find(double s, double tol = 1e-9) const {
    auto it = std::lower_bound(tau_params.begin(), tau_params.end(), s - tol);
    if (it == tau_params.end() || *it > s + tol) return std::nullopt;
    return std::size_t(it - tau_params.begin());
  }

  /// Knot with parameter closest to s.
  std::size_t nearest(double s) const {
    auto it = std::lower_bound(tau_params.begin(), tau_params.end(), s);
    if (it == tau_params.end()) return tau_params.size() - 1;
    const std::size_t i = std::size_t(it - tau_params.begin());
    if (i > 0 && s - tau_params[i - 1] < *it - s) return i - 1;
    return i;
  }

  const P& at(double s) const {
    const auto i = find(s);
    if (!i) throw PreconditionError("line has no knot at parameter " + std::to_string(s));
    return chain[*i];
  }
};

/// Wraps a chain as a line in tau-arclength from `anchor`; throws unless the
/// chain is timelike and tau-additive on all pairs.
template <LorentzQuery S>
LineDescriptor<PointOf<S>> make_line(const S& space, const Chain<PointOf<S>>& chain, std::size_t anchor,
                                     std::optional<double> tol = std::nullopt) {
  if (anchor >= chain.size()) throw PreconditionError("line anchor out of range");
  auto tp = reparametrize_tau_arclength(space, chain);
  const double off = tp.params[anchor];
  for (double& s : tp.params) s -= off;
  tp.params[anchor] = 0.0;
  const LineCheck lc = is_line(space, chain, std::nullopt, tol);
  if (!lc.is_line)
    throw PreconditionError("chain is not a line: tau-additivity fails at (" +
                            std::to_string(lc.first_failure->first) + "," +
                            std::to_string(lc.first_failure->second) + ")");
  return {std::move(tp.points), std::move(tp.params), anchor};
}

namespace detail {
inline std::vector<double> knot_params(double s_min, double s_max, double step) {
  if (!(step > 0.0)) throw PreconditionError("knot step must be positive");
  if (s_min > 0.0 || s_max < 0.0) throw PreconditionError("line extent must contain parameter 0");
  std::vector<double> out;
  const auto k0 = static_cast<long>(std::ceil(s_min / step - 1e-9));
  const auto k1 = static_cast<long>(std::floor(s_max / step + 1e-9));
  for (long k = k0; k <= k1; ++k) out.push_back(double(k) * step);
  return out;
}
}  // namespace detail

/// The vertical line t -> (t, x) of a product, knots at multiples of `step`.
inline LineDescriptor<ProductPoint> vertical_line(const ProductSpace& space, std::size_t x, double s_min,
                                                  double s_max, double step) {
  if (x >= space.factor().size()) throw PreconditionError("vertical_line: factor index out of range");
  LineDescriptor<ProductPoint> out;
  out.tau_params = detail::knot_params(s_min, s_max, step);
  for (std::size_t i = 0; i < out.tau_params.size(); ++i) {
    out.chain.push_back({out.tau_params[i], x});
    if (out.tau_params[i] == 0.0) out.anchor = i;
  }
  return out;
}

/// The straight line s -> origin + s*u in Minkowski space, u the unit
/// future vector of the given rapidity.
inline LineDescriptor<MinkowskiPoint> straight_line(const MinkowskiPoint& origin, double rapidity_value,
                                                    double s_min, double s_max, double step) {
  const MinkowskiPoint u{std::cosh(rapidity_value), std::sinh(rapidity_value)};
  LineDescriptor<MinkowskiPoint> out;
  out.tau_params = detail::knot_params(s_min, s_max, step);
  for (std::size_t i = 0; i < out.tau_params.size(); ++i) {
    out.chain.push_back(origin + out.tau_params[i] * u);
    if (out.tau_params[i] == 0.0) out.anchor = i;
  }
  return out;
}

/// x is in I(gamma): some line knot lies in its chronological past and some
/// in its chronological future.
template <LorentzQuery S>
bool in_i_gamma(const S& space, const LineDescriptor<PointOf<S>>& line, const PointOf<S>& x) {
  return space.timelike(line.chain.front(), x) && space.timelike(x, line.chain.back());
}

// ---------------------------------------------------------------------------
// Maximizers and points at tau-parameters
// ---------------------------------------------------------------------------

namespace detail {

template <class>
inline constexpr bool always_false = false;

template <LorentzQuery S>
Chain<PointOf<S>> maximizer(const S& space, const PointOf<S>& a, const PointOf<S>& b) {
  if constexpr (std::is_same_v<S, FiniteLorentzSpace>) {
    return maximize_tau(space, a, b).chain;
  } else if constexpr (GeodesicSpace<S>) {
    return space.realizer(a, b);
  } else {
    static_assert(always_false<S>, "space cannot produce maximizers");
  }
}

/// Point at tau-parameter u from the start of maximizer m. Geodesic spaces
/// interpolate; finite spaces take the vertex with nearest cumulative tau.
template <LorentzQuery S>
PointOf<S> point_at_tau(const S& space, const Chain<PointOf<S>>& m, double u) {
  if constexpr (GeodesicSpace<S>) {
    const double total = space.tau(m.front(), m.back());
    if (!(total > 0.0)) return m.front();
    return space.point_along(m.front(), m.back(), std::clamp(u / total, 0.0, 1.0));
  } else {
    double acc = 0.0, best_gap = std::abs(u);
    std::size_t best = 0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      acc += space.tau(m[i], m[i + 1]);
      if (std::abs(acc - u) < best_gap) {
        best_gap = std::abs(acc - u);
        best = i + 1;
      }
    }
    return m[best];
  }
}

template <class P>
Chain<P> reversed(Chain<P> c) {
  std::reverse(c.begin(), c.end());
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Asymptotes
// ---------------------------------------------------------------------------

struct AsymptoteOptions {
  double knot_step = 0.25;  // spacing h of the limit knots in tau-parameter
  double extent = 4.0;      // limit chain covers tau-parameters [0, extent]
  double mesh = 0.0;        // grid mesh of the sample; 0 for exact spaces
  /// Threshold below which a step counts as null; default 10 x mesh.
  std::optional<double> tol_null;
  /// Minkowski only: use the exact limit (parallel translate of the line).
  bool analytic = true;

  double null_threshold() const { return tol_null.value_or(mesh > 0.0 ? 10.0 * mesh : kEps); }
};

/// Geometric horizon schedule t_n = t1 * 2^(n-1).
inline std::vector<double> geometric_horizons(double t1 = 1.0, int n = 8) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(t1 * std::ldexp(1.0, k));
  return out;
}

template <class P>
struct FamilyMember {
  double horizon = 0.0;
  Chain<P> chain;  // maximizer between p and gamma(+-horizon), in causal order
};

template <class P>
struct AsymptoteResult {
  P p{};
  Direction direction = Direction::future;
  std::vector<FamilyMember<P>> family;
  /// Limit chain in causal order; params are signed tau offsets from p.
  Chain<P> limit;
  std::vector<double> limit_params;
  std::vector<double> step_tau;  // tau of consecutive limit steps
  bool stable = false;
  double max_movement = 0.0;  // knot movement between the last two horizons
  bool is_timelike = false;
  double min_step_tau = 0.0;  // over the strided timelike check
  std::vector<std::size_t> null_witnesses;  // limit indices starting a null-leaning step
};

namespace detail {

template <LorentzQuery S>
void check_horizons(const LineDescriptor<PointOf<S>>& line, const std::vector<double>& horizons, Direction dir) {
  if (horizons.empty()) throw PreconditionError("no horizons given");
  for (std::size_t i = 0; i + 1 < horizons.size(); ++i)
    if (!(horizons[i] < horizons[i + 1])) throw PreconditionError("horizons must be strictly increasing");
  for (double t : horizons) {
    if (!(t > 0.0)) throw PreconditionError("horizons must be positive");
    if (!line.find(dir == Direction::future ? t : -t))
      throw PreconditionError("horizon " + std::to_string(t) + " exhausts the line sample");
  }
}

/// Strided null test on the limit chain: steps of at least 2 x tol_null in
/// parameter, so grid-scale knots are not misread as null.
template <LorentzQuery S>
void timelike_check(const S& space, AsymptoteResult<PointOf<S>>& r, double tol_null) {
  r.min_step_tau = std::numeric_limits<double>::infinity();
  r.null_witnesses.clear();
  const std::size_t n = r.limit.size();
  if (n < 2) {
    r.is_timelike = false;
    return;
  }
  std::size_t stride = 1;
  const double h = std::abs(r.limit_params[1] - r.limit_params[0]);
  if (h > 0.0) stride = std::max<std::size_t>(1, std::size_t(std::ceil(2.0 * tol_null / h - 1e-9)));
  stride = std::min(stride, n - 1);
  for (std::size_t i = 0; i + stride < n; i += stride) {
    const double t = space.timelike(r.limit[i], r.limit[i + stride]) ? space.tau(r.limit[i], r.limit[i + stride]) : 0.0;
    r.min_step_tau = std::min(r.min_step_tau, t);
    if (!(t > tol_null)) r.null_witnesses.push_back(i);
  }
  r.is_timelike = r.null_witnesses.empty();
}

}  // namespace detail

/// Asymptote to `line` through p: maximizers from p to gamma(t_n) (future)
/// or from gamma(-t_n) to p (past), and their limit at fixed tau knots.
template <LorentzQuery S>
AsymptoteResult<PointOf<S>> build_asymptote(const S& space, const LineDescriptor<PointOf<S>>& line,
                                            const PointOf<S>& p, Direction dir,
                                            const std::vector<double>& horizons,
                                            const AsymptoteOptions& opt = {}) {
  using P = PointOf<S>;
  if (!in_i_gamma(space, line, p)) throw PreconditionError("point is not in I(gamma)");
  detail::check_horizons<S>(line, horizons, dir);
  const bool fut = dir == Direction::future;
  AsymptoteResult<P> r;
  r.p = p;
  r.direction = dir;
  std::vector<double> totals;
  for (double t : horizons) {
    const P& g = line.at(fut ? t : -t);
    if (fut ? !space.timelike(p, g) : !space.timelike(g, p))
      throw PreconditionError("point is not timelike related to gamma at horizon " + std::to_string(t));
    r.family.push_back({t, fut ? detail::maximizer(space, p, g) : detail::maximizer(space, g, p)});
    totals.push_back(fut ? space.tau(p, g) : space.tau(g, p));
  }

  // knots away from p along a maximizer, oriented p-first
  auto oriented = [&](std::size_t n) { return fut ? r.family[n].chain : detail::reversed(r.family[n].chain); };
  const std::size_t top = r.family.size() - 1;
  std::vector<P> knots;
  std::vector<double> params;

  if constexpr (std::is_same_v<S, MinkowskiSpace>) {
    if (opt.analytic) {
      const double span = line.param_max() - line.param_min();
      const MinkowskiPoint u = (1.0 / span) * (line.chain.back() - line.chain.front());
      const auto K = std::size_t(std::floor(opt.extent / opt.knot_step + 1e-9));
      for (std::size_t k = 0; k <= K; ++k) {
        const double s = double(k) * opt.knot_step;
        knots.push_back(p + (fut ? s : -s) * u);
        params.push_back(s);
      }
      r.stable = true;
    }
  }

  if (knots.empty()) {
    if constexpr (std::is_same_v<S, FiniteLorentzSpace>) {
      // common initial segment of the two highest-horizon maximizers
      const Chain<P> a = oriented(top);
      const Chain<P> b = top > 0 ? oriented(top - 1) : a;
      double acc = 0.0;
      for (std::size_t i = 0; i < std::min(a.size(), b.size()) && a[i] == b[i]; ++i) {
        if (i > 0) acc += fut ? space.tau(a[i - 1], a[i]) : space.tau(a[i], a[i - 1]);
        knots.push_back(a[i]);
        params.push_back(acc);
      }
      r.stable = top > 0 && knots.size() >= 2;
    } else {
      const double reach = top > 0 ? totals[top - 1] : totals[top];
      const double extent = std::min(opt.extent, reach);
      const auto K = std::size_t(std::floor(extent / opt.knot_step + 1e-9));
      const double movement_tol = opt.mesh > 0.0 ? opt.mesh : kEps;
      for (std::size_t k = 0; k <= K; ++k) {
        const double u = double(k) * opt.knot_step;
        auto at = [&](std::size_t n) {
          const Chain<P>& m = r.family[n].chain;
          return detail::point_at_tau(space, m, fut ? u : totals[n] - u);
        };
        knots.push_back(at(top));
        if (top > 0) r.max_movement = std::max(r.max_movement, space.distance(knots.back(), at(top - 1)));
        params.push_back(u);
      }
      r.stable = top > 0 && r.max_movement < movement_tol;
    }
  }

  if (!fut) {
    std::reverse(knots.begin(), knots.end());
    std::reverse(params.begin(), params.end());
    for (double& s : params) s = -s;
  }
  r.limit = std::move(knots);
  r.limit_params = std::move(params);
  for (std::size_t i = 0; i + 1 < r.limit.size(); ++i) r.step_tau.push_back(space.tau(r.limit[i], r.limit[i + 1]));
  detail::timelike_check(space, r, opt.null_threshold());
  return r;
}

struct TcrcWitness {
  std::size_t probe = 0;
  std::size_t knot = 0;  // index into that probe's limit chain
  double step_tau = 0.0;
};

struct TcrcReport {
  bool all_timelike = true;
  std::size_t probes = 0;
  std::vector<TcrcWitness> witnesses;
};

/// Builds future asymptotes at every probe and reports null-leaning limits.
template <LorentzQuery S>
TcrcReport check_tcrc(const S& space, const LineDescriptor<PointOf<S>>& line, const std::vector<PointOf<S>>& probes,
                      const std::vector<double>& horizons, const AsymptoteOptions& opt = {}) {
  TcrcReport out;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto r = build_asymptote(space, line, probes[i], Direction::future, horizons, opt);
    ++out.probes;
    if (r.limit.size() < 2) {
      out.witnesses.push_back({i, 0, 0.0});
      continue;
    }
    for (std::size_t k : r.null_witnesses) {
      const std::size_t next = std::min(r.limit.size() - 1, k + 1);
      out.witnesses.push_back({i, k, space.tau(r.limit[k], r.limit[next])});
    }
  }
  out.all_timelike = out.witnesses.empty();
  return out;
}

/// Growth certificate for infinite tau-length: L(2H) - L(H) >= 0.9 H along
/// the limit chain (parameters measured from p).
template <class P>
bool check_asymptote_complete(const AsymptoteResult<P>& r, double H) {
  if (!r.is_timelike) throw PreconditionError("asymptote is not timelike");
  if (!(H > 0.0)) throw PreconditionError("growth horizon must be positive");
  double reach = 0.0;
  for (double s : r.limit_params) reach = std::max(reach, std::abs(s));
  if (reach + 1e-9 < 2.0 * H) return false;
  auto length_to = [&](double bound) {
    double L = 0.0;
    for (std::size_t i = 0; i < r.step_tau.size(); ++i) {
      const double far = std::max(std::abs(r.limit_params[i]), std::abs(r.limit_params[i + 1]));
      if (far <= bound + 1e-9) L += r.step_tau[i];
    }
    return L;
  };
  return length_to(2.0 * H) - length_to(H) >= 0.9 * H;
}

/// Concatenates the past and future asymptotes through p into a line
/// parametrized by tau from p, verified by tau-additivity on all pairs.
template <LorentzQuery S>
LineDescriptor<PointOf<S>> join_asymptotic_line(const S& space, const AsymptoteResult<PointOf<S>>& future,
                                                const AsymptoteResult<PointOf<S>>& past,
                                                std::optional<double> tol = std::nullopt) {
  if (future.direction != Direction::future || past.direction != Direction::past)
    throw PreconditionError("join needs one future and one past asymptote");
  if (!(future.p == past.p)) throw PreconditionError("asymptotes start at different footpoints");
  if (!future.is_timelike || !past.is_timelike) throw PreconditionError("asymptotes must be timelike");
  LineDescriptor<PointOf<S>> out;
  out.chain = past.limit;
  out.tau_params = past.limit_params;
  out.anchor = out.chain.size() - 1;
  for (std::size_t i = 1; i < future.limit.size(); ++i) {
    out.chain.push_back(future.limit[i]);
    out.tau_params.push_back(future.limit_params[i]);
  }
  const LineCheck lc = is_line(space, out.chain, std::nullopt, tol);
  if (!lc.is_line)
    throw VerificationError("joined chain fails tau-additivity at (" + std::to_string(lc.first_failure->first) + "," +
                            std::to_string(lc.first_failure->second) + "), defect " +
                            std::to_string(lc.worst_defect));
  return out;
}

// ---------------------------------------------------------------------------
// Busemann values
// ---------------------------------------------------------------------------

struct BusemannSample {
  double t = 0.0;
  double value = 0.0;  // t - tau(p, gamma(t))
};

template <class P>
struct BusemannEstimate {
  P p{};
  std::vector<BusemannSample> samples;
  double value = 0.0;
  double error_bound = std::numeric_limits<double>::infinity();
  double transverse_sq = 0.0;  // c^2 of the last fit
  bool within_tolerance = false;
};

/// b+(p) from t - tau(p, gamma(t)) at the horizons where p << gamma(t). The
/// last two samples are fitted to t - sqrt((t-b)^2 - c^2).
template <LorentzQuery S>
BusemannEstimate<PointOf<S>> busemann_value(const S& space, const LineDescriptor<PointOf<S>>& line,
                                            const PointOf<S>& p, const std::vector<double>& horizons,
                                            double requested_tol = 1e-2) {
  detail::check_horizons<S>(line, horizons, Direction::future);
  BusemannEstimate<PointOf<S>> out;
  out.p = p;
  for (double t : horizons) {
    const auto& g = line.at(t);
    if (!space.timelike(p, g)) continue;
    out.samples.push_back({t, t - space.tau(p, g)});
  }
  if (out.samples.empty()) throw PreconditionError("point is not in the past of the sampled line");
  for (std::size_t i = 0; i + 1 < out.samples.size(); ++i) {
    const double a = out.samples[i].value, b = out.samples[i + 1].value;
    if (b > a + 1e-9 * std::max(1.0, std::abs(a)))
      throw VerificationError("Busemann samples increase between horizons " + std::to_string(out.samples[i].t) +
                              " and " + std::to_string(out.samples[i + 1].t));
  }
  const auto& last = out.samples.back();
  if (out.samples.size() < 2) {
    out.value = last.value;
  } else {
    const auto& prev = out.samples[out.samples.size() - 2];
    const double t1 = prev.t, t2 = last.t;
    const double tau1 = t1 - prev.value, tau2 = t2 - last.value;
    double b = 0.5 * (t1 + t2) - (tau1 - tau2) * (tau1 + tau2) / (2.0 * (t1 - t2));
    b = std::min(b, last.value);
    out.value = b;
    out.transverse_sq = std::max(0.0, (t2 - b - tau2) * (t2 - b + tau2));
    out.error_bound = out.transverse_sq / (2.0 * (t2 - b));
  }
  out.within_tolerance = out.error_bound <= requested_tol;
  return out;
}

/// Exact Busemann function of a straight Minkowski line: the Lorentzian
/// projection of p - o onto the line's unit direction.
inline double minkowski_busemann(const LineDescriptor<MinkowskiPoint>& line, const MinkowskiPoint& p) {
  const double span = line.param_max() - line.param_min();
  const MinkowskiPoint u = (1.0 / span) * (line.chain.back() - line.chain.front());
  const MinkowskiPoint v = p - line.chain[line.anchor];
  return v.t * u.t - v.x * u.x;
}

// ---------------------------------------------------------------------------
// Asymptotic lines in Busemann parametrization
// ---------------------------------------------------------------------------

struct BusemannLineOptions {
  std::vector<double> horizons = geometric_horizons();
  double knot_step = 0.25;  // knots at Busemann parameters k * knot_step
  double s_min = -2.0;
  double s_max = 2.0;
  double mesh = 0.0;
  double busemann_tol = 5e-2;
  bool analytic = true;  // exact asymptotes for straight Minkowski lines
};

template <class P>
struct AsymptoticLine {
  LineDescriptor<P> line;  // parameters are Busemann values
  BusemannEstimate<P> busemann;
};

/// The asymptotic line through p with knots at Busemann parameters, so that
/// knot s is alpha_p(s) and alpha_p(b+(p)) = p.
template <LorentzQuery S>
AsymptoticLine<PointOf<S>> busemann_asymptotic_line(const S& space, const LineDescriptor<PointOf<S>>& gamma,
                                                    const PointOf<S>& p, const BusemannLineOptions& opt = {}) {
  using P = PointOf<S>;
  if (!in_i_gamma(space, gamma, p)) throw PreconditionError("point is not in I(gamma)");
  AsymptoticLine<P> out;
  const auto params = detail::knot_params(opt.s_min, opt.s_max, opt.knot_step);
  out.line.tau_params = params;
  out.line.anchor = std::size_t(std::find(params.begin(), params.end(), 0.0) - params.begin());

  if constexpr (std::is_same_v<S, MinkowskiSpace>) {
    if (opt.analytic) {
      const double span = gamma.param_max() - gamma.param_min();
      const MinkowskiPoint u = (1.0 / span) * (gamma.chain.back() - gamma.chain.front());
      out.busemann.p = p;
      out.busemann.value = minkowski_busemann(gamma, p);
      out.busemann.error_bound = 0.0;
      out.busemann.within_tolerance = true;
      for (double s : params) out.line.chain.push_back(p + (s - out.busemann.value) * u);
      return out;
    }
  }

  out.busemann = busemann_value(space, gamma, p, opt.horizons, opt.busemann_tol);
  const double b = out.busemann.value;
  // highest horizons where p is timelike related in each direction
  auto pick = [&](bool fut) -> std::pair<Chain<P>, double> {
    for (auto it = opt.horizons.rbegin(); it != opt.horizons.rend(); ++it) {
      const auto i = gamma.find(fut ? *it : -*it);
      if (!i) continue;
      const P& g = gamma.chain[*i];
      if (fut && space.timelike(p, g)) return {detail::maximizer(space, p, g), space.tau(p, g)};
      if (!fut && space.timelike(g, p)) return {detail::maximizer(space, g, p), space.tau(g, p)};
    }
    throw PreconditionError(std::string("no ") + (fut ? "future" : "past") + " horizon is timelike related to the point");
  };
  const auto [fm, ftau] = pick(true);
  const auto [pm, ptau] = pick(false);
  for (double s : params) {
    const double u = s - b;
    if (u >= 0.0) {
      if (u > ftau) throw PreconditionError("line extent exceeds the future maximizer");
      out.line.chain.push_back(detail::point_at_tau(space, fm, u));
    } else {
      if (-u > ptau) throw PreconditionError("line extent exceeds the past maximizer");
      out.line.chain.push_back(detail::point_at_tau(space, pm, ptau + u));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verticality of planted comparison points
// ---------------------------------------------------------------------------

struct VerticalityStep {
  double horizon = 0.0;
  MinkowskiPoint c_bar;
  double ratio = 0.0;  // |x(c_bar)| / t(c_bar)
  double delta = 0.0;  // |tau(a,c) - tau(b,c) - dt|
  double angle = 0.0;  // hyperbolic angle of a_bar c_bar with the time axis
};

struct VerticalityProfile {
  double dt = 0.0;  // b+(b) - b+(a)
  MinkowskiPoint a_bar, b_bar;
  std::vector<VerticalityStep> steps;
  bool ratios_decreasing = false;
  /// At the last horizon: delta < cosh(eps) - 1 together with angle < eps.
  bool bound_holds = false;
};

/// Plants a_bar = (0,0), b_bar = (dt, sqrt(dt^2 - tau(a,b)^2)) and c_bar_n
/// for c_n = gamma(t_n) on the time-axis side of the line a_bar b_bar.
template <LorentzQuery S>
VerticalityProfile verticality_profile(const S& space, const LineDescriptor<PointOf<S>>& gamma, const PointOf<S>& a,
                                       const PointOf<S>& b, const std::vector<double>& horizons, double eps,
                                       const BusemannLineOptions& opt = {}) {
  if (!space.timelike(a, b)) throw PreconditionError("verticality needs a << b");
  VerticalityProfile out;
  const double ba = busemann_value(space, gamma, a, opt.horizons, opt.busemann_tol).value;
  const double bb = busemann_value(space, gamma, b, opt.horizons, opt.busemann_tol).value;
  out.dt = bb - ba;
  const double tab = space.tau(a, b);
  if (out.dt < tab) out.dt = tab;  // b+ differences dominate tau up to estimation error
  out.a_bar = {0.0, 0.0};
  out.b_bar = {out.dt, std::sqrt(std::max(0.0, (out.dt - tab) * (out.dt + tab)))};
  const MinkowskiPoint up{1.0, 0.0};
  for (double t : horizons) {
    const auto& c = gamma.at(t);
    if (!space.timelike(b, c)) throw PreconditionError("b is not in the past of gamma at horizon " + std::to_string(t));
    const double tac = space.tau(a, c), tbc = space.tau(b, c);
    VerticalityStep st;
    st.horizon = t;
    st.c_bar = plant_third_toward(out.a_bar, out.b_bar, tac, tbc, up);
    st.ratio = std::abs(st.c_bar.x) / st.c_bar.t;
    st.delta = std::abs(tac - tbc - out.dt);
    st.angle = std::abs(std::atanh(st.c_bar.x / st.c_bar.t));
    out.steps.push_back(st);
  }
  out.ratios_decreasing = true;
  for (std::size_t i = 0; i + 1 < out.steps.size(); ++i)
    if (out.steps[i + 1].ratio > out.steps[i].ratio + 1e-12) out.ratios_decreasing = false;
  if (!out.steps.empty()) {
    const auto& l = out.steps.back();
    out.bound_holds = l.delta < std::cosh(eps) - 1.0 && l.angle < eps;
  }
  return out;
}

}  // namespace lorentz
