#pragma once

// Parallel timelike lines: the c-functions, parallel realisations in the
// Minkowski plane, synchronization, uniqueness and weak transitivity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/asymptotics.hpp"
#include "lorentz/comparison.hpp"
#include "lorentz/core.hpp"

namespace lorentz {

// ---------------------------------------------------------------------------
// c-functions
// ---------------------------------------------------------------------------

enum class CState : std::uint8_t {
  undefined,  // the defining causal relation fails
  real,
  complex,    // negative radicand
  edge        // c^N minimum attained at the first grid value
};

struct CValue {
  double value = 0.0;
  CState state = CState::undefined;
};

struct CSummary {
  std::size_t count = 0;  // real entries
  std::size_t flagged = 0;  // complex or edge entries
  double mean = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double spread() const { return count ? max - min : 0.0; }
};

/// c_ab(s,t), c_ba(s,t) on the grid s_params x t_params (row-major),
/// c^N_a+ on s_params and c^N_b+ on t_params. Parameters of beta are its
/// stored parameters plus `beta_shift`.
struct CFunctionTable {
  std::vector<double> s_params, t_params;
  double beta_shift = 0.0;
  std::vector<CValue> c_ab, c_ba, cn_a, cn_b;
  CSummary ab, ba, na, nb;

  const CValue& ab_at(std::size_t i, std::size_t j) const { return c_ab[i * t_params.size() + j]; }
  const CValue& ba_at(std::size_t i, std::size_t j) const { return c_ba[i * t_params.size() + j]; }
};

namespace detail {

inline CSummary summarize(const std::vector<CValue>& v) {
  CSummary s;
  double sum = 0.0;
  for (const auto& c : v) {
    if (c.state == CState::complex || c.state == CState::edge) ++s.flagged;
    if (c.state != CState::real) continue;
    ++s.count;
    sum += c.value;
    s.min = std::min(s.min, c.value);
    s.max = std::max(s.max, c.value);
  }
  if (s.count) s.mean = sum / double(s.count);
  return s;
}

/// sqrt(dt^2 - tau^2), complex-flagged when the radicand is negative.
inline CValue c_entry(double dt, double tau) {
  const double r = (dt - tau) * (dt + tau);
  if (r < -kEps * std::max(1.0, dt * dt)) return {std::sqrt(-r), CState::complex};
  return {std::sqrt(std::max(0.0, r)), CState::real};
}

template <class P>
std::vector<std::optional<std::size_t>> lookup(const LineDescriptor<P>& line, const std::vector<double>& params,
                                               double shift) {
  std::vector<std::optional<std::size_t>> out;
  out.reserve(params.size());
  for (double s : params) out.push_back(line.find(s - shift));
  return out;
}

template <class P>
void require_parametrized(const LineDescriptor<P>& l) {
  if (l.chain.size() < 2 || l.chain.size() != l.tau_params.size())
    throw PreconditionError("line is not parametrized");
  for (std::size_t i = 0; i + 1 < l.tau_params.size(); ++i)
    if (!(l.tau_params[i] < l.tau_params[i + 1])) throw PreconditionError("line parameters must increase");
}

/// Least-squares shift from timelike c entries: with beta(t) -> (t + b, c)
/// every entry satisfies -c_raw^2 = (b^2 - c^2) + 2 (t - s) b.
inline std::optional<double> fit_shift(const CFunctionTable& T) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  auto add = [&](const std::vector<CValue>& v) {
    for (std::size_t i = 0; i < T.s_params.size(); ++i)
      for (std::size_t j = 0; j < T.t_params.size(); ++j) {
        const CValue& c = v[i * T.t_params.size() + j];
        const double D = T.t_params[j] - T.s_params[i];
        if (c.state != CState::real || !(c.value < std::abs(D) - kEps)) continue;
        const double x = 2.0 * D, y = -c.value * c.value;
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
  };
  add(T.c_ab);
  add(T.c_ba);
  const double den = n * sxx - sx * sx;
  if (n < 2 || !(den > kEps * std::max(1.0, n * sxx))) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

}  // namespace detail

/// The four c-functions of alpha and beta. Empty grids default to the knot
/// parameters of alpha (s) and of the shifted beta (t).
template <LorentzQuery S>
CFunctionTable c_functions(const S& space, const LineDescriptor<PointOf<S>>& alpha,
                           const LineDescriptor<PointOf<S>>& beta, std::vector<double> s_params = {},
                           std::vector<double> t_params = {}, double beta_shift = 0.0) {
  detail::require_parametrized(alpha);
  detail::require_parametrized(beta);
  if (s_params.empty()) s_params = alpha.tau_params;
  if (t_params.empty())
    for (double t : beta.tau_params) t_params.push_back(t + beta_shift);
  CFunctionTable out;
  out.s_params = s_params;
  out.t_params = t_params;
  out.beta_shift = beta_shift;
  const auto as = detail::lookup(alpha, s_params, 0.0);
  const auto bt = detail::lookup(beta, t_params, beta_shift);
  const std::size_t ns = s_params.size(), nt = t_params.size();
  out.c_ab.assign(ns * nt, {});
  out.c_ba.assign(ns * nt, {});
  out.cn_a.assign(ns, {});
  out.cn_b.assign(nt, {});
  for (std::size_t i = 0; i < ns; ++i) {
    if (!as[i]) continue;
    const auto& a = alpha.chain[*as[i]];
    for (std::size_t j = 0; j < nt; ++j) {
      if (!bt[j]) continue;
      const auto& b = beta.chain[*bt[j]];
      const double s = s_params[i], t = t_params[j];
      if (space.causal(a, b)) out.c_ab[i * nt + j] = detail::c_entry(t - s, space.tau(a, b));
      if (space.causal(b, a)) out.c_ba[i * nt + j] = detail::c_entry(s - t, space.tau(b, a));
    }
  }
  // c^N as minima over all knots of the other line; the causal future of a
  // point meets a line in a final segment, so the first related knot is found
  // by bisection. A minimum at the first knot is an edge value.
  auto first_related = [&](const auto& from, const auto& line, double shift, double origin) {
    CValue v;
    const auto& ks = line.chain;
    const std::size_t k = std::size_t(
        std::partition_point(ks.begin(), ks.end(), [&](const auto& y) { return !space.causal(from, y); }) -
        ks.begin());
    if (k == ks.size()) return v;
    v = {line.tau_params[k] + shift - origin, k == 0 ? CState::edge : CState::real};
    return v;
  };
  for (std::size_t i = 0; i < ns; ++i)
    if (as[i]) out.cn_a[i] = first_related(alpha.chain[*as[i]], beta, beta_shift, s_params[i]);
  for (std::size_t j = 0; j < nt; ++j)
    if (bt[j]) out.cn_b[j] = first_related(beta.chain[*bt[j]], alpha, 0.0, t_params[j]);
  out.ab = detail::summarize(out.c_ab);
  out.ba = detail::summarize(out.c_ba);
  out.na = detail::summarize(out.cn_a);
  out.nb = detail::summarize(out.cn_b);
  return out;
}

// ---------------------------------------------------------------------------
// Parallel realisations
// ---------------------------------------------------------------------------

struct RealisationCheck {
  std::size_t pairs = 0;
  double tau_defect = 0.0;  // max |tau_X - tau of the images|
  std::size_t tau_violations = 0;  // beyond the near-null aware bound
  std::size_t leq_mismatches = 0;
  std::size_t timelike_mismatches = 0;
  bool verified() const { return tau_violations == 0 && leq_mismatches == 0 && timelike_mismatches == 0; }
};

/// alpha(s) -> (s, 0), beta(t) -> (t + shift_b, distance_c).
template <class P>
struct ParallelRealisation {
  LineDescriptor<P> line_a, line_b;
  double shift_b = 0.0;
  double distance_c = 0.0;
  RealisationCheck check;

  MinkowskiPoint image_a(double s) const { return {s, 0.0}; }
  MinkowskiPoint image_b(double t) const { return {t + shift_b, distance_c}; }
};

struct ParallelOptions {
  double tolerance = 1e-9;
  std::vector<double> s_params;  // grids for c_functions; empty = all knots
  std::vector<double> t_params;
  bool force_zero_shift = false;
  bool verify = true;
};

template <class P>
struct ParallelResult {
  bool parallel = false;
  double distance_c = 0.0;
  double shift = 0.0;
  double max_spread = 0.0;
  double max_disagreement = 0.0;  // between the four means
  std::string reason;  // empty when parallel
  CFunctionTable table;  // in synchronized parameters
  std::optional<ParallelRealisation<P>> realisation;
};

/// Compares the pulled-back tau and relations of the realisation with the
/// space on all knot pairs. A c-error e moves tau by up to sqrt(2 c e) near
/// the light cone, so the tau bound is tol + sqrt(2 c tol).
template <LorentzQuery S>
RealisationCheck verify_realisation(const S& space, const ParallelRealisation<PointOf<S>>& r, double tol) {
  RealisationCheck out;
  const double c = r.distance_c;
  const double bound = tol + std::sqrt(2.0 * c * tol);
  auto one = [&](const PointOf<S>& x, const PointOf<S>& y, const MinkowskiPoint& X, const MinkowskiPoint& Y) {
    ++out.pairs;
    const double dt = Y.t - X.t, dx = std::abs(Y.x - X.x);
    const double d = std::abs(space.tau(x, y) - tau_minkowski(X, Y));
    out.tau_defect = std::max(out.tau_defect, d);
    if (d > bound) ++out.tau_violations;
    if (std::abs(dt - dx) > tol) {
      if (space.causal(x, y) != (dt >= dx)) ++out.leq_mismatches;
      if (space.timelike(x, y) != (dt > dx)) ++out.timelike_mismatches;
    }
  };
  for (std::size_t i = 0; i < r.line_a.size(); ++i)
    for (std::size_t j = 0; j < r.line_b.size(); ++j) {
      const auto A = r.image_a(r.line_a.tau_params[i]);
      const auto B = r.image_b(r.line_b.tau_params[j]);
      one(r.line_a.chain[i], r.line_b.chain[j], A, B);
      one(r.line_b.chain[j], r.line_a.chain[i], B, A);
    }
  return out;
}

/// The c-criterion: all four c-functions constant with a common value,
/// after recovering the shift that synchronizes beta with alpha.
template <LorentzQuery S>
ParallelResult<PointOf<S>> test_parallel(const S& space, const LineDescriptor<PointOf<S>>& alpha,
                                         const LineDescriptor<PointOf<S>>& beta, const ParallelOptions& opt = {}) {
  ParallelResult<PointOf<S>> out;
  const CFunctionTable raw = c_functions(space, alpha, beta, opt.s_params, opt.t_params, 0.0);
  // c^N_a+ = c - b and c^N_b+ = c + b for beta(t) -> (t + b, c); the c^N
  // are quantized to the knot spacing, so the timelike c entries refine it
  if (raw.na.count && raw.nb.count) out.shift = 0.5 * (raw.nb.mean - raw.na.mean);
  if (const auto fit = detail::fit_shift(raw)) out.shift = *fit;
  const double b = opt.force_zero_shift ? 0.0 : out.shift;
  std::vector<double> t_params = opt.t_params;
  for (double& t : t_params) t += b;
  out.table = b == 0.0 ? raw : c_functions(space, alpha, beta, opt.s_params, t_params, b);
  const auto& T = out.table;

  const CSummary* parts[4] = {&T.ab, &T.ba, &T.na, &T.nb};
  const char* names[4] = {"c_ab", "c_ba", "cN_a", "cN_b"};
  for (int k = 0; k < 4; ++k) {
    if (parts[k]->count == 0) {
      out.reason = std::string(names[k]) + " has no defined entries";
      return out;
    }
    out.max_spread = std::max(out.max_spread, parts[k]->spread());
  }
  for (int k = 0; k < 4; ++k)
    for (int l = k + 1; l < 4; ++l)
      out.max_disagreement = std::max(out.max_disagreement, std::abs(parts[k]->mean - parts[l]->mean));
  out.distance_c = (T.ab.mean * double(T.ab.count) + T.ba.mean * double(T.ba.count)) / double(T.ab.count + T.ba.count);

  if (out.max_spread > opt.tolerance) {
    out.reason = "c-function spread exceeds tolerance";
  } else if (out.max_disagreement > opt.tolerance) {
    out.reason = "c-function values disagree";
  } else {
    out.parallel = true;
    ParallelRealisation<PointOf<S>> r{alpha, beta, b, out.distance_c, {}};
    if (opt.verify) r.check = verify_realisation(space, r, opt.tolerance);
    out.realisation = std::move(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Strong causality trick
// ---------------------------------------------------------------------------

struct StrongCausalityReport {
  bool applicable = false;  // every sampled comparison angle <= tol_angle
  bool forced_equal = false;
  bool inconsistent = false;  // applicable, yet the lines separate beyond mesh
  double max_angle = 0.0;
  double max_gap = 0.0;
  std::size_t angles = 0;
  std::size_t unrelated_pairs = 0;
};

/// Two lines leaving x = alpha(0) = beta(0) with vanishing comparison angles
/// at x must coincide.
template <LorentzQuery S>
StrongCausalityReport strong_causality_trick_check(const S& space, const LineDescriptor<PointOf<S>>& alpha,
                                                   const LineDescriptor<PointOf<S>>& beta, double tol_angle,
                                                   double mesh) {
  const auto ia = alpha.find(0.0), ib = beta.find(0.0);
  if (!ia || !ib) throw PreconditionError("both lines need a knot at parameter 0");
  const auto& x = alpha.chain[*ia];
  if (space.distance(x, beta.chain[*ib]) > kEps) throw PreconditionError("lines do not start at a common point");
  StrongCausalityReport out;
  for (std::size_t i = *ia + 1; i < alpha.size(); ++i)
    for (std::size_t j = *ib + 1; j < beta.size(); ++j) {
      const auto& p = alpha.chain[i];
      const auto& q = beta.chain[j];
      if (space.distance(p, q) <= kEps) continue;
      if (!space.causal(p, q) && !space.causal(q, p)) {
        ++out.unrelated_pairs;
        continue;
      }
      const double w = comparison_angle(space, x, p, q).omega;
      out.max_angle = std::max(out.max_angle, w);
      ++out.angles;
    }
  for (std::size_t i = *ia; i < alpha.size(); ++i)
    if (const auto j = beta.find(alpha.tau_params[i]))
      out.max_gap = std::max(out.max_gap, space.distance(alpha.chain[i], beta.chain[*j]));
  out.applicable = out.unrelated_pairs == 0 && out.max_angle <= tol_angle;
  out.forced_equal = out.applicable && out.max_gap <= mesh;
  out.inconsistent = out.applicable && out.max_gap > mesh;
  return out;
}

// ---------------------------------------------------------------------------
// Uniqueness, synchronization, weak transitivity
// ---------------------------------------------------------------------------

/// Max distance between knots of two lines at matching synchronized
/// parameters (x's parameter + shift_x); nearest knot within half a spacing.
template <LorentzQuery S>
double synchronized_gap(const S& space, const LineDescriptor<PointOf<S>>& x, double shift_x,
                        const LineDescriptor<PointOf<S>>& y, double shift_y, double* witness_param = nullptr) {
  double gap = 0.0;
  const double half = y.size() > 1 ? 0.5 * (y.tau_params[1] - y.tau_params[0]) : 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = x.tau_params[i] + shift_x;
    const double sy = u - shift_y;
    if (sy < y.param_min() - half || sy > y.param_max() + half) continue;
    const std::size_t j = y.nearest(sy);
    if (std::abs(y.tau_params[j] - sy) > half + 1e-9) continue;
    const double d = space.distance(x.chain[i], y.chain[j]);
    if (d > gap) {
      gap = d;
      if (witness_param) *witness_param = u;
    }
  }
  return gap;
}

template <class P>
bool passes_through(const LorentzQuery auto& space, const LineDescriptor<P>& line, const P& p, double radius) {
  for (const auto& k : line.chain)
    if (space.distance(k, p) <= radius) return true;
  return false;
}

struct UniquenessReport {
  std::size_t distinct_count = 0;
  bool flagged = false;  // more than one distinct parallel
  std::vector<std::size_t> representative;  // class index per candidate
  double max_gap_between_classes = 0.0;
};

/// Groups candidate parallels to alpha through p by pointwise coincidence
/// (within `radius`) after synchronizing each with alpha.
template <LorentzQuery S>
UniquenessReport test_parallel_uniqueness(const S& space, const LineDescriptor<PointOf<S>>& alpha,
                                          const PointOf<S>& p,
                                          const std::vector<LineDescriptor<PointOf<S>>>& candidates,
                                          const ParallelOptions& opt, double radius) {
  std::vector<double> shifts;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto r = test_parallel(space, alpha, candidates[i], opt);
    if (!r.parallel) throw PreconditionError("candidate " + std::to_string(i) + " is not parallel: " + r.reason);
    if (!passes_through(space, candidates[i], p, std::max(radius, kEps)))
      throw PreconditionError("candidate " + std::to_string(i) + " does not pass through p");
    shifts.push_back(r.shift);
  }
  UniquenessReport out;
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::optional<std::size_t> cls;
    for (std::size_t k = 0; k < reps.size() && !cls; ++k) {
      const std::size_t j = reps[k];
      const double g = synchronized_gap(space, candidates[i], shifts[i], candidates[j], shifts[j]);
      if (g <= radius) cls = k;
      else out.max_gap_between_classes = std::max(out.max_gap_between_classes, g);
    }
    if (!cls) {
      cls = reps.size();
      reps.push_back(i);
    }
    out.representative.push_back(*cls);
  }
  out.distinct_count = reps.size();
  out.flagged = out.distinct_count > 1;
  return out;
}

struct SynchronizationReport {
  bool synchronized = false;
  double distance = 0.0;
  double shift = 0.0;  // shift the unforced c-criterion would recover
  std::string reason;
};

/// Asymptotes through p and q in Busemann parametrization are synchronised
/// parallel: c-criterion with zero shift.
template <LorentzQuery S>
SynchronizationReport test_two_asymptotes_synchronized(const S& space, const LineDescriptor<PointOf<S>>& gamma,
                                                       const PointOf<S>& p, const PointOf<S>& q,
                                                       const BusemannLineOptions& lopt, ParallelOptions popt) {
  const auto a = busemann_asymptotic_line(space, gamma, p, lopt);
  const auto b = busemann_asymptotic_line(space, gamma, q, lopt);
  popt.force_zero_shift = true;
  const auto r = test_parallel(space, a.line, b.line, popt);
  SynchronizationReport out;
  out.distance = r.distance_c;
  out.shift = r.shift;
  out.reason = r.reason;
  out.synchronized = r.parallel && std::abs(r.shift) <= popt.tolerance;
  if (r.parallel && !out.synchronized) out.reason = "recovered shift exceeds tolerance";
  return out;
}

struct TransitivityReport {
  bool holds = false;
  double max_gap = 0.0;
  double witness_param = 0.0;  // synchronized parameter of the largest gap
  std::size_t candidate = 0;   // the parallel to alpha through p that was used
};

/// alpha || beta and beta || gamma; the parallel to alpha through p on gamma
/// must be gamma itself.
template <LorentzQuery S>
TransitivityReport test_weak_transitivity(const S& space, const LineDescriptor<PointOf<S>>& alpha,
                                          const LineDescriptor<PointOf<S>>& beta,
                                          const LineDescriptor<PointOf<S>>& gamma, const PointOf<S>& p,
                                          const std::vector<LineDescriptor<PointOf<S>>>& candidates,
                                          const ParallelOptions& opt, double mesh) {
  if (!test_parallel(space, alpha, beta, opt).parallel) throw PreconditionError("alpha and beta are not parallel");
  if (!test_parallel(space, beta, gamma, opt).parallel) throw PreconditionError("beta and gamma are not parallel");
  if (!passes_through(space, gamma, p, std::max(mesh, kEps))) throw PreconditionError("p is not on gamma");
  const auto rg = test_parallel(space, alpha, gamma, opt);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!passes_through(space, candidates[i], p, std::max(mesh, kEps))) continue;
    const auto rc = test_parallel(space, alpha, candidates[i], opt);
    if (!rc.parallel) continue;
    TransitivityReport out;
    out.candidate = i;
    out.max_gap = synchronized_gap(space, candidates[i], rc.shift, gamma, rg.shift, &out.witness_param);
    out.holds = rg.parallel && out.max_gap <= mesh;
    return out;
  }
  throw PreconditionError("no candidate parallel to alpha passes through p");
}

}  // namespace lorentz
