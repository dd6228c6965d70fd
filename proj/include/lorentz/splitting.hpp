#pragma once

// The spacelike slice of a line, the splitting map f(s, p) = alpha_p(s) and
// its verification, Cauchy crossings, the (TC) probe check and the
// Alexandrov quadruple test on the slice.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lorentz/asymptotics.hpp"
#include "lorentz/core.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/threads.hpp"

namespace lorentz {

struct SliceOptions {
  BusemannLineOptions line;  // knots, extent, horizons, mesh, Busemann tolerance
  /// Parallelity tolerance; default 3 x (mesh + largest Busemann error bound).
  std::optional<double> parallel_tol;
  /// Use every c_stride-th knot in the c-function grids.
  std::size_t c_stride = 1;
};

template <class P>
struct SpacelikeSlice {
  std::vector<P> members;  // footpoints alpha_p(0)
  std::vector<AsymptoticLine<P>> lines;
  Table<double> d;  // symmetrized parallel-line distances
  std::vector<std::size_t> seed_member;  // member index per seed
  double mesh = 0.0;
  double parallel_tol = 0.0;
  double busemann_error = 0.0;  // largest error bound over the seeds
  double footpoint_busemann = 0.0;  // max |b+| over members
  double asymmetry = 0.0;  // max |d(i,j) - d(j,i)| before symmetrization
  double triangle_excess = 0.0;  // max d(i,k) - d(i,j) - d(j,k)
  std::size_t zero_distances = 0;  // pairs of distinct members at distance 0
  std::size_t nonparallel_pairs = 0;
  bool metric_ok = false;

  std::size_t size() const { return members.size(); }
};

namespace detail {

inline std::vector<double> strided(const std::vector<double>& v, std::size_t stride) {
  std::vector<double> out;
  stride = std::max<std::size_t>(1, stride);
  for (std::size_t i = 0; i < v.size(); i += stride) out.push_back(v[i]);
  if (!v.empty() && out.back() != v.back()) out.push_back(v.back());
  return out;
}

}  // namespace detail

/// Asymptotic lines through the seeds, one slice member per distinct
/// footpoint, and d_S from the c-criterion between every ordered pair.
template <LorentzQuery S>
SpacelikeSlice<PointOf<S>> extract_slice(const S& space, const LineDescriptor<PointOf<S>>& gamma,
                                         const std::vector<PointOf<S>>& seeds, const SliceOptions& opt = {}) {
  using P = PointOf<S>;
  if (seeds.empty()) throw PreconditionError("no seeds");
  std::vector<AsymptoticLine<P>> built(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    try {
      built[i] = busemann_asymptotic_line(space, gamma, seeds[i], opt.line);
    } catch (const PreconditionError& e) {
      throw PreconditionError("asymptote construction failed at seed " + std::to_string(i) + ": " + e.what());
    }
  });

  SpacelikeSlice<P> out;
  const double mesh = opt.line.mesh;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    out.busemann_error = std::max(out.busemann_error, built[i].busemann.error_bound);
    const P& foot = built[i].line.at(0.0);
    std::optional<std::size_t> same;
    for (std::size_t m = 0; m < out.members.size() && !same; ++m) {
      const double d = space.distance(foot, out.members[m]);
      if (d < mesh * (1.0 - 1e-6) || d <= kEps) same = m;  // neighbours at exactly mesh stay distinct
    }
    if (!same) {
      same = out.members.size();
      out.members.push_back(foot);
      out.lines.push_back(built[i]);
    }
    out.seed_member.push_back(*same);
  }
  out.mesh = mesh;
  out.parallel_tol = opt.parallel_tol.value_or(3.0 * (mesh + out.busemann_error));

  for (const P& m : out.members)
    out.footpoint_busemann = std::max(
        out.footpoint_busemann, std::abs(busemann_value(space, gamma, m, opt.line.horizons).value));

  const std::size_t n = out.members.size();
  Table<double> raw(n, std::vector<double>(n, 0.0));
  std::vector<std::uint8_t> nonpar(n * n, 0);
  ParallelOptions popt;
  popt.tolerance = out.parallel_tol;
  popt.verify = false;
  popt.s_params = detail::strided(out.lines.front().line.tau_params, opt.c_stride);
  popt.t_params = popt.s_params;
  parallel_for(n * n, [&](std::size_t k) {
    const std::size_t i = k / n, j = k % n;
    if (i == j) return;
    const auto r = test_parallel(space, out.lines[i].line, out.lines[j].line, popt);
    raw[i][j] = r.distance_c;
    nonpar[k] = !r.parallel;
  });
  for (auto f : nonpar) out.nonparallel_pairs += f;

  out.d = raw;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      out.asymmetry = std::max(out.asymmetry, std::abs(raw[i][j] - raw[j][i]));
      out.d[i][j] = out.d[j][i] = 0.5 * (raw[i][j] + raw[j][i]);
      if (out.d[i][j] <= kEps) ++out.zero_distances;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        out.triangle_excess = std::max(out.triangle_excess, out.d[i][k] - out.d[i][j] - out.d[j][k]);
  out.metric_ok = out.asymmetry <= out.parallel_tol && out.triangle_excess <= out.parallel_tol &&
                  out.zero_distances == 0;
  return out;
}

// ---------------------------------------------------------------------------
// Splitting map
// ---------------------------------------------------------------------------

struct MapOptions {
  /// Images closer than this are one point; probes match images within it.
  /// Default: half the slice mesh (or 1e-9 on exact spaces).
  std::optional<double> match_radius;
  /// Half-width of the band around the light cone where relation
  /// comparisons are skipped; default: the slice's parallel tolerance.
  std::optional<double> null_band;
};

template <class P>
struct SplittingResult {
  SpacelikeSlice<P> slice;
  std::vector<double> times;
  Table<P> map;  // map[k][i] = f(times[k], member i)
  double tau_defect = 0.0;
  std::size_t leq_mismatches = 0;
  std::size_t pairs_checked = 0;
  bool injective = true;
  std::optional<std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>> duplicate;
  std::size_t probes = 0;
  std::size_t unmatched_probes = 0;
  bool bijective = true;
  std::size_t achronal_violations = 0;
  double match_radius = 0.0;

  const P& at(std::size_t k, std::size_t i) const { return map[k][i]; }
};

/// tau on R x S with the slice metric.
template <class P>
double tau_split(const SpacelikeSlice<P>& slice, double s, std::size_t i, double t, std::size_t j, double eps = kEps) {
  return detail::tau_from_increments(t - s, slice.d[i][j], eps);
}

/// Tabulates f on times x slice and checks it against the space on all
/// sampled pairs; `probes` is the I(gamma) sample the map must cover.
template <LorentzQuery S>
SplittingResult<PointOf<S>> build_splitting_map(const S& space, SpacelikeSlice<PointOf<S>> slice,
                                                const std::vector<double>& times,
                                                const std::vector<PointOf<S>>& probes = {},
                                                const MapOptions& opt = {}) {
  using P = PointOf<S>;
  if (slice.members.empty()) throw PreconditionError("empty slice");
  if (times.empty()) throw PreconditionError("empty time grid");
  SplittingResult<P> out;
  out.times = times;
  const std::size_t n = slice.size(), T = times.size();
  out.map.assign(T, {});
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t i = 0; i < n; ++i) out.map[k].push_back(slice.lines[i].line.at(times[k]));
  out.match_radius = opt.match_radius.value_or(std::max(0.5 * slice.mesh, 1e-9));
  const double band = opt.null_band.value_or(slice.parallel_tol);

  const std::size_t N = T * n;
  std::vector<double> defect(N, 0.0);
  std::vector<std::size_t> mism(N, 0), achr(N, 0);
  std::vector<std::optional<std::size_t>> dup(N);
  parallel_for(N, [&](std::size_t a) {
    const std::size_t ka = a / n, ia = a % n;
    const P& x = out.map[ka][ia];
    for (std::size_t b = 0; b < N; ++b) {
      if (a == b) continue;
      const std::size_t kb = b / n, ib = b % n;
      const P& y = out.map[kb][ib];
      const double want = tau_split(slice, times[ka], ia, times[kb], ib);
      defect[a] = std::max(defect[a], std::abs(space.tau(x, y) - want));
      const double dt = times[kb] - times[ka], d = slice.d[ia][ib];
      if (std::abs(dt - d) > band && space.causal(x, y) != (dt >= d)) ++mism[a];
      if (ka == kb && space.timelike(x, y)) ++achr[a];
      if (b > a && !dup[a] && space.distance(x, y) < out.match_radius) dup[a] = b;
    }
  });
  out.pairs_checked = N * (N - 1);
  for (std::size_t a = 0; a < N; ++a) {
    out.tau_defect = std::max(out.tau_defect, defect[a]);
    out.leq_mismatches += mism[a];
    out.achronal_violations += achr[a];
    if (dup[a] && !out.duplicate) {
      out.injective = false;
      out.duplicate = {{a / n, a % n}, {*dup[a] / n, *dup[a] % n}};
    }
  }
  for (const P& p : probes) {
    ++out.probes;
    bool hit = false;
    for (std::size_t a = 0; a < N && !hit; ++a) hit = space.distance(p, out.map[a / n][a % n]) < out.match_radius;
    if (!hit) ++out.unmatched_probes;
  }
  out.bijective = out.injective && out.unmatched_probes == 0;
  out.slice = std::move(slice);
  return out;
}

// ---------------------------------------------------------------------------
// Cauchy slices
// ---------------------------------------------------------------------------

struct CauchyFailure {
  std::size_t chain = 0;
  double level = 0.0;
  std::size_t crossings = 0;
};

struct CauchyReport {
  bool each_chain_hits_each_slice_once = true;
  std::size_t chains_checked = 0;
  std::size_t not_spanning = 0;  // precondition flag, not a failure
  std::vector<CauchyFailure> failures;
};

/// Number of times the sequence v crosses level t: steps with v_k < t <= v_k+1
/// or v_k >= t > v_k+1.
inline std::size_t level_crossings(const std::vector<double>& v, double t) {
  std::size_t c = 0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
    if ((v[k] < t && t <= v[k + 1]) || (v[k] >= t && t > v[k + 1])) ++c;
  return c;
}

/// Each test chain must cross every level set b+ = t of the map exactly once.
template <LorentzQuery S>
CauchyReport check_cauchy_slices(const S& space, const LineDescriptor<PointOf<S>>& gamma,
                                 const SplittingResult<PointOf<S>>& result,
                                 const std::vector<Chain<PointOf<S>>>& chains, const std::vector<double>& horizons) {
  CauchyReport out;
  const auto [lo, hi] = std::minmax_element(result.times.begin(), result.times.end());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    std::vector<double> b;
    bool inside = true;
    for (const auto& x : chains[c]) {
      if (!in_i_gamma(space, gamma, x)) {
        inside = false;
        break;
      }
      b.push_back(busemann_value(space, gamma, x, horizons).value);
    }
    if (!inside || b.empty() || *std::min_element(b.begin(), b.end()) >= *lo ||
        *std::max_element(b.begin(), b.end()) <= *hi) {
      ++out.not_spanning;
      continue;
    }
    ++out.chains_checked;
    for (double t : result.times) {
      const std::size_t k = level_crossings(b, t);
      if (k != 1) out.failures.push_back({c, t, k});
    }
  }
  out.each_chain_hits_each_slice_once = out.failures.empty();
  return out;
}

// ---------------------------------------------------------------------------
// Alexandrov quadruple test
// ---------------------------------------------------------------------------

struct QuadrupleReport {
  bool nonneg_curvature = true;
  double worst_defect = -std::numeric_limits<double>::infinity();  // max angle sum - 2 pi
  std::size_t quadruples = 0;
  std::size_t degenerate_skipped = 0;
  std::array<std::size_t, 4> witness{};  // center, a, b, c of the worst excess
};

namespace detail {
/// Euclidean comparison angle at x opposite side ab.
inline double euclid_angle(double xa, double xb, double ab) {
  const double c = (xa * xa + xb * xb - ab * ab) / (2.0 * xa * xb);
  return std::acos(std::clamp(c, -1.0, 1.0));
}
}  // namespace detail

/// For every center x and triple a, b, c: the sum of the three Euclidean
/// comparison angles at x is at most 2 pi + tol. More than `max_quadruples`
/// quadruples are sampled with the given seed.
inline QuadrupleReport check_slice_alexandrov(const Table<double>& d, double tol = 1e-6,
                                              std::size_t max_quadruples = 2'000'000, std::uint64_t seed = 1) {
  const std::size_t n = d.size();
  if (n < 4) throw PreconditionError("quadruple test needs at least 4 points");
  QuadrupleReport out;
  auto visit = [&](std::size_t x, std::size_t a, std::size_t b, std::size_t c) {
    if (d[x][a] <= kEps || d[x][b] <= kEps || d[x][c] <= kEps) {
      ++out.degenerate_skipped;
      return;
    }
    ++out.quadruples;
    const double sum = detail::euclid_angle(d[x][a], d[x][b], d[a][b]) +
                       detail::euclid_angle(d[x][b], d[x][c], d[b][c]) +
                       detail::euclid_angle(d[x][a], d[x][c], d[a][c]);
    const double excess = sum - 2.0 * std::numbers::pi;
    if (excess > out.worst_defect) {
      out.worst_defect = excess;
      out.witness = {x, a, b, c};
    }
  };
  const double total = double(n) * double(n - 1) * double(n - 2) * double(n - 3) / 6.0;
  if (total <= double(max_quadruples)) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          for (std::size_t c = b + 1; c < n; ++c)
            if (a != x && b != x && c != x) visit(x, a, b, c);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < max_quadruples; ++k) {
      std::size_t q[4];
      do {
        for (auto& v : q) v = pick(rng);
      } while (q[0] == q[1] || q[0] == q[2] || q[0] == q[3] || q[1] == q[2] || q[1] == q[3] || q[2] == q[3]);
      visit(q[0], q[1], q[2], q[3]);
    }
  }
  out.nonneg_curvature = out.worst_defect <= tol;
  return out;
}

template <class P>
QuadrupleReport check_slice_alexandrov(const SpacelikeSlice<P>& slice, double tol = 1e-6) {
  return check_slice_alexandrov(slice.d, tol);
}

// ---------------------------------------------------------------------------
// (TC) probes
// ---------------------------------------------------------------------------

struct TcProbeResult {
  bool out_of_sample = false;
  bool extendible = false;
  double slice_length = 0.0;  // d_S-length of the slice component
  std::vector<std::size_t> slice_path;  // member index per probe point
};

struct TcReport {
  bool all_extendible = true;
  std::size_t probes_checked = 0;
  std::size_t out_of_sample = 0;
  std::vector<TcProbeResult> probes;
};

/// Maps each probe through f^-1 (nearest knot of the slice's asymptotic
/// lines) and checks that its slice component has finite d_S-length and a
/// limit point among the slice members.
template <LorentzQuery S>
TcReport check_tc_property(const S& space, const SplittingResult<PointOf<S>>& result,
                           const std::vector<Chain<PointOf<S>>>& probes, std::optional<double> radius = {}) {
  const auto& slice = result.slice;
  double h = 0.0;
  if (slice.lines.front().line.size() > 1)
    h = slice.lines.front().line.tau_params[1] - slice.lines.front().line.tau_params[0];
  const double r = radius.value_or(std::max(h, slice.mesh));
  TcReport out;
  for (std::size_t pi = 0; pi < probes.size(); ++pi) {
    const auto& probe = probes[pi];
    if (probe.size() < 2) throw PreconditionError("probe " + std::to_string(pi) + " has fewer than two points");
    if (!is_line(space, probe, std::nullopt, std::max(kEps, r)).is_line)
      throw PreconditionError("probe " + std::to_string(pi) + " is not maximizing");
    TcProbeResult pr;
    for (const auto& x : probe) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t who = 0;
      for (std::size_t i = 0; i < slice.size(); ++i)
        for (const auto& k : slice.lines[i].line.chain) {
          const double d = space.distance(x, k);
          if (d < best) {
            best = d;
            who = i;
          }
        }
      if (best > r) pr.out_of_sample = true;
      pr.slice_path.push_back(who);
    }
    if (pr.out_of_sample) {
      ++out.out_of_sample;
      out.probes.push_back(pr);
      continue;
    }
    if (std::all_of(pr.slice_path.begin(), pr.slice_path.end(), [&](std::size_t i) { return i == pr.slice_path[0]; }))
      throw PreconditionError("probe " + std::to_string(pi) +
                              " runs along an asymptote (infinite tau-length certificate)");
    for (std::size_t k = 0; k + 1 < pr.slice_path.size(); ++k)
      pr.slice_length += slice.d[pr.slice_path[k]][pr.slice_path[k + 1]];
    pr.extendible = std::isfinite(pr.slice_length) && pr.slice_path.back() < slice.size();
    ++out.probes_checked;
    out.all_extendible = out.all_extendible && pr.extendible;
    out.probes.push_back(pr);
  }
  return out;
}

}  // namespace lorentz
