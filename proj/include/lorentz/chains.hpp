#pragma once

// Causal chains: tau- and d-lengths, the longest-chain engine for finite
// spaces, line/ray verification and tau-arclength parameters.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz/core.hpp"

namespace lorentz {

template <class P>
using Chain = std::vector<P>;

struct ChainLengths {
  double tau_length = 0.0;
  double d_length = 0.0;
};

/// Throws PreconditionError unless the chain has >= 2 points with every
/// consecutive pair causally related.
template <LorentzQuery S>
void require_causal_chain(const S& space, const Chain<PointOf<S>>& chain) {
  if (chain.size() < 2) throw PreconditionError("chain needs at least two points");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!space.causal(chain[i], chain[i + 1]))
      throw PreconditionError("chain is not causal at step " + std::to_string(i));
}

template <LorentzQuery S>
ChainLengths chain_lengths(const S& space, const Chain<PointOf<S>>& chain) {
  require_causal_chain(space, chain);
  ChainLengths out;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    out.tau_length += space.tau(chain[i], chain[i + 1]);
    out.d_length += space.distance(chain[i], chain[i + 1]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Longest chains in finite spaces
// ---------------------------------------------------------------------------

struct MaximizerResult {
  double value = 0.0;
  Chain<PointId> chain;
  std::uint64_t tie_count = 1;  // number of optimal chains (saturating)
  /// value - tau(source,target); zero in a length space.
  double intrinsic_defect = 0.0;
};

namespace detail {

/// Throws NonCausalError if <= has a 2-cycle between distinct points.
inline void require_antisymmetric(const FiniteLorentzSpace& space) {
  const std::size_t n = space.size();
  for (PointId i = 0; i < n; ++i)
    for (PointId j = i + 1; j < n; ++j)
      if (space.causal(i, j) && space.causal(j, i))
        throw NonCausalError("non-causal space: " + std::to_string(i) + " <= " + std::to_string(j) +
                             " <= " + std::to_string(i));
}

/// Points r with source <= r <= target, in a topological order of <=.
inline std::vector<PointId> interval_in_order(const FiniteLorentzSpace& space, PointId s, PointId t) {
  std::vector<PointId> cand;
  for (PointId r = 0; r < space.size(); ++r)
    if (space.causal(s, r) && space.causal(r, t)) cand.push_back(r);
  // Kahn's algorithm on the induced strict relation; smallest index first
  const std::size_t m = cand.size();
  std::vector<std::size_t> indeg(m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a != b && space.causal(cand[a], cand[b])) ++indeg[b];
  std::vector<PointId> order;
  std::vector<bool> done(m, false);
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t pick = m;
    for (std::size_t a = 0; a < m; ++a)
      if (!done[a] && indeg[a] == 0) {
        pick = a;
        break;
      }
    if (pick == m) throw NonCausalError("non-causal space: causal cycle inside J(source,target)");
    done[pick] = true;
    order.push_back(cand[pick]);
    for (std::size_t b = 0; b < m; ++b)
      if (b != pick && space.causal(cand[pick], cand[b])) --indeg[b];
  }
  return order;
}

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t mx = std::numeric_limits<std::uint64_t>::max();
  return a > mx - b ? mx : a + b;
}

/// Best chain value from every interval point to t, and optimal chain counts.
struct BackwardTable {
  std::vector<PointId> order;
  std::vector<double> g;  // indexed by PointId, -inf outside the interval
  std::vector<std::uint64_t> count;
};

inline BackwardTable backward_table(const FiniteLorentzSpace& space, PointId s, PointId t, double tol) {
  BackwardTable bt;
  bt.order = interval_in_order(space, s, t);
  bt.g.assign(space.size(), -std::numeric_limits<double>::infinity());
  bt.count.assign(space.size(), 0);
  for (auto it = bt.order.rbegin(); it != bt.order.rend(); ++it) {
    const PointId u = *it;
    if (u == t) {
      bt.g[u] = 0.0;
      bt.count[u] = 1;
      continue;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (PointId v : bt.order)
      if (v != u && space.causal(u, v) && bt.g[v] > -std::numeric_limits<double>::infinity())
        best = std::max(best, space.tau(u, v) + bt.g[v]);
    bt.g[u] = best;
    std::uint64_t c = 0;
    for (PointId v : bt.order)
      if (v != u && space.causal(u, v) && bt.g[v] > -std::numeric_limits<double>::infinity() &&
          space.tau(u, v) + bt.g[v] >= best - tol)
        c = sat_add(c, bt.count[v]);
    bt.count[u] = c;
  }
  return bt;
}

}  // namespace detail

/// Longest causal chain from source to target: the intrinsic time separation.
/// Ties go to the lexicographically smallest index sequence.
inline MaximizerResult maximize_tau(const FiniteLorentzSpace& space, PointId source, PointId target,
                                    double tie_tol = kEps) {
  detail::require_antisymmetric(space);
  if (source >= space.size() || target >= space.size())
    throw PreconditionError("maximize_tau: point index out of range");
  if (!space.causal(source, target)) throw NotRelatedError("maximize_tau: source is not <= target");
  MaximizerResult out;
  if (source == target) {
    out.chain = {source};
    return out;
  }
  const auto bt = detail::backward_table(space, source, target, tie_tol);
  out.value = bt.g[source];
  out.tie_count = bt.count[source];
  out.chain = {source};
  PointId u = source;
  while (u != target) {
    PointId next = target;
    for (PointId v = 0; v < space.size(); ++v) {
      if (v == u || !space.causal(u, v) || bt.g[v] == -std::numeric_limits<double>::infinity()) continue;
      if (space.tau(u, v) + bt.g[v] >= bt.g[u] - tie_tol) {
        next = v;
        break;
      }
    }
    out.chain.push_back(next);
    u = next;
  }
  out.intrinsic_defect = out.value - space.tau(source, target);
  return out;
}

/// Exhaustive search over all causal chains; oracle for maximize_tau.
/// Chain sums are folded from the end, matching the dynamic program bit for bit.
inline double brute_force_tau(const FiniteLorentzSpace& space, PointId source, PointId target) {
  constexpr std::size_t kMaxPoints = 20;
  if (space.size() > kMaxPoints)
    throw PreconditionError("brute_force_tau: space has " + std::to_string(space.size()) +
                            " points, limit is 20");
  detail::require_antisymmetric(space);
  if (!space.causal(source, target)) throw NotRelatedError("brute_force_tau: source is not <= target");
  if (source == target) return 0.0;

  double best = -std::numeric_limits<double>::infinity();
  std::vector<PointId> path{source};
  auto fold = [&] {
    double acc = 0.0;
    for (std::size_t k = path.size() - 1; k > 0; --k) acc = space.tau(path[k - 1], path[k]) + acc;
    return acc;
  };
  auto dfs = [&](auto&& self, PointId u) -> void {
    if (u == target) {
      best = std::max(best, fold());
      return;
    }
    for (PointId v = 0; v < space.size(); ++v) {
      if (v == u || !space.causal(u, v) || !space.causal(v, target)) continue;
      path.push_back(v);
      self(self, v);
      path.pop_back();
    }
  };
  dfs(dfs, source);
  return best;
}

// ---------------------------------------------------------------------------
// Lines and rays
// ---------------------------------------------------------------------------

struct LineCheck {
  bool is_ray = false;
  bool is_line = false;
  std::optional<std::pair<std::size_t, std::size_t>> first_failure;
  double worst_defect = 0.0;  // max over pairs of tau(c_i,c_j) - sum_{i..j}
  double tau_length = 0.0;
  /// tau_length >= horizon, when a horizon was given.
  std::optional<bool> reaches_horizon;
};

inline double additivity_tolerance(double tau) { return kEps * std::max(1.0, std::abs(tau)); }

/// Tau-additivity over all index pairs (line) and over pairs anchored at 0 (ray).
template <LorentzQuery S>
LineCheck is_line(const S& space, const Chain<PointOf<S>>& chain, std::optional<double> horizon = std::nullopt,
                  std::optional<double> tol = std::nullopt) {
  LineCheck out;
  std::vector<double> prefix{0.0};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) prefix.push_back(prefix.back() + space.tau(chain[i], chain[i + 1]));
  out.tau_length = prefix.back();
  out.is_ray = true;
  out.is_line = true;
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      const bool causal = space.causal(chain[i], chain[j]);
      const double tij = space.tau(chain[i], chain[j]);
      const double defect = tij - (prefix[j] - prefix[i]);
      const bool ok = causal && std::abs(defect) <= tol.value_or(additivity_tolerance(tij));
      out.worst_defect = std::max(out.worst_defect, std::abs(defect));
      if (!ok) {
        if (!out.first_failure) out.first_failure = std::make_pair(i, j);
        out.is_line = false;
        if (i == 0) out.is_ray = false;
      }
    }
  if (horizon) out.reaches_horizon = out.tau_length >= *horizon;
  return out;
}

// ---------------------------------------------------------------------------
// Tau-arclength
// ---------------------------------------------------------------------------

template <class P>
struct TauParametrized {
  Chain<P> points;
  std::vector<double> params;  // cumulative tau-length, strictly increasing
};

template <LorentzQuery S>
TauParametrized<PointOf<S>> reparametrize_tau_arclength(const S& space, const Chain<PointOf<S>>& chain) {
  if (chain.empty()) throw PreconditionError("empty chain");
  TauParametrized<PointOf<S>> out{chain, {0.0}};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!space.timelike(chain[i], chain[i + 1]))
      throw PreconditionError("null or non-timelike step at index " + std::to_string(i));
    out.params.push_back(out.params.back() + space.tau(chain[i], chain[i + 1]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Non-branching
// ---------------------------------------------------------------------------

struct BranchingViolation {
  PointId source, target;
  PointId branch_point;  // last common point
  PointId a, b;          // incomparable points on two maximizers leaving branch_point
};

namespace detail {

/// Intrinsic tau from `from` to every point (-inf where not >= from).
inline std::vector<double> forward_values(const FiniteLorentzSpace& space, PointId from) {
  std::vector<PointId> order;
  for (PointId r = 0; r < space.size(); ++r)
    if (space.causal(from, r)) order.push_back(r);
  std::sort(order.begin(), order.end(), [&](PointId a, PointId b) {
    // predecessor counts give a linear extension of a partial order
    auto preds = [&](PointId x) {
      std::size_t c = 0;
      for (PointId y : order) c += (y != x && space.causal(y, x));
      return c;
    };
    const auto pa = preds(a), pb = preds(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<double> f(space.size(), -std::numeric_limits<double>::infinity());
  for (PointId v : order) {
    if (v == from) {
      f[v] = 0.0;
      continue;
    }
    for (PointId u : order)
      if (u != v && space.causal(u, v) && f[u] > -std::numeric_limits<double>::infinity())
        f[v] = std::max(f[v], f[u] + space.tau(u, v));
  }
  return f;
}

}  // namespace detail

/// Scans the given endpoint pairs for branching maximizers: a point m on a
/// maximizer with tau(s,m) > 0 from which maximizers to t pass through two
/// causally unrelated points.
inline std::vector<BranchingViolation> check_nonbranching(const FiniteLorentzSpace& space,
                                                          const std::vector<std::pair<PointId, PointId>>& pairs,
                                                          double tol = 1e-9) {
  detail::require_antisymmetric(space);
  std::vector<BranchingViolation> out;
  const double ninf = -std::numeric_limits<double>::infinity();
  for (auto [s, t] : pairs) {
    if (!space.timelike(s, t)) continue;
    const auto fs = detail::forward_values(space, s);
    const auto bt = detail::backward_table(space, s, t, tol);
    const double total = bt.g[s];
    auto on_max = [&](const std::vector<double>& f, const std::vector<double>& g, PointId r, double v) {
      return f[r] > ninf && g[r] > ninf && std::abs(f[r] + g[r] - v) <= tol * std::max(1.0, v);
    };
    bool found = false;
    for (PointId m : bt.order) {
      if (found) break;
      if (m == t || !(fs[m] > tol) || !on_max(fs, bt.g, m, total)) continue;
      const auto fm = detail::forward_values(space, m);
      std::vector<PointId> after;
      for (PointId r : bt.order)
        if (r != m && r != t && on_max(fm, bt.g, r, bt.g[m])) after.push_back(r);
      for (std::size_t i = 0; i < after.size() && !found; ++i)
        for (std::size_t j = i + 1; j < after.size() && !found; ++j) {
          const PointId a = after[i], b = after[j];
          if (!space.causal(a, b) && !space.causal(b, a)) {
            out.push_back({s, t, m, a, b});
            found = true;
          }
        }
    }
  }
  return out;
}

}  // namespace lorentz
