#pragma once

// Lorentzian pre-length spaces: the read interface shared by every space kind,
// the finite table-backed realization, axiom validation and causal diamonds.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lorentz {

/// Absolute tolerance used by axiom and additivity checks.
inline constexpr double kEps = 1e-9;

/// Marker for an infinite time separation in finite tables.
inline constexpr double kInfiniteTau = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input (wrong table sizes, bad ids, unparsable data).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A computed object failed a mathematical check it was required to pass.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// The two points are not causally related in the required direction.
class NotRelatedError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The causal relation has a cycle; longest chains are undefined.
class NonCausalError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// ---------------------------------------------------------------------------
// Read interface
// ---------------------------------------------------------------------------

/// Uniform read access to a Lorentzian pre-length space.
template <class S>
concept LorentzQuery = requires(const S& s, const typename S::point_type& p,
                                const typename S::point_type& q) {
  typename S::point_type;
  { s.distance(p, q) } -> std::convertible_to<double>;
  { s.causal(p, q) } -> std::same_as<bool>;
  { s.timelike(p, q) } -> std::same_as<bool>;
  { s.tau(p, q) } -> std::convertible_to<double>;
};

/// Spaces that can produce maximizing causal curves between related points.
///
/// `realizer(p, q)` returns the vertices of a maximizer from p to q (p <= q),
/// every vertex lying exactly on the curve. `point_along(p, q, f)` returns the
/// point at tau-arclength fraction f in [0,1] of that maximizer; spaces with a
/// discrete factor may snap it to the nearest sample point.
template <class S>
concept GeodesicSpace =
    LorentzQuery<S> && requires(const S& s, const typename S::point_type& p, double f) {
      { s.realizer(p, p) } -> std::same_as<std::vector<typename S::point_type>>;
      { s.point_along(p, p, f) } -> std::same_as<typename S::point_type>;
    };

template <LorentzQuery S>
using PointOf = typename S::point_type;

/// True when p and q are timelike related in either direction.
template <LorentzQuery S>
bool timelike_related(const S& space, const PointOf<S>& p, const PointOf<S>& q) {
  return space.timelike(p, q) || space.timelike(q, p);
}

/// max(tau(p,q), tau(q,p)).
template <LorentzQuery S>
double unordered_tau(const S& space, const PointOf<S>& p, const PointOf<S>& q) {
  return std::max(space.tau(p, q), space.tau(q, p));
}

// ---------------------------------------------------------------------------
// Finite spaces
// ---------------------------------------------------------------------------

/// Index of a point in a finite space, dense in 0..n-1.
using PointId = std::size_t;

template <class T>
using Table = std::vector<std::vector<T>>;

/// A finite Lorentzian pre-length space stored as explicit tables.
class FiniteLorentzSpace {
 public:
  using point_type = PointId;

  FiniteLorentzSpace() = default;

  /// Throws StructuralError unless all tables are n x n.
  FiniteLorentzSpace(Table<double> d, Table<bool> leq, Table<bool> ll, Table<double> tau)
      : d_(std::move(d)), leq_(std::move(leq)), ll_(std::move(ll)), tau_(std::move(tau)) {
    const std::size_t n = d_.size();
    auto check = [n](const auto& table, const char* name) {
      if (table.size() != n) throw StructuralError(std::string(name) + ": row count mismatch");
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i].size() != n) {
          std::ostringstream os;
          os << name << ": row " << i << " has " << table[i].size() << " entries, expected " << n;
          throw StructuralError(os.str());
        }
      }
    };
    check(d_, "d");
    check(leq_, "leq");
    check(ll_, "ll");
    check(tau_, "tau");
  }

  std::size_t size() const { return d_.size(); }

  double distance(PointId p, PointId q) const { return d_.at(p).at(q); }
  bool causal(PointId p, PointId q) const { return leq_.at(p).at(q); }
  bool timelike(PointId p, PointId q) const { return ll_.at(p).at(q); }
  double tau(PointId p, PointId q) const { return tau_.at(p).at(q); }

  std::vector<PointId> points() const {
    std::vector<PointId> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }

  const Table<double>& distance_table() const { return d_; }
  const Table<bool>& causal_table() const { return leq_; }
  const Table<bool>& timelike_table() const { return ll_; }
  const Table<double>& tau_table() const { return tau_; }

  bool has_infinite_tau() const {
    for (const auto& row : tau_)
      for (double v : row)
        if (std::isinf(v)) return true;
    return false;
  }

 private:
  Table<double> d_;
  Table<bool> leq_;
  Table<bool> ll_;
  Table<double> tau_;
};

/// Evaluates every relation of `space` on `sample` into a finite table space.
template <LorentzQuery S>
FiniteLorentzSpace materialize(const S& space, std::span<const PointOf<S>> sample) {
  const std::size_t n = sample.size();
  Table<double> d(n, std::vector<double>(n, 0.0));
  Table<bool> leq(n, std::vector<bool>(n, false));
  Table<bool> ll(n, std::vector<bool>(n, false));
  Table<double> tau(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d[i][j] = space.distance(sample[i], sample[j]);
      leq[i][j] = space.causal(sample[i], sample[j]);
      ll[i][j] = space.timelike(sample[i], sample[j]);
      tau[i][j] = space.tau(sample[i], sample[j]);
    }
  }
  return FiniteLorentzSpace(std::move(d), std::move(leq), std::move(ll), std::move(tau));
}

// ---------------------------------------------------------------------------
// Axiom validation
// ---------------------------------------------------------------------------

struct AxiomOutcome {
  std::string name;
  bool passed = true;
  std::vector<PointId> witness;  // first counterexample, empty when passed
};

struct ValidationReport {
  std::vector<AxiomOutcome> axioms;

  bool passed() const {
    return std::all_of(axioms.begin(), axioms.end(), [](const auto& a) { return a.passed; });
  }
  const AxiomOutcome* find(const std::string& name) const {
    for (const auto& a : axioms)
      if (a.name == name) return &a;
    return nullptr;
  }
  const AxiomOutcome* first_failure() const {
    for (const auto& a : axioms)
      if (!a.passed) return &a;
    return nullptr;
  }
};

namespace axiom {
inline constexpr const char* kMetricZero = "metric: d(i,i)=0";
inline constexpr const char* kMetricPositive = "metric: d(i,j)>0 for i!=j";
inline constexpr const char* kMetricSymmetric = "metric: symmetry";
inline constexpr const char* kMetricTriangle = "metric: triangle inequality";
inline constexpr const char* kLeqReflexive = "leq reflexive";
inline constexpr const char* kLeqTransitive = "leq transitive";
inline constexpr const char* kLlTransitive = "ll transitive";
inline constexpr const char* kLlInLeq = "ll subset of leq";
inline constexpr const char* kLlIrreflexive = "ll irreflexive";
inline constexpr const char* kTauZeroOffLeq = "tau=0 when not leq";
inline constexpr const char* kTauPositiveIffLl = "tau>0 iff ll";
inline constexpr const char* kReverseTriangle = "reverse triangle inequality";
}  // namespace axiom

/// Checks every pre-length space axiom on the tables; idempotent and pure.
inline ValidationReport validate_axioms(const FiniteLorentzSpace& space, double eps = kEps) {
  const std::size_t n = space.size();
  ValidationReport report;
  auto add = [&report](const char* name) -> AxiomOutcome& {
    report.axioms.push_back({name, true, {}});
    return report.axioms.back();
  };
  auto fail = [](AxiomOutcome& o, std::vector<PointId> w) {
    if (o.passed) {
      o.passed = false;
      o.witness = std::move(w);
    }
  };

  auto& zero = add(axiom::kMetricZero);
  auto& pos = add(axiom::kMetricPositive);
  auto& sym = add(axiom::kMetricSymmetric);
  auto& tri = add(axiom::kMetricTriangle);
  for (PointId i = 0; i < n; ++i) {
    if (std::abs(space.distance(i, i)) > eps) fail(zero, {i});
    for (PointId j = 0; j < n; ++j) {
      const double dij = space.distance(i, j);
      if (i != j && !(dij > 0.0)) fail(pos, {i, j});
      if (std::abs(dij - space.distance(j, i)) > eps) fail(sym, {i, j});
      if (!tri.passed) continue;
      for (PointId k = 0; k < n; ++k) {
        if (dij > space.distance(i, k) + space.distance(k, j) + eps) {
          fail(tri, {i, k, j});
          break;
        }
      }
    }
  }

  auto& refl = add(axiom::kLeqReflexive);
  auto& irr = add(axiom::kLlIrreflexive);
  auto& leq_tr = add(axiom::kLeqTransitive);
  auto& ll_tr = add(axiom::kLlTransitive);
  auto& inc = add(axiom::kLlInLeq);
  auto& tau_zero = add(axiom::kTauZeroOffLeq);
  auto& tau_pos = add(axiom::kTauPositiveIffLl);
  auto& rev = add(axiom::kReverseTriangle);
  for (PointId i = 0; i < n; ++i) {
    if (!space.causal(i, i)) fail(refl, {i});
    if (space.timelike(i, i)) fail(irr, {i});
    for (PointId j = 0; j < n; ++j) {
      const bool lij = space.causal(i, j);
      const bool tij = space.timelike(i, j);
      const double t = space.tau(i, j);
      if (tij && !lij) fail(inc, {i, j});
      if (!lij && t != 0.0) fail(tau_zero, {i, j});
      if ((t > 0.0) != tij) fail(tau_pos, {i, j});
      for (PointId k = 0; k < n; ++k) {
        if (lij && space.causal(j, k) && !space.causal(i, k)) fail(leq_tr, {i, j, k});
        if (tij && space.timelike(j, k) && !space.timelike(i, k)) fail(ll_tr, {i, j, k});
        if (lij && space.causal(j, k)) {
          const double lhs = space.tau(i, k);
          const double rhs = t + space.tau(j, k);
          if (!(std::isinf(lhs)) && lhs < rhs - eps) fail(rev, {i, j, k});
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Push-up
// ---------------------------------------------------------------------------

struct PushupViolation {
  std::size_t x, y, z;  // indices into the sample
  bool timelike_first;  // x<<y<=z (true) or x<=y<<z (false)
};

struct PushupReport {
  std::size_t triples_checked = 0;
  std::vector<PushupViolation> violations;
  bool passed() const { return violations.empty(); }
};

/// Checks x<<y<=z => x<<z and x<=y<<z => x<<z over all sampled triples.
template <LorentzQuery S>
PushupReport check_pushup(const S& space, std::span<const PointOf<S>> sample) {
  PushupReport report;
  const std::size_t n = sample.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const bool ab_ll = space.timelike(sample[a], sample[b]);
      const bool ab_le = space.causal(sample[a], sample[b]);
      if (!ab_le) continue;
      for (std::size_t c = 0; c < n; ++c) {
        ++report.triples_checked;
        const bool bc_ll = space.timelike(sample[b], sample[c]);
        const bool bc_le = space.causal(sample[b], sample[c]);
        const bool ac_ll = space.timelike(sample[a], sample[c]);
        if (ac_ll) continue;
        if (ab_ll && bc_le) report.violations.push_back({a, b, c, true});
        else if (ab_le && bc_ll) report.violations.push_back({a, b, c, false});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Diamonds and causal convexity
// ---------------------------------------------------------------------------

enum class DiamondKind { timelike, causal };

template <class P>
struct DiamondSet {
  P base_from;
  P base_to;
  DiamondKind kind = DiamondKind::causal;
  std::vector<std::size_t> members;  // indices into the scanned sample
  double diameter = 0.0;             // max d between members; finite spaces are always bounded
};

/// Exact membership scan of I(p,q) or J(p,q) over `sample`.
template <LorentzQuery S>
DiamondSet<PointOf<S>> diamond(const S& space, std::span<const PointOf<S>> sample,
                               const PointOf<S>& p, const PointOf<S>& q, DiamondKind kind) {
  DiamondSet<PointOf<S>> out{p, q, kind, {}, 0.0};
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& r = sample[i];
    const bool in = kind == DiamondKind::causal
                        ? space.causal(p, r) && space.causal(r, q)
                        : space.timelike(p, r) && space.timelike(r, q);
    if (in) out.members.push_back(i);
  }
  for (std::size_t a : out.members)
    for (std::size_t b : out.members)
      out.diameter = std::max(out.diameter, space.distance(sample[a], sample[b]));
  return out;
}

/// Finite-space convenience: diamond over all points.
inline DiamondSet<PointId> diamond(const FiniteLorentzSpace& space, PointId p, PointId q,
                                   DiamondKind kind) {
  const auto pts = space.points();
  return diamond(space, std::span<const PointId>(pts), p, q, kind);
}

/// True iff J(p,q) over `universe` stays inside `subset` for all p,q in subset.
/// `subset` holds indices into `universe`.
template <LorentzQuery S>
bool check_causal_convexity(const S& space, std::span<const PointOf<S>> universe,
                            std::span<const std::size_t> subset) {
  std::vector<bool> inside(universe.size(), false);
  for (std::size_t i : subset) inside.at(i) = true;
  for (std::size_t a : subset) {
    for (std::size_t b : subset) {
      if (!space.causal(universe[a], universe[b])) continue;
      for (std::size_t r = 0; r < universe.size(); ++r) {
        if (inside[r]) continue;
        if (space.causal(universe[a], universe[r]) && space.causal(universe[r], universe[b]))
          return false;
      }
    }
  }
  return true;
}

inline bool check_causal_convexity(const FiniteLorentzSpace& space,
                                   std::span<const PointId> subset) {
  const auto pts = space.points();
  return check_causal_convexity(space, std::span<const PointId>(pts), subset);
}

}  // namespace lorentz
