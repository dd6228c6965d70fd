#pragma once

// Analytic model spaces: two-dimensional Minkowski space and Lorentzian
// products R x X over sampled metric spaces, with the product theorems as
// executable checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz/core.hpp"

namespace lorentz {

namespace detail {

/// Time separation of a displacement with time part dt and spatial size dx.
/// Shared by Minkowski space and products so both follow one formula path.
inline double tau_from_increments(double dt, double dx, double eps) {
  if (!(dt > dx + eps)) return 0.0;
  return std::sqrt((dt - dx) * (dt + dx));
}

inline bool causal_increments(double dt, double dx, double eps) { return dt >= dx - eps; }
inline bool timelike_increments(double dt, double dx, double eps) { return dt > dx + eps; }

}  // namespace detail

/// Time grid t_min, t_min + step, ..., <= t_max.
struct TimeGrid {
  double t_min = 0.0;
  double t_max = 0.0;
  double t_step = 1.0;

  std::vector<double> times() const {
    std::vector<double> out;
    if (t_step <= 0.0) return {t_min};
    const auto count = static_cast<long>(std::floor((t_max - t_min) / t_step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(t_min + static_cast<double>(k) * t_step);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Minkowski space R^{1,1}
// ---------------------------------------------------------------------------

struct MinkowskiPoint {
  double t = 0.0;
  double x = 0.0;

  friend bool operator==(const MinkowskiPoint&, const MinkowskiPoint&) = default;
  friend MinkowskiPoint operator+(MinkowskiPoint a, MinkowskiPoint b) { return {a.t + b.t, a.x + b.x}; }
  friend MinkowskiPoint operator-(MinkowskiPoint a, MinkowskiPoint b) { return {a.t - b.t, a.x - b.x}; }
  friend MinkowskiPoint operator*(double s, MinkowskiPoint a) { return {s * a.t, s * a.x}; }
};

/// tau((t0,x0),(t1,x1)) = sqrt(dt^2 - dx^2) for future causal displacements, else 0.
inline double tau_minkowski(const MinkowskiPoint& p, const MinkowskiPoint& q, double eps = kEps) {
  return detail::tau_from_increments(q.t - p.t, std::abs(q.x - p.x), eps);
}

/// Minkowski space with an optional strip sample |x| in [x_min, x_max] on a time grid.
class MinkowskiSpace {
 public:
  using point_type = MinkowskiPoint;

  MinkowskiSpace() = default;
  MinkowskiSpace(double eps) : eps_(eps) {}

  double eps() const { return eps_; }

  double distance(const MinkowskiPoint& p, const MinkowskiPoint& q) const {
    return std::hypot(q.t - p.t, q.x - p.x);
  }
  bool causal(const MinkowskiPoint& p, const MinkowskiPoint& q) const {
    return detail::causal_increments(q.t - p.t, std::abs(q.x - p.x), eps_);
  }
  bool timelike(const MinkowskiPoint& p, const MinkowskiPoint& q) const {
    return detail::timelike_increments(q.t - p.t, std::abs(q.x - p.x), eps_);
  }
  double tau(const MinkowskiPoint& p, const MinkowskiPoint& q) const {
    return tau_minkowski(p, q, eps_);
  }

  /// Straight segment from p to q split into `segments()` equal pieces.
  std::vector<MinkowskiPoint> realizer(const MinkowskiPoint& p, const MinkowskiPoint& q) const {
    std::vector<MinkowskiPoint> out;
    for (int k = 0; k <= segments_; ++k) out.push_back(point_along(p, q, double(k) / segments_));
    return out;
  }
  MinkowskiPoint point_along(const MinkowskiPoint& p, const MinkowskiPoint& q, double f) const {
    return {p.t + f * (q.t - p.t), p.x + f * (q.x - p.x)};
  }
  int segments() const { return segments_; }
  void set_segments(int n) { segments_ = std::max(1, n); }

  // Strip sample
  void set_strip(double x_min, double x_max, double x_step, TimeGrid grid) {
    strip_ = Strip{x_min, x_max, x_step, grid};
  }
  bool has_strip() const { return strip_.has_value(); }
  double mesh() const { return strip_ ? std::max(strip_->x_step, strip_->grid.t_step) : 0.0; }
  std::vector<double> strip_xs() const {
    std::vector<double> xs;
    if (!strip_) return xs;
    const auto count = static_cast<long>(std::floor((strip_->x_max - strip_->x_min) / strip_->x_step + 1e-9));
    for (long k = 0; k <= count; ++k) xs.push_back(strip_->x_min + double(k) * strip_->x_step);
    return xs;
  }
  std::vector<MinkowskiPoint> sample_points() const {
    std::vector<MinkowskiPoint> out;
    if (!strip_) return out;
    for (double t : strip_->grid.times())
      for (double x : strip_xs()) out.push_back({t, x});
    return out;
  }
  const TimeGrid* time_grid() const { return strip_ ? &strip_->grid : nullptr; }

 private:
  struct Strip {
    double x_min, x_max, x_step;
    TimeGrid grid;
  };
  double eps_ = kEps;
  int segments_ = 8;
  std::optional<Strip> strip_;
};

// ---------------------------------------------------------------------------
// Sampled metric spaces
// ---------------------------------------------------------------------------

enum class MetricKind { euclidean_segment, euclidean_plane_sample, metric_graph, explicit_table };

inline const char* to_string(MetricKind k) {
  switch (k) {
    case MetricKind::euclidean_segment: return "euclidean-segment";
    case MetricKind::euclidean_plane_sample: return "euclidean-plane-sample";
    case MetricKind::metric_graph: return "metric-graph";
    case MetricKind::explicit_table: return "explicit-table";
  }
  return "?";
}

struct GraphEdge {
  std::size_t u = 0, v = 0;
  double length = 1.0;
};

/// A finite sample of a metric space with its full distance table.
///
/// `mesh` is the declared net spacing: the sample claims to be a mesh-net of
/// the space it stands for.
class MetricSpaceModel {
 public:
  MetricSpaceModel() = default;

  static MetricSpaceModel euclidean_segment(double a, double b, std::size_t n) {
    if (n < 1) throw StructuralError("segment needs at least one point");
    MetricSpaceModel m;
    m.kind_ = MetricKind::euclidean_segment;
    const double step = n > 1 ? (b - a) / double(n - 1) : 0.0;
    for (std::size_t i = 0; i < n; ++i) m.coords_.push_back({a + double(i) * step});
    m.mesh_ = std::abs(step);
    m.fill_euclidean();
    return m;
  }

  /// Segment sample from explicit coordinates (may be irregular).
  static MetricSpaceModel segment_points(std::vector<double> xs, double mesh) {
    MetricSpaceModel m;
    m.kind_ = MetricKind::euclidean_segment;
    for (double x : xs) m.coords_.push_back({x});
    m.mesh_ = mesh;
    m.fill_euclidean();
    return m;
  }

  static MetricSpaceModel euclidean_plane_sample(std::vector<std::pair<double, double>> pts, double mesh) {
    MetricSpaceModel m;
    m.kind_ = MetricKind::euclidean_plane_sample;
    for (auto [x, y] : pts) m.coords_.push_back({x, y});
    m.mesh_ = mesh;
    m.fill_euclidean();
    return m;
  }

  /// Metric graph: every edge is subdivided so consecutive samples are at most
  /// `mesh` apart; distances are shortest-path lengths.
  static MetricSpaceModel metric_graph(std::size_t vertex_count, const std::vector<GraphEdge>& edges,
                                       double mesh) {
    if (mesh <= 0.0) throw StructuralError("metric graph mesh must be positive");
    MetricSpaceModel m;
    m.kind_ = MetricKind::metric_graph;
    m.mesh_ = mesh;
    std::vector<GraphEdge> fine;
    std::size_t next = vertex_count;
    for (const auto& e : edges) {
      if (e.u >= vertex_count || e.v >= vertex_count || !(e.length > 0.0))
        throw StructuralError("bad graph edge");
      const auto pieces = static_cast<std::size_t>(std::ceil(e.length / mesh - 1e-9));
      const double step = e.length / double(pieces);
      std::size_t prev = e.u;
      for (std::size_t k = 1; k < pieces; ++k) {
        fine.push_back({prev, next, step});
        prev = next++;
      }
      fine.push_back({prev, e.v, step});
    }
    const std::size_t n = next;
    const double inf = std::numeric_limits<double>::infinity();
    m.d_.assign(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i) m.d_[i][i] = 0.0;
    for (const auto& e : fine) {
      m.d_[e.u][e.v] = std::min(m.d_[e.u][e.v], e.length);
      m.d_[e.v][e.u] = std::min(m.d_[e.v][e.u], e.length);
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (m.d_[i][k] + m.d_[k][j] < m.d_[i][j]) m.d_[i][j] = m.d_[i][k] + m.d_[k][j];
    for (const auto& row : m.d_)
      for (double v : row)
        if (std::isinf(v)) throw StructuralError("metric graph is disconnected");
    return m;
  }

  static MetricSpaceModel explicit_table(Table<double> d, double mesh) {
    for (const auto& row : d)
      if (row.size() != d.size()) throw StructuralError("distance table must be square");
    MetricSpaceModel m;
    m.kind_ = MetricKind::explicit_table;
    m.d_ = std::move(d);
    m.mesh_ = mesh;
    return m;
  }

  MetricKind kind() const { return kind_; }
  std::size_t size() const { return d_.size(); }
  double mesh() const { return mesh_; }
  double distance(std::size_t i, std::size_t j) const { return d_.at(i).at(j); }
  const Table<double>& table() const { return d_; }
  const std::vector<std::vector<double>>& coordinates() const { return coords_; }

  /// Sample points lying on a minimizer from i to j, ordered by distance from i.
  /// A point k is on it when d(i,k) + d(k,j) = d(i,j).
  std::vector<std::size_t> geodesic(std::size_t i, std::size_t j, double eps = kEps) const {
    std::vector<std::size_t> out;
    const double dij = distance(i, j);
    for (std::size_t k = 0; k < size(); ++k)
      if (distance(i, k) + distance(k, j) <= dij + eps) out.push_back(k);
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
      const double da = distance(i, a), db = distance(i, b);
      return da != db ? da < db : a < b;
    });
    // keep a single chain: drop points that are not d-additive with their predecessor
    std::vector<std::size_t> chain;
    for (std::size_t k : out) {
      if (chain.empty()) {
        chain.push_back(k);
        continue;
      }
      const std::size_t last = chain.back();
      if (std::abs(distance(i, last) + distance(last, k) - distance(i, k)) <= eps &&
          distance(last, k) > 0.0)
        chain.push_back(k);
    }
    if (chain.empty() || chain.back() != j) chain.push_back(j);
    return chain;
  }

  /// True iff the given points are pairwise at least mesh/2 apart.
  bool separated(const std::vector<std::size_t>& idx) const {
    const double min_sep = 0.5 * mesh_;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (idx[a] != idx[b] && distance(idx[a], idx[b]) < min_sep - kEps) return false;
    return true;
  }

  /// Properness at sample scale: the sample is a mesh/2-separated net, so every
  /// bounded ball holds finitely many points and no Cauchy sequence of samples
  /// runs off to a missing limit.
  bool proper_at_sample_scale() const {
    std::vector<std::size_t> all(size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return separated(all);
  }

  /// First pair closer than mesh/2, if any.
  std::optional<std::pair<std::size_t, std::size_t>> accumulation_witness() const {
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = a + 1; b < size(); ++b)
        if (distance(a, b) < 0.5 * mesh_ - kEps) return std::make_pair(a, b);
    return std::nullopt;
  }

  /// Index of the sample point with the given coordinate (segment kind).
  std::optional<std::size_t> find_coordinate(double x, double tol = 1e-9) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (!coords_[i].empty() && std::abs(coords_[i][0] - x) <= tol) return i;
    return std::nullopt;
  }

 private:
  void fill_euclidean() {
    const std::size_t n = coords_.size();
    d_.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < coords_[i].size(); ++c) {
          const double diff = coords_[i][c] - coords_[j][c];
          s += diff * diff;
        }
        d_[i][j] = std::sqrt(s);
      }
  }

  MetricKind kind_ = MetricKind::explicit_table;
  std::vector<std::vector<double>> coords_;
  Table<double> d_;
  double mesh_ = 0.0;
};

// ---------------------------------------------------------------------------
// Lorentzian products R x X
// ---------------------------------------------------------------------------

struct ProductPoint {
  double t = 0.0;
  std::size_t x = 0;  // index into the factor sample
  friend bool operator==(const ProductPoint&, const ProductPoint&) = default;
};

/// The Lorentzian product of a sampled metric space with the real line.
/// Time is continuous; the factor coordinate is a sample index.
class ProductSpace {
 public:
  using point_type = ProductPoint;

  ProductSpace() = default;
  explicit ProductSpace(MetricSpaceModel factor, std::optional<TimeGrid> grid = std::nullopt,
                        double eps = kEps)
      : factor_(std::move(factor)), grid_(grid), eps_(eps) {}

  const MetricSpaceModel& factor() const { return factor_; }
  const TimeGrid* time_grid() const { return grid_ ? &*grid_ : nullptr; }
  double eps() const { return eps_; }
  double mesh() const { return std::max(factor_.mesh(), grid_ ? grid_->t_step : 0.0); }

  double factor_distance(const ProductPoint& p, const ProductPoint& q) const {
    return factor_.distance(p.x, q.x);
  }
  double distance(const ProductPoint& p, const ProductPoint& q) const {
    return std::hypot(q.t - p.t, factor_distance(p, q));
  }
  bool causal(const ProductPoint& p, const ProductPoint& q) const {
    return detail::causal_increments(q.t - p.t, factor_distance(p, q), eps_);
  }
  bool timelike(const ProductPoint& p, const ProductPoint& q) const {
    return detail::timelike_increments(q.t - p.t, factor_distance(p, q), eps_);
  }
  double tau(const ProductPoint& p, const ProductPoint& q) const {
    return detail::tau_from_increments(q.t - p.t, factor_distance(p, q), eps_);
  }

  /// Maximizer from p to q: time affine in factor arclength along a factor
  /// minimizer; vertices at every factor sample on the minimizer. A constant
  /// factor gives a vertical chain with `vertical_segments()` pieces.
  std::vector<ProductPoint> realizer(const ProductPoint& p, const ProductPoint& q) const {
    if (!causal(p, q)) throw NotRelatedError("product realizer: endpoints not causally related");
    std::vector<ProductPoint> out;
    if (p.x == q.x) {
      for (int k = 0; k <= vertical_segments_; ++k)
        out.push_back({p.t + (q.t - p.t) * double(k) / vertical_segments_, p.x});
      return out;
    }
    const double len = factor_.distance(p.x, q.x);
    for (std::size_t k : factor_.geodesic(p.x, q.x)) {
      const double frac = factor_.distance(p.x, k) / len;
      out.push_back({p.t + (q.t - p.t) * frac, k});
    }
    out.back() = q;
    return out;
  }

  /// Point at tau-arclength fraction f; the factor position snaps to the
  /// nearest sample on the factor minimizer.
  ProductPoint point_along(const ProductPoint& p, const ProductPoint& q, double f) const {
    const double t = p.t + f * (q.t - p.t);
    if (p.x == q.x) return {t, p.x};
    const double target = f * factor_.distance(p.x, q.x);
    std::size_t best = p.x;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k : factor_.geodesic(p.x, q.x)) {
      const double gap = std::abs(factor_.distance(p.x, k) - target);
      if (gap < best_gap) {
        best_gap = gap;
        best = k;
      }
    }
    return {t, best};
  }

  int vertical_segments() const { return vertical_segments_; }
  void set_vertical_segments(int n) { vertical_segments_ = std::max(1, n); }

  /// Grid sample: every grid time paired with every factor point.
  std::vector<ProductPoint> sample_points() const {
    std::vector<ProductPoint> out;
    if (!grid_) return out;
    for (double t : grid_->times())
      for (std::size_t x = 0; x < factor_.size(); ++x) out.push_back({t, x});
    return out;
  }

 private:
  MetricSpaceModel factor_;
  std::optional<TimeGrid> grid_;
  double eps_ = kEps;
  int vertical_segments_ = 8;
};

inline double tau_product(const ProductSpace& space, const ProductPoint& p, const ProductPoint& q) {
  return space.tau(p, q);
}

// ---------------------------------------------------------------------------
// Product theorems as checks
// ---------------------------------------------------------------------------

struct RealizerDiagnosis {
  bool is_realizer = false;
  bool factor_is_minimizer = false;
  bool factor_constant = false;
  bool time_component_affine = false;
  double speed_c = 0.0;  // +inf for a constant factor
  bool timelike = false;
  bool null = false;
  double additivity_defect = 0.0;  // tau(first,last) - sum of consecutive tau
  double affine_deviation = 0.0;   // max |t_k - t_0 - c * l_k|
  /// is_realizer <=> (factor constant or (minimizer and affine with c >= 1)).
  bool consistent = false;
};

/// Default tolerance for the affine test: twice the time step plus factor mesh.
inline double default_affine_tolerance(const ProductSpace& space) {
  const double t_step = space.time_grid() ? space.time_grid()->t_step : space.factor().mesh();
  return 2.0 * (t_step + space.factor().mesh());
}

/// Tests a causal chain against the characterization of product maximizers:
/// a maximizer either has constant factor, or its factor projection is a
/// minimizer and its time is affine in factor arclength with speed c >= 1.
inline RealizerDiagnosis check_realizer_characterization(const ProductSpace& space,
                                                         const std::vector<ProductPoint>& chain,
                                                         std::optional<double> affine_tol = std::nullopt) {
  if (chain.size() < 2) throw PreconditionError("realizer check needs at least two points");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!space.causal(chain[i], chain[i + 1]))
      throw NotRelatedError("chain is not causal at step " + std::to_string(i));
  const double tol = affine_tol.value_or(default_affine_tolerance(space));
  const auto& f = space.factor();

  RealizerDiagnosis out;
  double sum_tau = 0.0;
  double factor_len = 0.0;
  std::vector<double> cum{0.0};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    sum_tau += space.tau(chain[i], chain[i + 1]);
    factor_len += f.distance(chain[i].x, chain[i + 1].x);
    cum.push_back(factor_len);
  }
  const double end_tau = space.tau(chain.front(), chain.back());
  out.additivity_defect = end_tau - sum_tau;
  out.is_realizer = std::abs(out.additivity_defect) <= kEps * std::max(1.0, end_tau);

  const double chord = f.distance(chain.front().x, chain.back().x);
  out.factor_constant = factor_len <= kEps;
  out.factor_is_minimizer = std::abs(factor_len - chord) <= kEps * std::max(1.0, chord);
  const double dt = chain.back().t - chain.front().t;
  if (out.factor_constant) {
    out.speed_c = std::numeric_limits<double>::infinity();
    out.time_component_affine = true;
    out.timelike = dt > kEps;
  } else {
    out.speed_c = dt / factor_len;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const double expected = chain.front().t + out.speed_c * cum[k];
      out.affine_deviation = std::max(out.affine_deviation, std::abs(chain[k].t - expected));
    }
    out.time_component_affine = out.affine_deviation <= tol;
    out.null = std::abs(out.speed_c - 1.0) <= kEps;
    out.timelike = out.speed_c > 1.0 + kEps;
  }
  const bool characterized =
      out.factor_constant ||
      (out.factor_is_minimizer && out.time_component_affine && out.speed_c >= 1.0 - kEps);
  out.consistent = out.is_realizer == characterized;
  return out;
}

/// D-polygon length of a causal chain is at most sqrt(2) times its time extent.
inline bool check_nonimprisonment_bound(const ProductSpace& space, const std::vector<ProductPoint>& chain) {
  if (chain.size() < 2) return true;
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) len += space.distance(chain[i], chain[i + 1]);
  return len <= std::sqrt(2.0) * (chain.back().t - chain.front().t) + kEps;
}

struct GlobHypReport {
  bool proper_factor = false;
  bool diamonds_bounded = false;   // every member (s,y) has r<=s<=t and d(x,y) <= 2|r|+2|t|
  bool diamonds_compact = false;   // bounded and free of accumulation at sample scale
  bool verdict_consistent = false; // proper_factor <=> diamonds_compact
  std::size_t diamonds_checked = 0;
  std::optional<std::pair<std::size_t, std::size_t>> accumulation;  // factor witness
};

/// Compares factor properness with compactness of sampled causal diamonds.
/// `pairs` are (p,q) with p <= q; members are scanned over the grid sample.
inline GlobHypReport check_product_glob_hyp(const ProductSpace& space,
                                            const std::vector<std::pair<ProductPoint, ProductPoint>>& pairs) {
  GlobHypReport out;
  out.proper_factor = space.factor().proper_at_sample_scale();
  out.accumulation = space.factor().accumulation_witness();
  out.diamonds_bounded = true;
  out.diamonds_compact = true;
  const auto sample = space.sample_points();
  for (const auto& [p, q] : pairs) {
    if (!space.causal(p, q)) continue;
    ++out.diamonds_checked;
    const auto j = diamond(space, std::span<const ProductPoint>(sample), p, q, DiamondKind::causal);
    const double radius = 2.0 * std::abs(p.t) + 2.0 * std::abs(q.t);
    std::vector<std::size_t> factor_members;
    for (std::size_t i : j.members) {
      const auto& m = sample[i];
      if (m.t < p.t - kEps || m.t > q.t + kEps) out.diamonds_bounded = false;
      if (space.factor().distance(p.x, m.x) > radius + kEps) out.diamonds_bounded = false;
      factor_members.push_back(m.x);
    }
    std::sort(factor_members.begin(), factor_members.end());
    factor_members.erase(std::unique(factor_members.begin(), factor_members.end()), factor_members.end());
    if (!space.factor().separated(factor_members)) out.diamonds_compact = false;
  }
  if (!out.diamonds_bounded) out.diamonds_compact = false;
  out.verdict_consistent = out.proper_factor == out.diamonds_compact;
  return out;
}

/// An epsilon of zero in the diamond-basis construction (empty diamond).
class DegenerateError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct DiamondBasisReport {
  double epsilon = 0.0;
  ProductPoint p, q;
  std::size_t members_scanned = 0;
  bool contained = false;
};

/// Builds p=(b-e,y), q=(b+e,y) with e = min(b-a, c-b, R-d(x,y)) for a witness
/// (b,y) in O = (a,c) x B_R(x) and checks I(p,q) is inside O on a local scan.
inline DiamondBasisReport check_diamond_basis(const ProductSpace& space, double a, double c,
                                              std::size_t center, double radius,
                                              const ProductPoint& witness) {
  const double b = witness.t;
  if (!(b > a && b < c)) throw PreconditionError("diamond basis: witness time outside (a,c)");
  const double dy = space.factor().distance(center, witness.x);
  if (dy > radius + kEps) throw PreconditionError("diamond basis: witness outside the ball");
  const double e = std::min({b - a, c - b, radius - dy});
  if (!(e > kEps)) throw DegenerateError("diamond basis: epsilon is zero, diamond is empty");

  DiamondBasisReport out;
  out.epsilon = e;
  out.p = {b - e, witness.x};
  out.q = {b + e, witness.x};
  out.contained = true;
  std::vector<ProductPoint> scan = space.sample_points();
  constexpr int kSteps = 64;
  for (int k = 0; k <= kSteps; ++k)
    for (std::size_t x = 0; x < space.factor().size(); ++x)
      scan.push_back({b - e + 2.0 * e * double(k) / kSteps, x});
  for (const auto& r : scan) {
    if (!(space.timelike(out.p, r) && space.timelike(r, out.q))) continue;
    ++out.members_scanned;
    const bool in_time = r.t > a && r.t < c;
    const bool in_ball = space.factor().distance(center, r.x) < radius;
    if (!(in_time && in_ball)) out.contained = false;
  }
  return out;
}

}  // namespace lorentz
