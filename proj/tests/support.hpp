#pragma once

// Generators and independent oracles shared by the tests.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "lorentz/lorentz.hpp"

namespace testing_support {

using namespace lorentz;

/// Random causal set: a random DAG on 0..n-1 (edges i<j), transitively closed,
/// with random tau on a random sub-relation of timelike pairs. Not a length
/// space in general; only antisymmetry is guaranteed.
inline FiniteLorentzSpace random_causal_set(std::size_t n, std::uint64_t seed, double edge_p = 0.4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Table<bool> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    leq[i][i] = true;
    for (std::size_t j = i + 1; j < n; ++j) leq[i][j] = U(rng) < edge_p;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
  Table<bool> ll(n, std::vector<bool>(n, false));
  Table<double> tau(n, std::vector<double>(n, 0.0));
  Table<double> d(n, std::vector<double>(n, 0.0));
  std::vector<std::pair<double, double>> xy(n);
  for (auto& p : xy) p = {U(rng), U(rng)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      d[i][j] = std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second);
      if (i != j && leq[i][j] && U(rng) < 0.8) {
        ll[i][j] = true;
        tau[i][j] = 0.05 + U(rng);
      }
    }
  return FiniteLorentzSpace(d, leq, ll, tau);
}

/// Independent longest-chain oracle: enumerate every causal chain by
/// recursion over subsets of successors.
inline double enumerate_longest(const FiniteLorentzSpace& s, PointId a, PointId b) {
  if (a == b) return 0.0;
  double best = -INFINITY;
  std::function<void(PointId, double)> go = [&](PointId u, double acc) {
    if (u == b) {
      best = std::max(best, acc);
      return;
    }
    for (PointId v = 0; v < s.size(); ++v)
      if (v != u && s.causal(u, v) && s.causal(v, b)) go(v, acc + s.tau(u, v));
  };
  go(a, 0.0);
  return best;
}

/// Sprinkling of n points into the Minkowski diamond J((0,0),(2,0)),
/// materialized as a finite space.
inline std::vector<MinkowskiPoint> sprinkle(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<MinkowskiPoint> out;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = U(rng), v = U(rng);  // light-cone coordinates
    out.push_back({u + v, u - v});
  }
  return out;
}

/// Metric table of points on the hyperbolic plane (curvature -1), given in
/// polar coordinates about a common centre.
inline Table<double> hyperbolic_table(const std::vector<std::pair<double, double>>& polar) {
  const std::size_t n = polar.size();
  Table<double> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto [r1, a1] = polar[i];
      const auto [r2, a2] = polar[j];
      const double ch = std::cosh(r1) * std::cosh(r2) - std::sinh(r1) * std::sinh(r2) * std::cos(a1 - a2);
      d[i][j] = std::acosh(std::max(1.0, ch));
    }
  return d;
}

/// Euclidean distance table of planar points.
inline Table<double> euclidean_table(const std::vector<std::pair<double, double>>& pts) {
  const std::size_t n = pts.size();
  Table<double> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
  return d;
}

/// Finite space given by explicit future pairs with tau; leq is the
/// reflexive transitive closure of the listed pairs plus any extra causal
/// pairs; ll holds exactly where tau > 0.
struct TableBuilder {
  std::size_t n;
  Table<double> d, tau;
  Table<bool> leq, ll;
  explicit TableBuilder(std::size_t n_)
      : n(n_),
        d(n_, std::vector<double>(n_, 1.0)),
        tau(n_, std::vector<double>(n_, 0.0)),
        leq(n_, std::vector<bool>(n_, false)),
        ll(n_, std::vector<bool>(n_, false)) {
    for (std::size_t i = 0; i < n; ++i) {
      d[i][i] = 0.0;
      leq[i][i] = true;
    }
  }
  TableBuilder& rel(std::size_t i, std::size_t j, double t) {
    leq[i][j] = true;
    tau[i][j] = t;
    ll[i][j] = t > 0.0;
    return *this;
  }
  FiniteLorentzSpace build() const { return FiniteLorentzSpace(d, leq, ll, tau); }
};

/// A finite space from Minkowski coordinates with exact relations.
inline FiniteLorentzSpace minkowski_table(const std::vector<MinkowskiPoint>& pts) {
  MinkowskiSpace m;
  return materialize(m, std::span<const MinkowskiPoint>(pts));
}

}  // namespace testing_support
