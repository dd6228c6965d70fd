#include <gtest/gtest.h>

#include "support.hpp"

using namespace lorentz;
using namespace testing_support;

namespace {

FiniteLorentzSpace two_point(double tau01, bool ll01) {
  TableBuilder b(2);
  b.rel(0, 1, tau01);
  b.ll[0][1] = ll01;
  return b.build();
}

// 0 << 1 << 2 with the given taus
FiniteLorentzSpace three_chain(double t01, double t12, double t02) {
  TableBuilder b(3);
  b.rel(0, 1, t01).rel(1, 2, t12).rel(0, 2, t02);
  b.d[0][2] = b.d[2][0] = 2.0;
  return b.build();
}

}  // namespace

TEST(ValidateAxioms, MinimalChainPasses) {
  const auto r = validate_axioms(two_point(1.0, true));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.first_failure(), nullptr);
}

TEST(ValidateAxioms, TauZeroWhileTimelikeFails) {
  const auto r = validate_axioms(two_point(0.0, true));
  ASSERT_FALSE(r.passed());
  const auto* a = r.find(axiom::kTauPositiveIffLl);
  ASSERT_NE(a, nullptr);
  EXPECT_FALSE(a->passed);
  EXPECT_EQ(a->witness, (std::vector<PointId>{0, 1}));
}

TEST(ValidateAxioms, ReverseTriangleViolation) {
  const auto r = validate_axioms(three_chain(1.0, 1.0, 1.5));
  const auto* a = r.find(axiom::kReverseTriangle);
  ASSERT_NE(a, nullptr);
  EXPECT_FALSE(a->passed);
  EXPECT_EQ(a->witness, (std::vector<PointId>{0, 1, 2}));
  // nothing else is wrong with this table
  for (const auto& o : r.axioms)
    if (o.name != axiom::kReverseTriangle) EXPECT_TRUE(o.passed) << o.name;
}

TEST(ValidateAxioms, MalformedTablesAreStructuralErrors) {
  Table<double> d{{0, 1}, {1, 0}};
  Table<bool> leq{{true, true}, {false, true}};
  Table<bool> ll_bad{{false, true}};
  Table<double> tau{{0, 1}, {0, 0}};
  EXPECT_THROW(FiniteLorentzSpace(d, leq, ll_bad, tau), StructuralError);
  Table<double> tau_ragged{{0, 1}, {0}};
  EXPECT_THROW(FiniteLorentzSpace(d, leq, leq, tau_ragged), StructuralError);
}

TEST(ValidateAxioms, IdempotentAndDeterministic) {
  const auto s = random_causal_set(9, 3);
  const auto a = validate_axioms(s), b = validate_axioms(s);
  ASSERT_EQ(a.axioms.size(), b.axioms.size());
  for (std::size_t i = 0; i < a.axioms.size(); ++i) {
    EXPECT_EQ(a.axioms[i].passed, b.axioms[i].passed);
    EXPECT_EQ(a.axioms[i].witness, b.axioms[i].witness);
  }
}

TEST(ValidateAxioms, SprinkledMinkowskiSetsPass) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = minkowski_table(sprinkle(25, seed));
    EXPECT_TRUE(validate_axioms(s).passed()) << "seed " << seed;
    for (PointId i = 0; i < s.size(); ++i) EXPECT_EQ(s.tau(i, i), 0.0);
  }
}

TEST(ValidateAxioms, MetricFailuresAreNamed) {
  TableBuilder b(3);
  b.d[0][2] = b.d[2][0] = 5.0;  // 5 > 1 + 1
  b.d[1][0] = 2.0;              // asymmetric
  const auto r = validate_axioms(b.build());
  EXPECT_FALSE(r.find(axiom::kMetricTriangle)->passed);
  EXPECT_FALSE(r.find(axiom::kMetricSymmetric)->passed);
  EXPECT_TRUE(r.find(axiom::kMetricZero)->passed);
}

TEST(Pushup, MinkowskiExampleHolds) {
  MinkowskiSpace m;
  const std::vector<MinkowskiPoint> pts{{0, 0}, {1, 0.9}, {2, 1.9}};
  const auto r = check_pushup(m, std::span<const MinkowskiPoint>(pts));
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.triples_checked, 0u);
  // the second pair is null-leaning but causal; first pair timelike
  EXPECT_TRUE(m.timelike(pts[0], pts[1]));
  EXPECT_TRUE(m.causal(pts[1], pts[2]));
  EXPECT_TRUE(m.timelike(pts[0], pts[2]));
}

TEST(Pushup, ConstructedCounterexample) {
  TableBuilder b(3);
  b.rel(0, 1, 1.0);  // x << y
  b.leq[1][2] = true;  // y <= z, null
  b.leq[0][2] = true;  // x <= z but not x << z
  const auto s = b.build();
  const auto pts = s.points();
  const auto r = check_pushup(s, std::span<const PointId>(pts));
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(r.violations[0].x, 0u);
  EXPECT_EQ(r.violations[0].y, 1u);
  EXPECT_EQ(r.violations[0].z, 2u);
  EXPECT_TRUE(r.violations[0].timelike_first);
}

TEST(Pushup, EmptySampleVacuous) {
  MinkowskiSpace m;
  std::vector<MinkowskiPoint> none;
  EXPECT_TRUE(check_pushup(m, std::span<const MinkowskiPoint>(none)).passed());
}

TEST(Pushup, HoldsOnEveryValidatedSpace) {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    const auto s = minkowski_table(sprinkle(15, seed));
    ASSERT_TRUE(validate_axioms(s).passed());
    const auto pts = s.points();
    EXPECT_TRUE(check_pushup(s, std::span<const PointId>(pts)).passed());
  }
}

TEST(Diamond, ThreeChainCausal) {
  const auto s = three_chain(1.0, 1.0, 2.0);
  const auto j = diamond(s, 0, 2, DiamondKind::causal);
  EXPECT_EQ(j.members, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Diamond, NullMiddleGivesEmptyTimelikeDiamond) {
  TableBuilder b(3);
  b.leq[0][1] = b.leq[1][2] = true;  // causal only
  b.rel(0, 2, 1.0);
  const auto s = b.build();
  EXPECT_TRUE(diamond(s, 0, 2, DiamondKind::timelike).members.empty());
  EXPECT_EQ(diamond(s, 0, 2, DiamondKind::causal).members.size(), 3u);
}

TEST(Diamond, ProductGridMatchesBruteForce) {
  ProductSpace X(MetricSpaceModel::euclidean_segment(0.0, 1.0, 21), TimeGrid{0.0, 2.0, 0.1});
  const auto sample = X.sample_points();
  const std::size_t x0 = 10;
  const ProductPoint p{0.0, x0}, q{2.0, x0};
  const auto j = diamond(X, std::span<const ProductPoint>(sample), p, q, DiamondKind::causal);
  std::vector<std::size_t> expect;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& r = sample[i];
    const double dy = std::abs(0.05 * double(r.x) - 0.05 * double(x0));
    if (dy <= std::min(r.t, 2.0 - r.t) + 1e-9) expect.push_back(i);
  }
  EXPECT_EQ(j.members, expect);
}

TEST(Diamond, MonotoneNesting) {
  const auto s = minkowski_table(sprinkle(30, 7));
  for (PointId p = 0; p < s.size(); ++p)
    for (PointId q = 0; q < s.size(); ++q)
      for (PointId q2 = 0; q2 < s.size(); ++q2) {
        if (!s.causal(p, q) || !s.causal(q, q2)) continue;
        const auto a = diamond(s, p, q, DiamondKind::causal).members;
        const auto b = diamond(s, p, q2, DiamondKind::causal).members;
        EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
      }
}

TEST(CausalConvexity, FullSpaceAndHole) {
  const auto s = three_chain(1.0, 1.0, 2.0);
  const std::vector<PointId> all{0, 1, 2}, hole{0, 2};
  EXPECT_TRUE(check_causal_convexity(s, std::span<const PointId>(all)));
  EXPECT_FALSE(check_causal_convexity(s, std::span<const PointId>(hole)));
}

TEST(CausalConvexity, IGammaInProductGrid) {
  ProductSpace X(MetricSpaceModel::euclidean_segment(0.0, 1.0, 11), TimeGrid{-1.0, 1.0, 0.1});
  const auto line = vertical_line(X, 5, -2.0, 2.0, 0.1);
  const auto sample = X.sample_points();
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (in_i_gamma(X, line, sample[i])) inside.push_back(i);
  EXPECT_FALSE(inside.empty());
  EXPECT_TRUE(check_causal_convexity(X, std::span<const ProductPoint>(sample), std::span<const std::size_t>(inside)));
}

TEST(Materialize, ReproducesAnalyticRelations) {
  MinkowskiSpace m;
  const auto pts = sprinkle(12, 1);
  const auto s = materialize(m, std::span<const MinkowskiPoint>(pts));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      EXPECT_EQ(s.tau(i, j), m.tau(pts[i], pts[j]));
      EXPECT_EQ(s.causal(i, j), m.causal(pts[i], pts[j]));
    }
}
