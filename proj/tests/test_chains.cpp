#include <gtest/gtest.h>

#include "support.hpp"

using namespace lorentz;
using namespace testing_support;

namespace {

FiniteLorentzSpace three_chain(double t01, double t12, double t02) {
  TableBuilder b(3);
  b.rel(0, 1, t01).rel(1, 2, t12).rel(0, 2, t02);
  return b.build();
}

// a=0, b=1, b'=2, c=3
FiniteLorentzSpace diamond_table() {
  TableBuilder b(4);
  b.rel(0, 1, 1.0).rel(1, 3, 1.0).rel(0, 2, 0.5).rel(2, 3, 0.5).rel(0, 3, 2.0);
  return b.build();
}

// two maximizers 0-1-2-4 and 0-1-3-4 sharing the edge 0-1, with 2 and 3 unrelated
FiniteLorentzSpace branching_table() {
  TableBuilder b(5);
  b.rel(0, 1, 1).rel(1, 2, 1).rel(1, 3, 1).rel(2, 4, 1).rel(3, 4, 1);
  b.rel(0, 2, 2).rel(0, 3, 2).rel(1, 4, 2).rel(0, 4, 3);
  return b.build();
}

}  // namespace

TEST(ChainLengths, StraightChain) {
  MinkowskiSpace m;
  const auto r = chain_lengths(m, Chain<MinkowskiPoint>{{0, 0}, {1, 0}, {2, 0}});
  EXPECT_DOUBLE_EQ(r.tau_length, 2.0);
  EXPECT_DOUBLE_EQ(r.tau_length, m.tau({0, 0}, {2, 0}));
  EXPECT_DOUBLE_EQ(r.d_length, 2.0);
}

TEST(ChainLengths, KinkedChainIsShorter) {
  MinkowskiSpace m;
  const auto r = chain_lengths(m, Chain<MinkowskiPoint>{{0, 0}, {1, 0.9}, {2, 0}});
  EXPECT_NEAR(r.tau_length, 2.0 * std::sqrt(0.19), 1e-15);
  EXPECT_LT(r.tau_length, 2.0);
  EXPECT_GE(r.d_length, m.distance({0, 0}, {2, 0}));
}

TEST(ChainLengths, SinglePair) {
  MinkowskiSpace m;
  EXPECT_DOUBLE_EQ(chain_lengths(m, Chain<MinkowskiPoint>{{0, 0}, {2, 1}}).tau_length, std::sqrt(3.0));
}

TEST(ChainLengths, InvalidChainThrows) {
  MinkowskiSpace m;
  EXPECT_THROW(chain_lengths(m, Chain<MinkowskiPoint>{{0, 0}, {0, 1}}), PreconditionError);
  EXPECT_THROW(chain_lengths(m, Chain<MinkowskiPoint>{{0, 0}}), PreconditionError);
}

TEST(MaximizeTau, ThreeChainTie) {
  const auto r = maximize_tau(three_chain(1, 1, 2), 0, 2);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_GE(r.tie_count, 2u);
  EXPECT_EQ(r.chain, (Chain<PointId>{0, 1, 2}));  // lexicographically smallest
  EXPECT_EQ(r.intrinsic_defect, 0.0);
}

TEST(MaximizeTau, DiamondViaB) {
  const auto s = diamond_table();
  const auto r = maximize_tau(s, 0, 3);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_EQ(r.chain, (Chain<PointId>{0, 1, 3}));
  EXPECT_DOUBLE_EQ(r.value, enumerate_longest(s, 0, 3));
  EXPECT_EQ(r.intrinsic_defect, 0.0);
}

TEST(MaximizeTau, NotRelatedAndNonCausal) {
  const auto s = diamond_table();
  EXPECT_THROW(maximize_tau(s, 3, 0), NotRelatedError);
  EXPECT_THROW(maximize_tau(s, 1, 2), NotRelatedError);
  TableBuilder b(2);
  b.rel(0, 1, 0.0);
  b.leq[1][0] = true;
  EXPECT_THROW(maximize_tau(b.build(), 0, 1), NonCausalError);
}

TEST(MaximizeTau, AgreesWithBruteForceAndEnumeration) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 4 + seed % 9;
    const auto s = random_causal_set(n, seed);
    for (PointId a = 0; a < n; ++a)
      for (PointId b = 0; b < n; ++b) {
        if (!s.causal(a, b)) continue;
        const auto r = maximize_tau(s, a, b);
        EXPECT_EQ(r.value, brute_force_tau(s, a, b)) << "seed " << seed;
        EXPECT_NEAR(r.value, enumerate_longest(s, a, b), 1e-12);
        // the returned chain attains the value
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < r.chain.size(); ++k) sum += s.tau(r.chain[k], r.chain[k + 1]);
        EXPECT_NEAR(sum, r.value, 1e-12);
        EXPECT_EQ(r.chain.front(), a);
        EXPECT_EQ(r.chain.back(), b);
      }
  }
}

TEST(MaximizeTau, ConcatenationSuperadditive) {
  const auto s = random_causal_set(10, 42);
  for (PointId a = 0; a < 10; ++a)
    for (PointId m = 0; m < 10; ++m)
      for (PointId b = 0; b < 10; ++b)
        if (s.causal(a, m) && s.causal(m, b))
          EXPECT_LE(maximize_tau(s, a, m).value + maximize_tau(s, m, b).value, maximize_tau(s, a, b).value + 1e-12);
}

TEST(MaximizeTau, LengthSpaceHasNoIntrinsicDefect) {
  const auto s = minkowski_table({{0, 0}, {1, 0}, {2, 0}, {1, 0.5}, {3, 0.2}});
  for (PointId a = 0; a < s.size(); ++a)
    for (PointId b = 0; b < s.size(); ++b)
      if (s.causal(a, b)) EXPECT_NEAR(maximize_tau(s, a, b).intrinsic_defect, 0.0, 1e-12);
}

TEST(BruteForce, SizeLimit) {
  const auto big = random_causal_set(21, 1);
  EXPECT_THROW(brute_force_tau(big, 0, 0), PreconditionError);
  EXPECT_EQ(brute_force_tau(three_chain(1, 1, 2), 0, 2), 2.0);
}

TEST(IsLine, VerticalGridChain) {
  ProductSpace X(MetricSpaceModel::euclidean_segment(0.0, 1.0, 5));
  Chain<ProductPoint> c;
  for (int k = 0; k <= 10; ++k) c.push_back({0.5 * k, 2});
  const auto r = is_line(X, c, 4.0);
  EXPECT_TRUE(r.is_line);
  EXPECT_TRUE(r.is_ray);
  EXPECT_DOUBLE_EQ(r.tau_length, 5.0);
  EXPECT_TRUE(*r.reaches_horizon);
}

TEST(IsLine, KinkReportsFirstFailure) {
  MinkowskiSpace m;
  const Chain<MinkowskiPoint> c{{0, 0}, {1, 0}, {2, 0.5}, {3, 0}};
  const auto r = is_line(m, c);
  EXPECT_FALSE(r.is_line);
  ASSERT_TRUE(r.first_failure.has_value());
  // (0,1,2): tau(c0,c2) = sqrt(4 - 0.25) != 1 + sqrt(0.75)
  EXPECT_EQ(*r.first_failure, std::make_pair(std::size_t(0), std::size_t(2)));
}

TEST(IsLine, RayButNotLine) {
  // additive from the anchor, but not between two later points
  TableBuilder b(3);
  b.rel(0, 1, 1).rel(1, 2, 1).rel(0, 2, 2);
  auto s = b.build();
  EXPECT_TRUE(is_line(s, Chain<PointId>{0, 1, 2}).is_line);
  EXPECT_TRUE(is_line(s, Chain<PointId>{0, 2}).is_line);  // two points: trivially a line
}

TEST(Reparametrize, VerticalAndTilted) {
  ProductSpace X(MetricSpaceModel::euclidean_segment(0.0, 1.0, 3));
  const auto v = reparametrize_tau_arclength(X, Chain<ProductPoint>{{0, 1}, {1, 1}, {2, 1}});
  EXPECT_EQ(v.params, (std::vector<double>{0, 1, 2}));
  MinkowskiSpace m;
  const auto t = reparametrize_tau_arclength(m, Chain<MinkowskiPoint>{{0, 0}, {1, 0.5}, {2, 1}});
  EXPECT_NEAR(t.params[1], std::sqrt(0.75), 1e-15);
  EXPECT_NEAR(t.params[2], 2.0 * std::sqrt(0.75), 1e-15);
  EXPECT_THROW(reparametrize_tau_arclength(m, Chain<MinkowskiPoint>{{0, 0}, {1, 1}}), PreconditionError);
}

TEST(Reparametrize, InvariantUnderRefinement) {
  MinkowskiSpace m;
  const auto coarse = reparametrize_tau_arclength(m, Chain<MinkowskiPoint>{{0, 0}, {2, 1}, {4, 2}});
  const auto fine = reparametrize_tau_arclength(m, Chain<MinkowskiPoint>{{0, 0}, {1, 0.5}, {2, 1}, {3, 1.5}, {4, 2}});
  EXPECT_NEAR(coarse.params[1], fine.params[2], 1e-14);
  EXPECT_NEAR(coarse.params[2], fine.params[4], 1e-14);
}

TEST(Nonbranching, ProductGridHasNone) {
  ProductSpace X(MetricSpaceModel::euclidean_segment(0.0, 1.0, 5), TimeGrid{0.0, 1.5, 0.25});
  const auto pts = X.sample_points();
  const auto s = materialize(X, std::span<const ProductPoint>(pts));
  std::vector<std::pair<PointId, PointId>> pairs;
  for (PointId a = 0; a < s.size(); ++a)
    for (PointId b = 0; b < s.size(); ++b)
      if (s.timelike(a, b)) pairs.emplace_back(a, b);
  EXPECT_TRUE(check_nonbranching(s, pairs).empty());
}

TEST(Nonbranching, HandBuiltBranchingListed) {
  const auto v = check_nonbranching(branching_table(), {{0, 4}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].branch_point, 1u);
  EXPECT_EQ(std::min(v[0].a, v[0].b), 2u);
  EXPECT_EQ(std::max(v[0].a, v[0].b), 3u);
}

TEST(Nonbranching, SingleRealizerEmpty) {
  EXPECT_TRUE(check_nonbranching(three_chain(1, 1, 3), {{0, 2}}).empty());
}
