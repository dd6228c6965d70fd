#include <gtest/gtest.h>

#include "support.hpp"

using namespace lorentz;
using namespace testing_support;

namespace {

ProductSpace segment21() {
  return ProductSpace(MetricSpaceModel::euclidean_segment(0.0, 1.0, 21), TimeGrid{-2.0, 2.0, 0.05});
}

// gamma = g0..g6 (ids 2..8) with tau(gi, gj) = j - i; p = 0 and n = 1 with
// p <= n null and tau(n, gk) = tau(p, gk), so maximizers from p start null.
FiniteLorentzSpace null_coray_table() {
  TableBuilder b(9);
  auto g = [](std::size_t k) { return k + 2; };
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = i + 1; j < 7; ++j) b.rel(g(i), g(j), double(j - i));
  b.rel(g(0), 0, 0.5).rel(g(0), 1, 0.5);
  b.leq[0][1] = true;
  for (std::size_t k = 2; k < 7; ++k) b.rel(0, g(k), double(k) - 1.2).rel(1, g(k), double(k) - 1.2);
  return b.build();
}

LineDescriptor<PointId> coray_gamma() {
  LineDescriptor<PointId> l;
  for (std::size_t k = 0; k < 7; ++k) {
    l.chain.push_back(k + 2);
    l.tau_params.push_back(double(k));
  }
  return l;
}

}  // namespace

TEST(Lines, DescriptorsAndMembership) {
  const auto X = segment21();
  const auto g = vertical_line(X, 10, -128, 128, 0.25);
  EXPECT_EQ(g.chain[g.anchor].t, 0.0);
  EXPECT_TRUE(g.find(64.0).has_value());
  EXPECT_FALSE(g.find(0.1).has_value());
  EXPECT_TRUE(in_i_gamma(X, g, {0.0, 0}));
  EXPECT_FALSE(in_i_gamma(X, vertical_line(X, 10, -0.25, 0.25, 0.25), {0.0, 0}));
  EXPECT_THROW(vertical_line(X, 21, -1, 1, 0.5), PreconditionError);
  EXPECT_THROW(vertical_line(X, 0, 0.5, 1, 0.5), PreconditionError);
}

TEST(Lines, MakeLineRejectsKink) {
  MinkowskiSpace m;
  const auto l = make_line(m, {{0, 0}, {1, 0}, {2, 0}}, 1);
  EXPECT_EQ(l.tau_params, (std::vector<double>{-1, 0, 1}));
  EXPECT_THROW(make_line(m, {{0, 0}, {1, 0.6}, {2, 0}}, 0), PreconditionError);
}

TEST(Asymptote, ProductVerticalLimit) {
  const auto X = segment21();
  const auto g = vertical_line(X, 10, -128, 128, 0.25);
  AsymptoteOptions opt;
  opt.mesh = 0.05;
  const ProductPoint p{0.0, 14};
  const auto r = build_asymptote(X, g, p, Direction::future, geometric_horizons(), opt);
  EXPECT_TRUE(r.stable);
  EXPECT_TRUE(r.is_timelike);
  ASSERT_GE(r.limit.size(), 2u);
  for (const auto& k : r.limit) EXPECT_EQ(k.x, 14u);
  EXPECT_TRUE(check_asymptote_complete(r, 1.0));
  const auto past = build_asymptote(X, g, p, Direction::past, geometric_horizons(), opt);
  const auto line = join_asymptotic_line(X, r, past);
  EXPECT_EQ(line.chain[line.anchor].t, 0.0);
  EXPECT_TRUE(is_line(X, line.chain).is_line);
}

TEST(Asymptote, MinkowskiAnalyticIsParallelTranslate) {
  MinkowskiSpace m;
  const auto g = straight_line({0, 0}, 0.4, -300, 300, 0.5);
  const MinkowskiPoint p{0.3, 1.0};
  const auto r = build_asymptote(m, g, p, Direction::future, geometric_horizons());
  ASSERT_GE(r.limit.size(), 2u);
  const auto v = r.limit.back() - r.limit.front();
  EXPECT_NEAR(std::atanh(v.x / v.t), 0.4, 1e-12);
  EXPECT_TRUE(r.is_timelike);
}

TEST(Asymptote, OutsideIGammaRejected) {
  const auto X = segment21();
  const auto g = vertical_line(X, 10, -1, 1, 0.25);
  EXPECT_THROW(build_asymptote(X, g, {0.0, 0}, Direction::future, {0.5}), PreconditionError);
}

TEST(Asymptote, HorizonsMustFitTheLine) {
  const auto X = segment21();
  const auto g = vertical_line(X, 10, -8, 8, 0.25);
  EXPECT_THROW(build_asymptote(X, g, {0.0, 10}, Direction::future, {2, 1}), PreconditionError);
  EXPECT_THROW(build_asymptote(X, g, {0.0, 10}, Direction::future, {4, 16}), PreconditionError);
}

TEST(Tcrc, ProductProbesTimelike) {
  const auto X = segment21();
  const auto g = vertical_line(X, 10, -128, 128, 0.25);
  AsymptoteOptions opt;
  opt.mesh = 0.05;
  const auto rep = check_tcrc(X, g, {{0.0, 0}, {0.5, 12}, {-0.5, 10}}, geometric_horizons(), opt);
  EXPECT_TRUE(rep.all_timelike);
  EXPECT_EQ(rep.probes, 3u);
}

TEST(Tcrc, NullCoRayFlagged) {
  const auto s = null_coray_table();
  const auto rep = check_tcrc(s, coray_gamma(), {PointId(0)}, {2, 4, 6});
  EXPECT_FALSE(rep.all_timelike);
  ASSERT_FALSE(rep.witnesses.empty());
  EXPECT_EQ(rep.witnesses.front().knot, 0u);
  EXPECT_EQ(rep.witnesses.front().step_tau, 0.0);
}

TEST(Busemann, MinkowskiClosedForm) {
  const auto g = straight_line({0, 0}, 0.0, -128, 128, 0.25);
  EXPECT_DOUBLE_EQ(minkowski_busemann(g, {1.0, 0.5}), 1.0);
  MinkowskiSpace m;
  const auto est = busemann_value(m, g, {1.0, 0.5}, geometric_horizons());
  EXPECT_NEAR(est.value, 1.0, 1e-9);
  const auto boosted = straight_line({0, 0}, 0.5, -128, 128, 0.25);
  const MinkowskiPoint p{1.0, 0.2};
  EXPECT_NEAR(minkowski_busemann(boosted, p), std::cosh(0.5) * 1.0 - std::sinh(0.5) * 0.2, 1e-15);
}

TEST(Busemann, ProductErrorBound) {
  const auto X = segment21();
  const auto g = vertical_line(X, 10, -256, 256, 0.25);
  const auto H = geometric_horizons(1.0, 9);
  for (double s : {-1.0, -0.25, 0.0, 0.5, 1.5})
    for (std::size_t x : {0u, 4u, 10u, 17u, 20u}) {
      const ProductPoint q{s, x};
      const auto est = busemann_value(X, g, q, H);
      const double d = X.factor().distance(x, 10);
      EXPECT_LE(std::abs(est.value - s), d * d / (2.0 * (H.back() - s)) + 1e-12) << s << " " << x;
    }
}

TEST(Busemann, NotInPastRejected) {
  const auto X = segment21();
  const auto g = vertical_line(X, 10, -8, 8, 0.25);
  EXPECT_THROW(busemann_value(X, g, {20.0, 10}, {1, 2}), PreconditionError);
}

TEST(BusemannLine, ProductKnotsAtBusemannParameters) {
  const auto X = segment21();
  const auto g = vertical_line(X, 10, -128, 128, 0.25);
  BusemannLineOptions opt;
  opt.mesh = 0.05;
  const ProductPoint p{0.5, 3};
  const auto a = busemann_asymptotic_line(X, g, p, opt);
  EXPECT_NEAR(a.busemann.value, 0.5, 0.05);
  for (std::size_t i = 0; i < a.line.size(); ++i) {
    EXPECT_EQ(a.line.chain[i].x, 3u);
    EXPECT_NEAR(a.line.chain[i].t, a.line.tau_params[i], 0.05);
  }
}

TEST(BusemannLine, MinkowskiExact) {
  MinkowskiSpace m;
  const auto g = straight_line({0, 0}, 0.0, -128, 128, 0.25);
  const auto a = busemann_asymptotic_line(m, g, {0.5, 0.7});
  const auto at0 = a.line.at(0.0);
  EXPECT_DOUBLE_EQ(at0.t, 0.0);
  EXPECT_DOUBLE_EQ(at0.x, 0.7);
}

TEST(Verticality, ProductVerticalTarget) {
  const auto X = segment21();
  const auto g = vertical_line(X, 10, -256, 256, 0.25);
  BusemannLineOptions opt;
  opt.horizons = geometric_horizons(1.0, 9);
  const auto v = verticality_profile(X, g, {0.0, 2}, {1.0, 6}, geometric_horizons(2.0, 8), 0.1, opt);
  EXPECT_TRUE(v.ratios_decreasing);
  EXPECT_TRUE(v.bound_holds);
  EXPECT_GE(v.dt, X.tau({0.0, 2}, {1.0, 6}));
}
