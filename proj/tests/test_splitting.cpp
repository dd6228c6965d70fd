#include <gtest/gtest.h>

#include "support.hpp"

using namespace lorentz;
using namespace testing_support;

namespace {

constexpr double kMesh = 0.1;

struct ProductSplit {
  ProductSpace X;
  LineDescriptor<ProductPoint> gamma;
  SliceOptions opt;
  std::vector<ProductPoint> seeds, probes;
  std::vector<double> times{-1.0, -0.5, 0.0, 0.5, 1.0};
};

// R x [0,1] on 11 points, vertical line over the middle point
ProductSplit product_split() {
  ProductSplit s{ProductSpace(MetricSpaceModel::euclidean_segment(0.0, 1.0, 11), TimeGrid{-1.0, 1.0, 0.25}), {}, {}, {}, {}};
  s.gamma = vertical_line(s.X, 5, -128, 128, 0.25);
  s.opt.line.mesh = kMesh;
  s.opt.line.knot_step = 0.25;
  for (std::size_t i = 0; i < 11; ++i) s.seeds.push_back({0.0, i});
  for (double t : s.times)
    for (std::size_t i = 0; i < 11; ++i) s.probes.push_back({t, i});
  return s;
}

double factor_distortion(const ProductSpace& X, const SpacelikeSlice<ProductPoint>& sl) {
  double out = 0.0;
  for (std::size_t i = 0; i < sl.size(); ++i)
    for (std::size_t j = 0; j < sl.size(); ++j)
      out = std::max(out, std::abs(sl.d[i][j] - X.factor().distance(sl.members[i].x, sl.members[j].x)));
  return out;
}

}  // namespace

TEST(Slice, ProductSliceIsTheFactor) {
  const auto s = product_split();
  const auto sl = extract_slice(s.X, s.gamma, s.seeds, s.opt);
  EXPECT_EQ(sl.size(), 11u);
  EXPECT_TRUE(sl.metric_ok);
  EXPECT_EQ(sl.nonparallel_pairs, 0u);
  EXPECT_LE(factor_distortion(s.X, sl), 2.0 * (kMesh + s.opt.line.busemann_tol));
  EXPECT_LE(sl.footpoint_busemann, s.opt.line.busemann_tol + kMesh);
}

TEST(Slice, DuplicateSeedsMerge) {
  auto s = product_split();
  s.seeds = {{0.0, 3}, {0.0, 3}, {0.0, 7}};
  const auto sl = extract_slice(s.X, s.gamma, s.seeds, s.opt);
  EXPECT_EQ(sl.size(), 2u);
  EXPECT_EQ(sl.seed_member, (std::vector<std::size_t>{0, 0, 1}));
}

TEST(Slice, SeedOutsideIGammaRejected) {
  auto s = product_split();
  s.gamma = vertical_line(s.X, 5, -0.25, 0.25, 0.25);
  EXPECT_THROW(extract_slice(s.X, s.gamma, {{0.0, 0}}, s.opt), PreconditionError);
}

TEST(SplittingMap, ProductRoundTrip) {
  const auto s = product_split();
  const auto res = build_splitting_map(s.X, extract_slice(s.X, s.gamma, s.seeds, s.opt), s.times, s.probes);
  const double bound = 2.0 * (kMesh + s.opt.line.busemann_tol);
  EXPECT_LE(res.tau_defect, bound);
  EXPECT_EQ(res.leq_mismatches, 0u);
  EXPECT_TRUE(res.injective);
  EXPECT_TRUE(res.bijective);
  EXPECT_EQ(res.unmatched_probes, 0u);
  EXPECT_EQ(res.achronal_violations, 0u);
  EXPECT_GT(res.pairs_checked, 0u);
  // f(t, x) sits at time t over x
  for (std::size_t k = 0; k < s.times.size(); ++k)
    for (std::size_t i = 0; i < res.slice.size(); ++i) {
      EXPECT_NEAR(res.at(k, i).t, s.times[k], bound);
      EXPECT_EQ(res.at(k, i).x, res.slice.members[i].x);
    }
}

TEST(SplittingMap, MinkowskiExact) {
  MinkowskiSpace m;
  const auto g = straight_line({0, 0}, 0.0, -128, 128, 0.25);
  SliceOptions opt;
  std::vector<MinkowskiPoint> seeds;
  for (int i = -4; i <= 4; ++i) seeds.push_back({0.0, 0.25 * i});
  const auto res = build_splitting_map(m, extract_slice(m, g, seeds, opt), {-1, 0, 1});
  EXPECT_LE(res.tau_defect, 1e-9);
  EXPECT_TRUE(res.bijective);
  for (std::size_t i = 0; i < res.slice.size(); ++i)
    for (std::size_t j = 0; j < res.slice.size(); ++j)
      EXPECT_NEAR(res.slice.d[i][j], std::abs(res.slice.members[i].x - res.slice.members[j].x), 1e-9);
}

TEST(SplittingMap, MissingProbeBreaksBijectivity) {
  auto s = product_split();
  s.seeds = {{0.0, 2}, {0.0, 5}, {0.0, 8}};
  const auto res = build_splitting_map(s.X, extract_slice(s.X, s.gamma, s.seeds, s.opt), s.times, s.probes);
  EXPECT_FALSE(res.bijective);
  EXPECT_GT(res.unmatched_probes, 0u);
  EXPECT_TRUE(res.injective);
}

TEST(Cauchy, RandomSpanningChainsCrossEachLevelOnce) {
  const auto s = product_split();
  const auto res = build_splitting_map(s.X, extract_slice(s.X, s.gamma, s.seeds, s.opt), s.times, s.probes);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> I(0, 10);
  std::vector<Chain<ProductPoint>> chains;
  while (chains.size() < 20) {
    const ProductPoint a{-1.75, I(rng)}, b{1.75, I(rng)};
    auto c = s.X.realizer(a, b);
    chains.push_back(c);
  }
  const auto rep = check_cauchy_slices(s.X, s.gamma, res, chains, geometric_horizons());
  EXPECT_EQ(rep.chains_checked, 20u);
  EXPECT_TRUE(rep.each_chain_hits_each_slice_once);
}

TEST(Cauchy, ShortChainIsNotSpanning) {
  const auto s = product_split();
  const auto res = build_splitting_map(s.X, extract_slice(s.X, s.gamma, s.seeds, s.opt), s.times, s.probes);
  const auto rep = check_cauchy_slices(s.X, s.gamma, res, {s.X.realizer({-0.2, 3}, {0.2, 3})}, geometric_horizons());
  EXPECT_EQ(rep.not_spanning, 1u);
  EXPECT_EQ(rep.chains_checked, 0u);
}

TEST(Cauchy, LevelCrossings) {
  EXPECT_EQ(level_crossings({-1, 0, 1}, 0.5), 1u);
  EXPECT_EQ(level_crossings({-1, 1, -1, 1}, 0.0), 3u);
  EXPECT_EQ(level_crossings({1, 2}, 0.0), 0u);
}

TEST(SliceAlexandrov, EuclideanSegmentPasses) {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 12; ++i) pts.push_back({0.1 * i, 0.0});
  const auto r = check_slice_alexandrov(euclidean_table(pts));
  EXPECT_TRUE(r.nonneg_curvature);
  EXPECT_LE(r.worst_defect, 1e-6);
  EXPECT_GT(r.quadruples, 0u);
}

TEST(SliceAlexandrov, PlanarSamplePasses) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 15; ++i) pts.push_back({U(rng), U(rng)});
  EXPECT_TRUE(check_slice_alexandrov(euclidean_table(pts)).nonneg_curvature);
}

TEST(SliceAlexandrov, HyperbolicControlFails) {
  std::vector<std::pair<double, double>> polar{{0.0, 0.0}};
  for (int k = 0; k < 6; ++k) polar.push_back({3.0, k * std::numbers::pi / 3.0});
  const auto r = check_slice_alexandrov(hyperbolic_table(polar));
  EXPECT_FALSE(r.nonneg_curvature);
  EXPECT_GT(r.worst_defect, 0.1);
}

TEST(SliceAlexandrov, TripodFails) {
  const auto g = MetricSpaceModel::metric_graph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, 1.0);
  Table<double> d(4, std::vector<double>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) d[i][j] = g.distance(i, j);
  const auto r = check_slice_alexandrov(d);
  EXPECT_FALSE(r.nonneg_curvature);
  EXPECT_NEAR(r.worst_defect, std::numbers::pi, 1e-9);  // three straight angles at the centre
}

TEST(SliceAlexandrov, SampledModeIsDeterministic) {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 30; ++i) pts.push_back({std::cos(i), std::sin(1.7 * i)});
  const auto d = euclidean_table(pts);
  const auto a = check_slice_alexandrov(d, 1e-6, 1000, 9);
  const auto b = check_slice_alexandrov(d, 1e-6, 1000, 9);
  EXPECT_EQ(a.quadruples + a.degenerate_skipped, 1000u);
  EXPECT_EQ(a.worst_defect, b.worst_defect);
}

TEST(TcProperty, TiltedProbesExtend) {
  const auto s = product_split();
  const auto res = build_splitting_map(s.X, extract_slice(s.X, s.gamma, s.seeds, s.opt), s.times, s.probes);
  const auto probe = s.X.realizer({-0.5, 2}, {0.5, 8});
  const auto rep = check_tc_property(s.X, res, {probe});
  EXPECT_EQ(rep.probes_checked, 1u);
  EXPECT_TRUE(rep.all_extendible);
  EXPECT_NEAR(rep.probes[0].slice_length, 0.6, 1e-9 + 2 * kMesh);
}

TEST(TcProperty, ProbeAlongAsymptoteRejected) {
  const auto s = product_split();
  const auto res = build_splitting_map(s.X, extract_slice(s.X, s.gamma, s.seeds, s.opt), s.times, s.probes);
  EXPECT_THROW(check_tc_property(s.X, res, {s.X.realizer({-0.5, 4}, {0.5, 4})}), PreconditionError);
}
