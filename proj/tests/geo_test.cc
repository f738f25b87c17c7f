#include "spp/geo.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "spp/ingest.h"

namespace spp {
namespace {

TEST(ProjectionTest, MidpointMapsToOrigin) {
  const LatLong ref = kLosAngelesBox.midpoint();
  const GeoPoint p = latlong_to_local(ref, ref);
  EXPECT_DOUBLE_EQ(p.x, 0.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
}

TEST(ProjectionTest, LosAngelesCornersMatchReference) {
  const LatLong ref = kLosAngelesBox.midpoint();
  EXPECT_NEAR(ref.lat, 34.0209995, 1e-12);
  EXPECT_NEAR(ref.lon, -118.4145725, 1e-12);
  const GeoPoint ne = latlong_to_local(kLosAngelesBox.ne, ref);
  EXPECT_NEAR(ne.x, 24894.2861937193, 1e-6);
  EXPECT_NEAR(ne.y, 35729.6542065995, 1e-6);
  const GeoPoint sw = latlong_to_local(kLosAngelesBox.sw, ref);
  EXPECT_NEAR(sw.x, -ne.x, 1e-6);
  EXPECT_NEAR(sw.y, -ne.y, 1e-6);
}

TEST(ProjectionTest, RoundTrip) {
  const LatLong ref{34.0, -118.4};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  for (int i = 0; i < 200; ++i) {
    const LatLong p{ref.lat + d(rng), ref.lon + d(rng)};
    const LatLong back = local_to_latlong(latlong_to_local(p, ref), ref);
    EXPECT_NEAR(back.lat, p.lat, 1e-10);
    EXPECT_NEAR(back.lon, p.lon, 1e-10);
  }
}

TEST(LatLongTest, Validity) {
  EXPECT_TRUE((LatLong{34.0, -118.0}).valid());
  EXPECT_FALSE((LatLong{91.0, 0.0}).valid());
  EXPECT_FALSE((LatLong{0.0, -181.0}).valid());
  EXPECT_FALSE((LatLong{std::nan(""), 0.0}).valid());
}

TEST(RegionTest, HalfOpenMembership) {
  const Region r{0.0, 0.0, 10.0};
  EXPECT_TRUE(r.contains({0.0, 0.0}));
  EXPECT_TRUE(r.contains({9.999, 9.999}));
  EXPECT_FALSE(r.contains({10.0, 5.0}));
  EXPECT_FALSE(r.contains({5.0, 10.0}));
  EXPECT_FALSE(r.contains({-1e-9, 5.0}));
  EXPECT_DOUBLE_EQ(r.area(), 100.0);
  EXPECT_EQ(r.center(), (GeoPoint{5.0, 5.0}));
}

TEST(GridTest, DefaultLosAngelesCounts) {
  const BoundingBox extent{-25'000, -35'000, 25'000, 35'000};
  EXPECT_EQ(make_grid(extent, 5'000).size(), 140u);
  EXPECT_EQ(make_grid(extent, 10'000).size(), 35u);
  EXPECT_EQ(make_grid(extent, 2'500).size(), 560u);
}

TEST(GridTest, RowMajorFromLowerLeft) {
  const auto g = make_grid({0, 0, 30, 20}, 10);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g[0], (Region{0, 0, 10}));
  EXPECT_EQ(g[1], (Region{10, 0, 10}));
  EXPECT_EQ(g[3], (Region{0, 10, 10}));
  EXPECT_EQ(g[5], (Region{20, 10, 10}));
}

TEST(GridTest, DropsOverhangAndDegenerate) {
  EXPECT_EQ(make_grid({0, 0, 35, 19}, 10).size(), 3u);
  EXPECT_TRUE(make_grid({0, 0, 5, 5}, 10).empty());
  EXPECT_TRUE(make_grid({0, 0, 10, 10}, 0).empty());
  EXPECT_TRUE(make_grid({0, 0, 0, 10}, 1).empty());
}

TEST(GridTest, CellsPartitionPoints) {
  const auto g = make_grid({-100, -100, 100, 100}, 50);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-100, 100);
  for (int i = 0; i < 1000; ++i) {
    const GeoPoint p{d(rng), d(rng)};
    int hits = 0;
    for (const auto& r : g) hits += r.contains(p) ? 1 : 0;
    EXPECT_EQ(hits, 1);
  }
}

TEST(NormalCdfTest, KnownValues) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.0), 0.841344746068543, 1e-15);
  EXPECT_NEAR(normal_cdf(-1.0), 0.158655253931457, 1e-15);
  EXPECT_NEAR(normal_cdf(-8.0), 6.22096057427178e-16, 1e-28);
}

TEST(GaussianRegionTest, CenteredOneSigmaSquare) {
  const Region r{-1.0, -1.0, 2.0};
  EXPECT_NEAR(gaussian_prob_in_region({0, 0}, 1.0, r), 0.466064942674392,
              1e-14);
}

TEST(GaussianRegionTest, CornerSymmetry) {
  const Region r{0, 0, 5'000};
  EXPECT_NEAR(gaussian_prob_in_region({0, 0}, 1e-3, r), 0.25, 1e-9);
  EXPECT_NEAR(gaussian_prob_in_region({5'000, 5'000}, 1.0, r), 0.25, 1e-9);
}

TEST(GaussianRegionTest, ZeroSigmaIsIndicator) {
  const Region r{0, 0, 10};
  EXPECT_EQ(gaussian_prob_in_region({0, 0}, 0.0, r), 1.0);
  EXPECT_EQ(gaussian_prob_in_region({10, 5}, 0.0, r), 0.0);
  EXPECT_EQ(gaussian_prob_in_region({5, 5}, 0.0, r), 1.0);
}

TEST(GaussianRegionTest, SmallSigmaApproachesIndicator) {
  const Region r{0, 0, 10};
  EXPECT_NEAR(gaussian_prob_in_region({5, 5}, 1e-6, r), 1.0, 1e-12);
  EXPECT_NEAR(gaussian_prob_in_region({-1, 5}, 1e-6, r), 0.0, 1e-12);
}

TEST(GaussianRegionTest, FarTailKeepsPrecision) {
  // Mass beyond 30 sigma is ~4.9e-198 and must not cancel to zero.
  const double p = gaussian_prob_in_region({0, 0}, 1.0, {30.0, -1e6, 2e6});
  EXPECT_GT(p, 0.0);
  EXPECT_NEAR(std::log10(p), std::log10(4.906713927148187e-198), 1e-6);
}

TEST(GaussianRegionTest, PartitionAdditivity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> loc(-3'000, 8'000);
  std::uniform_real_distribution<double> sig(10, 4'000);
  const Region whole{0, 0, 5'000};
  const auto quads = make_grid({0, 0, 5'000, 5'000}, 2'500);
  for (int i = 0; i < 100; ++i) {
    const GeoPoint m{loc(rng), loc(rng)};
    const double s = sig(rng);
    double sum = 0.0;
    for (const auto& q : quads) sum += gaussian_prob_in_region(m, s, q);
    EXPECT_NEAR(sum, gaussian_prob_in_region(m, s, whole), 1e-12);
  }
}

TEST(GaussianRegionTest, MatchesQuadratureOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> loc(-6'000, 11'000);
  std::uniform_real_distribution<double> log_sig(std::log(50.0),
                                                 std::log(8'000.0));
  const Region r{0, 0, 5'000};
  for (int i = 0; i < 30; ++i) {
    const GeoPoint m{loc(rng), loc(rng)};
    const double s = std::exp(log_sig(rng));
    EXPECT_NEAR(gaussian_prob_in_region(m, s, r),
                oracle::rect_mass_by_quadrature(m, s, r), 1e-6)
        << "mean=(" << m.x << "," << m.y << ") sigma=" << s;
  }
}

TEST(GaussianRegionTest, DecreasesAwayFromRegion) {
  const Region r{0, 0, 100};
  double prev = 1.0;
  for (double x = 50; x < 400; x += 10) {
    const double p = gaussian_prob_in_region({x, 50}, 30.0, r);
    EXPECT_LE(p, prev);
    prev = p;
  }
}

TEST(EdgeDistanceTest, InsideAndOutside) {
  const Region r{0, 0, 10};
  const auto d = distance_to_edges({2, -3}, r);
  EXPECT_TRUE(d[0].inside());
  EXPECT_DOUBLE_EQ(d[0].to_lower, 2);
  EXPECT_DOUBLE_EQ(d[0].to_upper, 8);
  EXPECT_DOUBLE_EQ(d[0].nearest_edge(), 2);
  EXPECT_FALSE(d[1].inside());
  EXPECT_DOUBLE_EQ(d[1].nearest_edge(), 3);
}

}  // namespace
}  // namespace spp
