#include "spp/ingest.h"

#include <gtest/gtest.h>

#include <sstream>

#include "spp/synthetic.h"
#include "test_util.h"

namespace spp {
namespace {

using testing::TempDir;

TEST(TimestampTest, ParsesUtc) {
  EXPECT_EQ(parse_utc_timestamp("1970-01-01T00:00:00Z"), 0);
  EXPECT_EQ(parse_utc_timestamp("2010-10-19T23:55:27Z"), 1287532527);
  EXPECT_EQ(parse_utc_timestamp("2010-10-19T23:55:27"), 1287532527);
  EXPECT_EQ(parse_utc_timestamp("2000-02-29T12:00:00Z"), 951825600);
}

TEST(TimestampTest, RejectsGarbage) {
  EXPECT_FALSE(parse_utc_timestamp(""));
  EXPECT_FALSE(parse_utc_timestamp("2010-13-01T00:00:00Z"));
  EXPECT_FALSE(parse_utc_timestamp("2010-02-30T00:00:00Z"));
  EXPECT_FALSE(parse_utc_timestamp("2010-10-19 23:55:27"));
  EXPECT_FALSE(parse_utc_timestamp("2010-10-19T24:00:00Z"));
  EXPECT_FALSE(parse_utc_timestamp("2010-10-19T23:55:27Zjunk"));
}

TEST(ParseCheckinsTest, CountsMalformedRows) {
  std::istringstream in(
      "0\t2010-10-19T23:55:27Z\t30.2359091167\t-97.7951395833\t22847\n"
      "\n"
      "1\t2010-10-18T22:17:43Z\t34.0\t-118.3\t420315\r\n"
      "x\t2010-10-18T22:17:43Z\t34.0\t-118.3\t1\n"
      "2\t2010-10-18T22:17:43Z\t34.0\t-118.3\n"
      "3\tyesterday\t34.0\t-118.3\t1\n"
      "4\t2010-10-18T22:17:43Z\t134.0\t-118.3\t1\n"
      "5\t2010-10-18T22:17:43Z\t34.0\t-118.3\t1\textra\n");
  const auto parsed = parse_checkins(in);
  ASSERT_EQ(parsed.records.size(), 2u);
  EXPECT_EQ(parsed.malformed, 5u);
  EXPECT_EQ(parsed.records[1].user_id, 1);
  EXPECT_EQ(parsed.records[1].location_id, 420315);
  EXPECT_DOUBLE_EQ(parsed.records[1].position.lon, -118.3);
}

TEST(FilterAndSampleTest, OneRecordPerInBoxUser) {
  std::vector<CheckinRecord> recs = {
      {7, 0, {34.0, -118.4}, 1},  {7, 1, {34.1, -118.3}, 2},
      {7, 2, {40.0, -74.0}, 3},   {3, 0, {37.7, -122.4}, 4},
      {5, 0, {34.342324, -118.144458}, 5},
  };
  const auto ds = filter_and_sample(recs, kLosAngelesBox, 1);
  ASSERT_EQ(ds.users.size(), 2u);
  EXPECT_EQ(ds.users[0].id, 5);
  EXPECT_EQ(ds.users[1].id, 7);
  EXPECT_NEAR(ds.users[0].location.x, 24894.2861937193, 1e-6);
  EXPECT_NEAR(ds.users[0].location.y, 35729.6542065995, 1e-6);
  EXPECT_EQ(ds.grid_extent, (BoundingBox{-25'000, -35'000, 25'000, 35'000}));

  // The chosen check-in depends only on (seed, user).
  const auto again = filter_and_sample(recs, kLosAngelesBox, 1);
  EXPECT_EQ(again.users[1].location, ds.users[1].location);
}

TEST(FilterAndSampleTest, SeedChangesChoiceForSomeUser) {
  std::vector<CheckinRecord> recs;
  for (int u = 0; u < 20; ++u) {
    for (int k = 0; k < 5; ++k) {
      recs.push_back({u, k, {34.0 + 0.01 * k, -118.4}, k});
    }
  }
  const auto a = filter_and_sample(recs, kLosAngelesBox, 1);
  const auto b = filter_and_sample(recs, kLosAngelesBox, 2);
  bool differs = false;
  for (size_t i = 0; i < a.users.size(); ++i) {
    differs |= !(a.users[i].location == b.users[i].location);
  }
  EXPECT_TRUE(differs);
}

TEST(SnapshotTest, RoundTripWithSidecar) {
  TempDir dir;
  Dataset ds;
  ds.users = {{1, {1.5, -2.25}}, {4, {100.123456, 7}}};
  ds.bbox_local = {-10, -10, 200, 200};
  ds.grid_extent = {0, 0, 200, 200};
  ds.source = "unit";
  ds.latlong_box = kLosAngelesBox;
  ds.seed = 9;
  ds.malformed = 3;
  const auto csv = dir / "snap.csv";
  write_snapshot(ds, csv);
  EXPECT_TRUE(std::filesystem::exists(dir / "snap.json"));
  EXPECT_EQ(sidecar_path(csv), dir / "snap.json");

  const Dataset back = read_snapshot(csv);
  ASSERT_EQ(back.users.size(), 2u);
  EXPECT_EQ(back.users[1].id, 4);
  EXPECT_DOUBLE_EQ(back.users[1].location.x, 100.123456);
  EXPECT_EQ(back.grid_extent, ds.grid_extent);
  EXPECT_EQ(back.bbox_local, ds.bbox_local);
  EXPECT_EQ(back.seed, 9u);
  EXPECT_EQ(back.malformed, 3u);
  EXPECT_EQ(back.source, "unit");
  EXPECT_DOUBLE_EQ(back.latlong_box.ne.lat, kLosAngelesBox.ne.lat);
}

TEST(SnapshotTest, WithoutSidecarUsesPointExtent) {
  TempDir dir;
  testing::spit(dir / "p.csv", "user_id,x,y\n2,5,6\n1,-1,10\n");
  const Dataset ds = read_snapshot(dir / "p.csv");
  ASSERT_EQ(ds.users.size(), 2u);
  EXPECT_EQ(ds.users[0].id, 1);
  EXPECT_EQ(ds.grid_extent, (BoundingBox{-1, 6, 5, 10}));
}

TEST(SnapshotTest, RejectsBadInput) {
  TempDir dir;
  EXPECT_THROW(read_snapshot(dir / "missing.csv"), std::runtime_error);
  testing::spit(dir / "h.csv", "id,x,y\n");
  EXPECT_THROW(read_snapshot(dir / "h.csv"), std::runtime_error);
  testing::spit(dir / "r.csv", "user_id,x,y\n1,2\n");
  EXPECT_THROW(read_snapshot(dir / "r.csv"), std::runtime_error);
}

TEST(SnapExtentTest, Rounds) {
  EXPECT_EQ(snap_extent({-24'894.3, -35'729.7, 24'894.3, 35'729.7}, 5'000),
            (BoundingBox{-25'000, -35'000, 25'000, 35'000}));
}

TEST(SyntheticTest, IngestsToRequestedUserCount) {
  std::stringstream tsv;
  SyntheticCityOptions opt;
  opt.users_in_box = 300;
  opt.users_outside = 50;
  opt.malformed_rate = 0.01;
  const auto summary = write_synthetic_checkins(tsv, opt);
  const auto parsed = parse_checkins(tsv);
  EXPECT_EQ(parsed.malformed, summary.malformed_rows);
  EXPECT_EQ(parsed.records.size() + parsed.malformed, summary.rows);
  const auto ds = filter_and_sample(parsed.records, kLosAngelesBox, 1);
  EXPECT_EQ(ds.users.size(), 300u);
}

}  // namespace
}  // namespace spp
