#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spp/geo.h"
#include "spp/marketplace.h"

namespace spp {

// One row of a Gowalla-style check-in dump.
struct CheckinRecord {
  std::int64_t user_id = 0;
  std::int64_t timestamp = 0;  // seconds since the Unix epoch, UTC
  LatLong position;
  std::int64_t location_id = 0;
};

struct ParsedCheckins {
  std::vector<CheckinRecord> records;
  size_t malformed = 0;
};

// Reads `user_id \t ISO-8601 time \t lat \t long \t location_id` lines.
// Malformed rows are skipped and counted; blank lines are ignored.
// Throws std::runtime_error if the stream is unreadable.
ParsedCheckins parse_checkins(std::istream& in);

// Parses "YYYY-MM-DDTHH:MM:SSZ" (the trailing Z is optional).
std::optional<std::int64_t> parse_utc_timestamp(std::string_view text);

struct LatLongBox {
  LatLong sw;
  LatLong ne;

  bool contains(const LatLong& p) const {
    return p.lat >= sw.lat && p.lat <= ne.lat && p.lon >= sw.lon &&
           p.lon <= ne.lon;
  }
  LatLong midpoint() const {
    return {(sw.lat + ne.lat) / 2, (sw.lon + ne.lon) / 2};
  }
};

inline constexpr LatLongBox kLosAngelesBox{{33.699675, -118.684687},
                                           {34.342324, -118.144458}};

// Grid extents are the projected box snapped to this resolution, which maps
// the Los Angeles box to [-25 km, 25 km] x [-35 km, 35 km].
inline constexpr double kGridExtentRounding = 5'000.0;

struct Dataset {
  std::vector<LocatedId> users;  // ascending id
  BoundingBox bbox_local;        // projected lat/long box
  BoundingBox grid_extent;       // bbox_local snapped to kGridExtentRounding

  std::string source;
  LatLongBox latlong_box{};
  std::uint64_t seed = 0;
  size_t malformed = 0;
};

// Keeps in-box records (inclusive), picks one per user with a stream keyed
// by (seed, user_id), and projects about the box midpoint.
Dataset filter_and_sample(std::span<const CheckinRecord> records,
                          const LatLongBox& box, std::uint64_t seed,
                          double earth_radius = kEarthRadiusMeters);

BoundingBox snap_extent(const BoundingBox& box, double resolution);

// Sidecar path for a snapshot CSV: same stem, ".json" extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

// Writes `user_id,x,y` CSV (6 decimals) and the JSON sidecar.
void write_snapshot(const Dataset& dataset, const std::filesystem::path& csv);

// Reads a snapshot CSV and, if present, its sidecar. Without a sidecar the
// extents are the bounding box of the points. Throws std::runtime_error.
Dataset read_snapshot(const std::filesystem::path& csv);

}  // namespace spp
