#pragma once

#include <array>
#include <vector>

namespace spp {

inline constexpr double kEarthRadiusMeters = 6'371'000.0;

// Geographic coordinates in degrees.
struct LatLong {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const;
};

// Local planar coordinates in meters (x east, y north of a reference point).
struct GeoPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Axis-aligned square with half-open membership:
// [x_min, x_min + side) x [y_min, y_min + side).
struct Region {
  double x_min = 0.0;
  double y_min = 0.0;
  double side = 1.0;

  double x_max() const { return x_min + side; }
  double y_max() const { return y_min + side; }
  double area() const { return side * side; }
  GeoPoint center() const { return {x_min + side / 2, y_min + side / 2}; }
  bool contains(const GeoPoint& p) const;

  friend bool operator==(const Region&, const Region&) = default;
};

struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool valid() const { return x_min < x_max && y_min < y_max; }
  // Closed on all sides; used for extents, not for grid membership.
  bool contains(const GeoPoint& p) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Equirectangular projection about `ref` on a spherical earth.
GeoPoint latlong_to_local(const LatLong& p, const LatLong& ref,
                          double earth_radius = kEarthRadiusMeters);

// Inverse of latlong_to_local for the same reference and radius.
LatLong local_to_latlong(const GeoPoint& p, const LatLong& ref,
                         double earth_radius = kEarthRadiusMeters);

// Tiles `box` from its lower-left corner with side x side cells, row-major
// (y outer, x inner). Cells that would overhang the box are dropped.
std::vector<Region> make_grid(const BoundingBox& box, double side);

// Standard normal CDF.
double normal_cdf(double x);

// Mass of N(mean, sigma^2 I) inside `region`. sigma == 0 degenerates to the
// half-open membership indicator.
double gaussian_prob_in_region(const GeoPoint& mean, double sigma,
                               const Region& region);

// Signed distances from a coordinate to the two edges of one axis of a region.
// Both are non-negative when the coordinate lies within the closed interval.
struct AxisDistance {
  double to_lower = 0.0;  // p - lo
  double to_upper = 0.0;  // hi - p

  bool inside() const { return to_lower >= 0.0 && to_upper >= 0.0; }
  // Distance to the nearest edge of this axis (unsigned).
  double nearest_edge() const;
};

// Per-axis edge distances, index 0 = x, 1 = y.
std::array<AxisDistance, 2> distance_to_edges(const GeoPoint& p,
                                              const Region& region);

}  // namespace spp
