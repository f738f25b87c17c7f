#include "spp/geo.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spp {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Mass of N(mean, sigma^2) on [lo, hi). Works on whichever tail keeps the
// erfc arguments positive so far-tail intervals do not cancel to zero.
double axis_mass(double lo, double hi, double mean, double sigma) {
  const double a = (lo - mean) / sigma * kInvSqrt2;
  const double b = (hi - mean) / sigma * kInvSqrt2;
  double m;
  if (a > 0.0) {
    m = 0.5 * (std::erfc(a) - std::erfc(b));
  } else {
    m = 0.5 * (std::erfc(-b) - std::erfc(-a));
  }
  return std::clamp(m, 0.0, 1.0);
}

}  // namespace

bool LatLong::valid() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 &&
         lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

bool Region::contains(const GeoPoint& p) const {
  return x_min <= p.x && p.x < x_min + side && y_min <= p.y &&
         p.y < y_min + side;
}

bool BoundingBox::contains(const GeoPoint& p) const {
  return x_min <= p.x && p.x <= x_max && y_min <= p.y && p.y <= y_max;
}

GeoPoint latlong_to_local(const LatLong& p, const LatLong& ref,
                          double earth_radius) {
  const double lat0 = ref.lat * kDegToRad;
  return {earth_radius * std::cos(lat0) * (p.lon - ref.lon) * kDegToRad,
          earth_radius * (p.lat - ref.lat) * kDegToRad};
}

LatLong local_to_latlong(const GeoPoint& p, const LatLong& ref,
                         double earth_radius) {
  const double lat0 = ref.lat * kDegToRad;
  return {ref.lat + p.y / earth_radius / kDegToRad,
          ref.lon + p.x / (earth_radius * std::cos(lat0)) / kDegToRad};
}

std::vector<Region> make_grid(const BoundingBox& box, double side) {
  std::vector<Region> cells;
  if (!(side > 0.0) || !box.valid()) return cells;
  // The relative slack keeps exact multiples (50000 / 5000) from flooring
  // down after rounding.
  const auto count = [side](double extent) {
    return static_cast<long>(std::floor(extent / side * (1.0 + 1e-12)));
  };
  const long nx = count(box.width());
  const long ny = count(box.height());
  if (nx <= 0 || ny <= 0) return cells;
  cells.reserve(static_cast<size_t>(nx * ny));
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      cells.push_back({box.x_min + static_cast<double>(i) * side,
                       box.y_min + static_cast<double>(j) * side, side});
    }
  }
  return cells;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double gaussian_prob_in_region(const GeoPoint& mean, double sigma,
                               const Region& region) {
  if (sigma <= 0.0) return region.contains(mean) ? 1.0 : 0.0;
  return axis_mass(region.x_min, region.x_max(), mean.x, sigma) *
         axis_mass(region.y_min, region.y_max(), mean.y, sigma);
}

double AxisDistance::nearest_edge() const {
  return std::min(std::abs(to_lower), std::abs(to_upper));
}

std::array<AxisDistance, 2> distance_to_edges(const GeoPoint& p,
                                              const Region& region) {
  return {AxisDistance{p.x - region.x_min, region.x_max() - p.x},
          AxisDistance{p.y - region.y_min, region.y_max() - p.y}};
}

}  // namespace spp
