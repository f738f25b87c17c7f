#include "spp/synthetic.h"

#include <array>
#include <chrono>
#include <cstdio>
#include <ostream>

#include "spp/rng.h"

namespace spp {

namespace {

struct Cluster {
  GeoPoint center;  // meters from the box midpoint
  double spread;
  double weight;
};

// Rough activity centres: downtown, Hollywood, Santa Monica, Westwood,
// Pasadena, Long Beach, LAX, Burbank. The remainder is uniform.
constexpr std::array<Cluster, 8> kClusters{{
    {{12'600, 2'600}, 1'700, 0.20},
    {{7'500, 8'800}, 2'000, 0.14},
    {{-7'000, 0}, 1'800, 0.10},
    {{-2'500, 4'500}, 1'500, 0.10},
    {{23'000, 14'500}, 1'800, 0.05},
    {{20'000, -28'000}, 2'500, 0.05},
    {{-1'500, -9'000}, 1'500, 0.04},
    {{9'500, 17'500}, 2'000, 0.04},
}};

constexpr double kCheckinJitter = 800.0;
constexpr std::int64_t kFirstTimestamp = 1233705600;  // 2009-02-04
constexpr std::int64_t kLastTimestamp = 1287792000;   // 2010-10-23

void format_time(std::int64_t t, char* buf, size_t n) {
  using namespace std::chrono;
  const sys_days day{days{t / 86400}};
  const year_month_day ymd{day};
  const long rem = static_cast<long>(t % 86400);
  std::snprintf(buf, n, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), rem / 3600,
                (rem / 60) % 60, rem % 60);
}

}  // namespace

SyntheticSummary write_synthetic_checkins(std::ostream& out,
                                          const SyntheticCityOptions& options) {
  const LatLongBox box = kLosAngelesBox;
  const LatLong ref = box.midpoint();
  const GeoPoint sw = latlong_to_local(box.sw, ref);
  const GeoPoint ne = latlong_to_local(box.ne, ref);
  const BoundingBox local{sw.x, sw.y, ne.x, ne.y};

  Rng rng = make_stream({options.seed, 0x73796e74ULL});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> ux(local.x_min, local.x_max);
  std::uniform_real_distribution<double> uy(local.y_min, local.y_max);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::geometric_distribution<int> extra(0.35);
  std::uniform_int_distribution<std::int64_t> when(kFirstTimestamp,
                                                   kLastTimestamp);
  std::uniform_int_distribution<std::int64_t> venue(8'000, 6'000'000);

  const auto draw_home = [&]() -> GeoPoint {
    for (;;) {
      double u = unit(rng);
      GeoPoint p{ux(rng), uy(rng)};
      for (const auto& c : kClusters) {
        if (u < c.weight) {
          p = {c.center.x + c.spread * gauss(rng),
               c.center.y + c.spread * gauss(rng)};
          break;
        }
        u -= c.weight;
      }
      if (local.contains(p)) return p;
    }
  };

  SyntheticSummary summary;
  char when_buf[32];
  const auto emit = [&](std::int64_t user, const LatLong& pos) {
    format_time(when(rng), when_buf, sizeof when_buf);
    char line[160];
    if (unit(rng) < options.malformed_rate) {
      std::snprintf(line, sizeof line, "%lld\t%s\tn/a\t%.7f\t%lld\n",
                    static_cast<long long>(user), when_buf, pos.lon,
                    static_cast<long long>(venue(rng)));
      ++summary.malformed_rows;
    } else {
      std::snprintf(line, sizeof line, "%lld\t%s\t%.7f\t%.7f\t%lld\n",
                    static_cast<long long>(user), when_buf, pos.lat, pos.lon,
                    static_cast<long long>(venue(rng)));
    }
    out << line;
    ++summary.rows;
  };

  std::int64_t next_id = 17;
  for (size_t i = 0; i < options.users_in_box; ++i) {
    const std::int64_t id = next_id;
    next_id += 1 + static_cast<std::int64_t>(unit(rng) * 5);
    const GeoPoint home = draw_home();
    // The first check-in sits at home and is never corrupted, so every user
    // keeps at least one valid in-box row.
    {
      format_time(when(rng), when_buf, sizeof when_buf);
      const LatLong pos = local_to_latlong(home, ref);
      char line[160];
      std::snprintf(line, sizeof line, "%lld\t%s\t%.7f\t%.7f\t%lld\n",
                    static_cast<long long>(id), when_buf, pos.lat, pos.lon,
                    static_cast<long long>(venue(rng)));
      out << line;
      ++summary.rows;
    }
    const int more = std::min(extra(rng), 12);
    for (int k = 0; k < more; ++k) {
      GeoPoint p{home.x + kCheckinJitter * gauss(rng),
                 home.y + kCheckinJitter * gauss(rng)};
      if (unit(rng) < 0.05) p = {p.x + 80'000.0, p.y - 20'000.0};  // travel
      emit(id, local_to_latlong(p, ref));
    }
  }

  // Users who never checked in inside the box.
  const LatLong elsewhere{37.7749, -122.4194};
  for (size_t i = 0; i < options.users_outside; ++i) {
    const std::int64_t id = next_id;
    next_id += 1 + static_cast<std::int64_t>(unit(rng) * 5);
    const GeoPoint p{20'000.0 * gauss(rng), 20'000.0 * gauss(rng)};
    const int n = 1 + std::min(extra(rng), 6);
    for (int k = 0; k < n; ++k) emit(id, local_to_latlong(p, elsewhere));
  }
  return summary;
}

}  // namespace spp
