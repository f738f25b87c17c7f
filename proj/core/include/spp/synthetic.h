#pragma once

#include <cstdint>
#include <iosfwd>

#include "spp/ingest.h"

namespace spp {

// Gowalla-format check-ins for a Los Angeles-like population: clustered
// activity centres over a uniform background, several check-ins per user,
// some users and check-ins outside the box, and a sprinkling of corrupt rows.
struct SyntheticCityOptions {
  size_t users_in_box = 5'827;
  size_t users_outside = 800;
  std::uint64_t seed = 1;
  double malformed_rate = 0.0005;
};

struct SyntheticSummary {
  size_t rows = 0;
  size_t malformed_rows = 0;
};

SyntheticSummary write_synthetic_checkins(std::ostream& out,
                                          const SyntheticCityOptions& options);

}  // namespace spp
