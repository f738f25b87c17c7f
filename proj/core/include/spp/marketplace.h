#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spp/geo.h"
#include "spp/rng.h"

namespace spp {

using UserId = std::int64_t;

// A seller. `valuation` is the ask price for the unperturbed location.
struct User {
  UserId id = 0;
  GeoPoint location;
  double valuation = 1.0;
};

struct PricingParams {
  double sigma_scale = 20.0;  // meters of noise at price == valuation / 1
};

struct Observation {
  UserId user_id = 0;
  GeoPoint z;
  double sigma = 0.0;
  double price_paid = 0.0;
};

// Valuation law: rho ~ U(0, scale), nu ~ U(0, scale), valuation = rho * nu.
struct ValuationDistribution {
  double scale = 3.0;
};

// Append-only record of every purchase made during one strategy run.
class PurchaseLedger {
 public:
  struct Entry {
    UserId user_id;
    double price;
    double sigma;
  };

  void record(UserId user, double price, double sigma);

  const std::vector<Entry>& entries() const { return entries_; }
  double total_spent() const { return total_spent_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
  double total_spent_ = 0.0;
};

// Noise standard deviation delivered for `price`: (valuation / price) *
// sigma_scale below the ask, and exact data at or above it.
// Throws std::invalid_argument for non-positive price or valuation.
double noise_sigma(double valuation, double price, const PricingParams& pricing);

// Draws a strictly positive valuation.
double sample_valuation(const ValuationDistribution& dist, Rng& rng);

// One sale: fresh isotropic Gaussian noise around the true location, priced
// as quoted (even above the ask). Appends to `ledger`.
Observation sell(const User& user, double price, const PricingParams& pricing,
                 Rng& rng, PurchaseLedger& ledger);

struct LocatedId {
  UserId id;
  GeoPoint location;
};

// Builds the market: one valuation per point, drawn in input order from a
// single stream keyed by `seed`.
std::vector<User> make_users(std::span<const LocatedId> points,
                             const ValuationDistribution& dist,
                             std::uint64_t seed);

}  // namespace spp
