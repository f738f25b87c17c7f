#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace spp::oracle {

namespace detail {

struct GaussLegendre10 {
  std::array<double, 10> nodes{};
  std::array<double, 10> weights{};

  GaussLegendre10() {
    // Newton iteration on P_10 from the Chebyshev initial guesses.
    constexpr int n = 10;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

inline const GaussLegendre10& rule() {
  static const GaussLegendre10 r;
  return r;
}

}  // namespace detail

template <typename F>
double integrate(F&& f, double a, double b, int panels) {
  if (!(b > a)) return 0.0;
  const auto& r = detail::rule();
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 10; ++i) {
      total += r.weights[i] * f(mid + 0.5 * h * r.nodes[i]);
    }
  }
  return total * 0.5 * h;
}

}  // namespace spp::oracle
