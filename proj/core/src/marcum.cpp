#include "dfrc/marcum.hpp"

#include <algorithm>
#include <cmath>

namespace dfrc {

// Q1(a,b) = sum_k Pois(k; a^2/2) P(chi^2_{2(k+1)} > b^2)
//         = 1 - sum_k Pois(k; a^2/2) F_k,
// with F_k = 1 - e^{-y} sum_{m<=k} y^m/m!, y = b^2/2. F_k dies off for
// k >> y, so the complement needs only O(y) terms regardless of a.
double marcum_q1(double a, double b) {
  const double x = 0.5 * a * a;
  const double y = 0.5 * b * b;
  if (y == 0.0) return 1.0;

  auto log_pois = [](int k, double rate) {
    return -rate + k * std::log(rate) - std::lgamma(k + 1.0);
  };

  const int k_max =
      static_cast<int>(y + 10.0 * std::sqrt(y + 1.0) + 60.0);
  double p1 = 0.0;
  double f = -std::expm1(-y);  // F_0 = 1 - e^{-y}
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) f -= std::exp(log_pois(k, y));  // F_k = F_{k-1} - Pois(k; y)
    if (f <= 0.0) break;
    const double pois = x > 0.0 ? std::exp(log_pois(k, x)) : (k == 0 ? 1.0 : 0.0);
    p1 += pois * f;
  }
  return std::clamp(1.0 - p1, 0.0, 1.0);
}

}  // namespace dfrc
