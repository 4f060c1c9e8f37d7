#include "gencur/normal.hpp"

#include <cmath>
#include <numbers>

namespace gencur::normal {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649;
}

double pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_cdf(double x) {
  if (x > -30.0) return std::log(cdf(x));
  // Lower tail: Phi(x) = phi(x) R(-x) with R the Mills ratio.
  const double z = -x;
  double r = 0.0;
  for (int k = 80; k >= 1; --k) r = k / (z + r);
  return -0.5 * z * z - std::log(z + r) + std::log(kInvSqrt2Pi);
}

double mills_hazard(double a) {
  if (a <= 6.0) return pdf(a) / (0.5 * std::erfc(a / std::numbers::sqrt2));
  // Continued fraction R(a) = 1/(a + 1/(a + 2/(a + 3/(a + ...)))), hazard = 1/R.
  double tail = 0.0;
  for (int k = 60; k >= 1; --k) tail = k / (a + tail);
  return a + tail;
}

}  // namespace gencur::normal
