#include "gencur/normal.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "oracles.hpp"

namespace gencur {
namespace {

TEST(NormalTest, PdfAndCdfMatchReference) {
  const boost::math::normal_distribution<double> ref;
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    EXPECT_NEAR(normal::pdf(x), boost::math::pdf(ref, x), 1e-15);
    EXPECT_NEAR(normal::cdf(x), boost::math::cdf(ref, x), 1e-15);
  }
}

TEST(NormalTest, LogCdfInTheFarTail) {
  for (double x : {-5.0, -20.0, -29.0, -31.0, -60.0, -200.0}) {
    const long double ref = std::log(0.5L * boost::math::erfc(-static_cast<long double>(x) / std::sqrt(2.0L)));
    EXPECT_NEAR(normal::log_cdf(x), static_cast<double>(ref), 1e-9 * std::abs(static_cast<double>(ref))) << x;
  }
}

TEST(NormalTest, MillsHazardAcrossBranches) {
  for (double a : {-10.0, -3.0, -0.5, 0.0, 0.5, 3.0, 5.99, 6.01, 10.0, 25.0, 80.0}) {
    const double ref = testing::mills_reference(a);
    EXPECT_NEAR(normal::mills_hazard(a), ref, 1e-10 * std::max(1.0, ref)) << a;
  }
}

TEST(NormalTest, MillsHazardAtZero) {
  EXPECT_NEAR(normal::mills_hazard(0.0), std::sqrt(2.0 / M_PI), 1e-15);
}

TEST(NormalTest, MillsHazardIsContinuousAtSwitch) {
  EXPECT_NEAR(normal::mills_hazard(6.0 - 1e-9), normal::mills_hazard(6.0 + 1e-9), 1e-8);
}

}  // namespace
}  // namespace gencur
