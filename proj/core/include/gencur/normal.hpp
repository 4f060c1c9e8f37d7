#pragma once

namespace gencur::normal {

double pdf(double x);
double cdf(double x);
/// log Phi(x), accurate far into the lower tail.
double log_cdf(double x);

/// Hazard phi(a) / (1 - Phi(a)) of the standard normal. Uses the
/// continued fraction for a > 6 where 1 - Phi underflows relative to phi.
double mills_hazard(double a);

}  // namespace gencur::normal
