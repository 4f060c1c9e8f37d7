#pragma once

#include <cstdint>
#include <span>

#include "gencur/kernels.hpp"
#include "gencur/policy.hpp"

namespace gencur {

struct CurationObjectiveParams {
  double sigma = 1.0;  // qualitative standard deviation
  int m = 1;           // number of recommendations
  Kernel kernel = Kernel::SquaredExponential(1.0);

  void validate() const;
};

/// E_m = E[max of m i.i.d. standard normals], by adaptive Gauss-Kronrod
/// quadrature of m x phi(x) Phi(x)^(m-1) over [-9, 9] (abs. tol 1e-6).
/// Values are memoized per process. For m > 1e6 the two-term extreme-value
/// asymptotic is returned instead.
double expected_max_gaussian(std::int64_t m);

/// sqrt(2 ln m) - (ln ln m + ln 4 pi) / (2 sqrt(2 ln m)); requires m > 1.
double expected_max_gaussian_asymptotic(double m);

/// (1/sigma^2) w' K w over the policy's grid.
double rho_exact(const Kernel& kernel, const DiscretePolicy& policy);

/// Pairs consecutive samples (1,2), (3,4), ... and averages their
/// normalized kernel values; a trailing odd sample is dropped.
double rho_empirical(const Kernel& kernel, std::span<const ActionPoint> samples);

/// E[Y] + sigma sqrt(1 - rho) E_m; rho is clamped into [0, 1].
double lower_bound_value(double expected_y, double rho, const CurationObjectiveParams& params);

/// E[max_i Y(A_i)] + sigma sqrt(1 - rho) E_m.
double upper_bound_value(double expected_max_y, double rho, const CurationObjectiveParams& params);

/// E[max of Y over m i.i.d. draws from the policy], exact for a discrete
/// policy via P(max <= y) = F(y)^m.
double expected_max_y(const DiscretePolicy& policy, std::span<const double> y_values, int m);

/// Monte Carlo estimate of the same quantity.
double expected_max_y_monte_carlo(const DiscretePolicy& policy, std::span<const double> y_values, int m,
                                  std::size_t draws, std::uint64_t seed);

/// E_pi[Y].
double expected_y(const DiscretePolicy& policy, std::span<const double> y_values);

}  // namespace gencur
