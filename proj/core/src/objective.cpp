#include "gencur/objective.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <random>

#include "gencur/errors.hpp"
#include "gencur/normal.hpp"
#include "gencur/random.hpp"

namespace gencur {

void CurationObjectiveParams::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ArgumentError("sigma must be finite and >= 0");
  if (m < 1) throw ArgumentError("m must be >= 1");
}

namespace {

// 15-point Kronrod rule with its embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

// Globally adaptive bisection of the worst panel until the summed error
// estimate drops below `tol`.
template <class F>
double integrate(const F& f, double lo, double hi, double tol, int initial_panels) {
  std::priority_queue<Panel> heap;
  const double width = (hi - lo) / initial_panels;
  double total = 0.0;
  double error = 0.0;
  for (int i = 0; i < initial_panels; ++i) {
    const double a = lo + i * width;
    const double b = i + 1 == initial_panels ? hi : a + width;
    auto p = gauss_kronrod(f, a, b);
    total += p.value;
    error += p.error;
    heap.push(p);
  }
  for (int iter = 0; iter < 10000 && error > tol; ++iter) {
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  return total;
}

double expected_max_quadrature(std::int64_t m) {
  const double md = static_cast<double>(m);
  auto integrand = [md](double x) {
    const double log_tail = (md - 1.0) * normal::log_cdf(x);
    return md * x * normal::pdf(x) * std::exp(log_tail);
  };
  return integrate(integrand, -9.0, 9.0, 1e-6, 36);
}

std::mutex g_em_mutex;
std::map<std::int64_t, double>& em_cache() {
  static std::map<std::int64_t, double> cache;
  return cache;
}

}  // namespace

double expected_max_gaussian_asymptotic(double m) {
  if (!(m > 1.0)) throw ArgumentError("asymptotic E_m needs m > 1");
  const double l = std::sqrt(2.0 * std::log(m));
  return l - (std::log(std::log(m)) + std::log(4.0 * std::numbers::pi)) / (2.0 * l);
}

double expected_max_gaussian(std::int64_t m) {
  if (m < 1) throw ArgumentError("E_m needs m >= 1");
  if (m == 1) return 0.0;
  if (m > 1'000'000) return expected_max_gaussian_asymptotic(static_cast<double>(m));
  {
    std::lock_guard lock(g_em_mutex);
    if (auto it = em_cache().find(m); it != em_cache().end()) return it->second;
  }
  const double value = expected_max_quadrature(m);
  std::lock_guard lock(g_em_mutex);
  em_cache().emplace(m, value);
  return value;
}

double rho_exact(const Kernel& kernel, const DiscretePolicy& policy) {
  if (!(kernel.variance() > 0.0)) throw DegenerateError("rho is undefined for a zero-variance kernel");
  const auto& w = policy.weights();
  const auto& g = policy.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    s += w[i] * w[i];
    double row = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      if (w[j] != 0.0) row += w[j] * kernel.correlation(g[i], g[j]);
    }
    s += 2.0 * w[i] * row;
  }
  return s;
}

double rho_empirical(const Kernel& kernel, std::span<const ActionPoint> samples) {
  if (samples.size() < 2) throw ArgumentError("empirical rho needs at least two samples");
  if (!(kernel.variance() > 0.0)) throw DegenerateError("rho is undefined for a zero-variance kernel");
  const std::size_t pairs = samples.size() / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) s += kernel(samples[2 * i], samples[2 * i + 1]);
  return s / kernel.variance() / static_cast<double>(pairs);
}

double lower_bound_value(double expected_y, double rho, const CurationObjectiveParams& params) {
  params.validate();
  const double r = std::clamp(rho, 0.0, 1.0);
  return expected_y + params.sigma * std::sqrt(1.0 - r) * expected_max_gaussian(params.m);
}

double upper_bound_value(double expected_max_y, double rho, const CurationObjectiveParams& params) {
  return lower_bound_value(expected_max_y, rho, params);
}

double expected_y(const DiscretePolicy& policy, std::span<const double> y_values) {
  if (y_values.size() != policy.size()) throw DimensionError("Y table does not match the policy grid");
  double s = 0.0;
  for (std::size_t i = 0; i < y_values.size(); ++i) s += policy.weights()[i] * y_values[i];
  return s;
}

double expected_max_y(const DiscretePolicy& policy, std::span<const double> y_values, int m) {
  if (y_values.size() != policy.size()) throw DimensionError("Y table does not match the policy grid");
  if (m < 1) throw ArgumentError("m must be >= 1");
  std::vector<std::size_t> order(y_values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return y_values[a] < y_values[b]; });
  double cdf = 0.0;
  double prev = 0.0;
  double e = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double y = y_values[order[k]];
    while (k < order.size() && y_values[order[k]] == y) cdf += policy.weights()[order[k++]];
    const double now = std::pow(std::min(cdf, 1.0), m);
    e += y * (now - prev);
    prev = now;
  }
  return e;
}

double expected_max_y_monte_carlo(const DiscretePolicy& policy, std::span<const double> y_values, int m,
                                  std::size_t draws, std::uint64_t seed) {
  if (y_values.size() != policy.size()) throw DimensionError("Y table does not match the policy grid");
  if (m < 1 || draws == 0) throw ArgumentError("need m >= 1 and at least one draw");
  Rng rng = make_rng(seed);
  double total = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    const auto idx = policy.sample_indices(static_cast<std::size_t>(m), rng);
    double best = -std::numeric_limits<double>::infinity();
    for (auto i : idx) best = std::max(best, y_values[i]);
    total += best;
  }
  return total / static_cast<double>(draws);
}

}  // namespace gencur
