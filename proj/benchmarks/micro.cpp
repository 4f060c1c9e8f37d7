#include <benchmark/benchmark.h>

#include "gencur/bench.hpp"
#include "gencur/dis_gc.hpp"
#include "gencur/grid_solver.hpp"
#include "gencur/nn_gc.hpp"
#include "gencur/objective.hpp"
#include "gencur/preference.hpp"

namespace gencur {
namespace {

void BM_ExpectedMax(benchmark::State& state) {
  std::int64_t m = 2;
  for (auto _ : state) {
    // Cycle m so the memo does not hide the quadrature cost entirely.
    benchmark::DoNotOptimize(expected_max_gaussian(m));
    m = m == 200 ? 2 : m + 1;
  }
}
BENCHMARK(BM_ExpectedMax);

void BM_RhoExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto space = ActionSpace::Grid({GridAxis{0.0, 1.0, n}});
  const auto policy = DiscretePolicy::Uniform({space.points().begin(), space.points().end()});
  const auto k = Kernel::SquaredExponential(0.2);
  for (auto _ : state) benchmark::DoNotOptimize(rho_exact(k, policy));
}
BENCHMARK(BM_RhoExact)->Arg(50)->Arg(200);

void BM_SolveGaussianPolicy(benchmark::State& state) {
  const auto p = make_gaussian1d();
  CurationObjectiveParams params;
  params.sigma = p.sigma;
  params.m = 20;
  params.kernel = p.kernel;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_policy(p.space.points(), p.y_values, params).objective);
}
BENCHMARK(BM_SolveGaussianPolicy)->Unit(benchmark::kMillisecond);

void BM_DisGc(benchmark::State& state) {
  const auto p = make_knapsack(10, 20, 0);
  CurationObjectiveParams params;
  params.sigma = p.sigma;
  params.m = 20;
  params.kernel = p.kernel;
  DisGcConfig cfg;
  cfg.iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_dis_gc(p.space, p.y_values, params, cfg).indices);
}
BENCHMARK(BM_DisGc)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_NnObjective(benchmark::State& state) {
  const auto p = make_ackley2d();
  const nn::GridInterpolator y(p.space, p.y_values);
  CurationObjectiveParams params;
  params.sigma = p.sigma;
  params.m = 20;
  params.kernel = p.kernel;
  const auto net = nn::GeneratorNet::Create({10, 64, 64, 2}, {-3.0, -3.0}, {3.0, 3.0}, 1);
  Rng rng = make_rng(2);
  const std::size_t n = 4;
  const auto noise = nn::draw_noise(n * 2 * 20, 10, 0.1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(nn::evaluate_objective(net, y, params, noise, n, true).value);
}
BENCHMARK(BM_NnObjective)->Unit(benchmark::kMicrosecond);

void BM_PreferenceUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto space = ActionSpace::Grid({GridAxis{0.0, 1.0, n}});
  const auto prior = make_prior(space, Kernel::SquaredExponential(0.2));
  const PreferenceObservation obs{space.point(n / 4), space.point(3 * n / 4)};
  for (auto _ : state) benchmark::DoNotOptimize(update(prior, obs).mean);
}
BENCHMARK(BM_PreferenceUpdate)->Arg(200)->Arg(1000);

}  // namespace
}  // namespace gencur

BENCHMARK_MAIN();
