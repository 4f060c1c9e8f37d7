#include "gencur/bench.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "gencur/errors.hpp"

namespace gencur {
namespace {

ActionPoint C(std::vector<double> x) { return ActionPoint::Continuous(std::move(x)); }

TEST(BenchProblemTest, GaussianShape) {
  const auto p = make_gaussian1d();
  EXPECT_EQ(p.space.size(), 200u);
  EXPECT_DOUBLE_EQ(p.quantitative(C({0.5})), 1.0);
  EXPECT_NEAR(p.quantitative(C({0.6})), std::exp(-0.5), 1e-14);
  EXPECT_DOUBLE_EQ(p.sigma, 0.25);
  EXPECT_DOUBLE_EQ(p.kernel.amplitude(), 0.0625);
}

TEST(BenchProblemTest, AckleyValues) {
  const auto p = make_ackley2d();
  EXPECT_EQ(p.space.size(), 3600u);
  EXPECT_NEAR(p.quantitative(C({0.0, 0.0})), 0.0, 1e-12);
  EXPECT_NEAR(p.quantitative(C({1.0, 1.0})), 20.0 * std::exp(-0.2) - 20.0, 1e-12);
  EXPECT_NEAR(p.quantitative(C({1.0, 1.0})), -3.6253849, 1e-7);
  for (const auto& [x, y] : std::vector<std::pair<double, double>>{{0.3, -1.7}, {2.2, 0.4}, {-2.9, 2.9}}) {
    const double v = p.quantitative(C({x, y}));
    EXPECT_NEAR(v, p.quantitative(C({-x, y})), 1e-12);
    EXPECT_NEAR(v, p.quantitative(C({y, x})), 1e-12);
    EXPECT_LT(v, 0.0);
  }
}

TEST(BenchProblemTest, KnapsackEnumeratesFeasibleSets) {
  const auto inst = make_knapsack_instance(10, 20, 4);
  EXPECT_EQ(inst.weights.size(), 10u);
  const auto p = make_knapsack(inst);
  std::size_t count = 0;
  for (std::uint32_t mask = 0; mask < 1024; ++mask) {
    int w = 0;
    for (int i = 0; i < 10; ++i) {
      if (mask >> i & 1U) w += inst.weights[static_cast<std::size_t>(i)];
    }
    if (w <= 20) ++count;
  }
  EXPECT_EQ(p.space.size(), count);
  for (std::size_t i = 0; i < p.space.size(); ++i) {
    EXPECT_TRUE(inst.feasible(p.space.point(i)));
    EXPECT_EQ(p.y_values[i], inst.total_value(p.space.point(i)));
  }
  for (int v : inst.values) {
    EXPECT_GE(v, 0);
    EXPECT_LE(v, 10);
  }
}

TEST(BenchProblemTest, KnapsackRejectsLargeInstances) {
  EXPECT_THROW(make_knapsack(21, 20, 0), ArgumentError);
  EXPECT_THROW(make_benchmark("nope"), ArgumentError);
}

TEST(QuantileTest, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile({4.0, 1.0}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile({7.0}, 0.95), 7.0);
  EXPECT_THROW(quantile({}, 0.5), ArgumentError);
}

TEST(ExperimentTest, SinglePointGridHasZeroRegret) {
  const auto p = make_problem("one", ActionSpace::Grid({GridAxis{0.0, 0.0, 1}}), [](const ActionPoint&) { return 2.0; },
                              Kernel::SquaredExponential(1.0), 1.0, DistanceMetric::kEuclidean);
  ExperimentConfig cfg;
  cfg.methods = {"random"};
  cfg.trials = 5;
  cfg.m = 3;
  const auto r = run_experiment(p, cfg);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].mean_regret, 0.0);
  EXPECT_EQ(r.rows[0].diversity, 0.0);
}

TEST(ExperimentTest, NoQualitativeTermMakesQoOptimal) {
  const auto p = make_problem("flat-u", ActionSpace::Grid({GridAxis{0.0, 1.0, 51}}),
                              [](const ActionPoint& a) { return -std::abs(a.coords()[0] - 0.3); },
                              Kernel::SquaredExponential(0.2, 0.0), 0.0, DistanceMetric::kEuclidean);
  ExperimentConfig cfg;
  cfg.methods = {"qo", "random"};
  cfg.trials = 10;
  cfg.m = 4;
  const auto r = run_experiment(p, cfg);
  EXPECT_NEAR(r.rows[0].mean_regret, 0.0, 1e-12);
  EXPECT_GT(r.rows[1].mean_regret, 0.0);
}

ExperimentReport small_report(unsigned threads = 1) {
  ExperimentConfig cfg;
  cfg.methods = {"random", "qo", "is"};
  cfg.trials = 12;
  cfg.m = 5;
  cfg.seed = 3;
  cfg.threads = threads;
  return run_experiment(make_knapsack(8, 15, 2), cfg);
}

TEST(ExperimentTest, SummaryMatchesTrialLog) {
  const auto r = small_report();
  ASSERT_EQ(r.trial_log.size(), 36u);
  for (const auto& row : r.rows) {
    std::vector<double> regrets;
    double div = 0.0;
    for (const auto& t : r.trial_log) {
      if (t.method != row.method) continue;
      ASSERT_TRUE(t.ok) << t.error;
      regrets.push_back(t.regret);
      div += std::sqrt(std::max(0.0, 1.0 - t.rho_hat));
      EXPECT_GE(t.regret, 0.0);
    }
    ASSERT_EQ(regrets.size(), 12u);
    double mean = 0.0;
    for (double x : regrets) mean += x / 12.0;
    EXPECT_NEAR(row.mean_regret, mean, 1e-12);
    EXPECT_DOUBLE_EQ(row.low, quantile(regrets, 0.05));
    EXPECT_DOUBLE_EQ(row.up, quantile(regrets, 0.95));
    EXPECT_NEAR(row.diversity, div / 12.0, 1e-12);
    EXPECT_LE(row.low, row.up);
  }
}

TEST(ExperimentTest, ThreadCountDoesNotChangeResults) {
  EXPECT_EQ(report_csv(small_report(1)), report_csv(small_report(3)));
}

TEST(ExperimentTest, UnknownMethod) {
  ExperimentConfig cfg;
  cfg.methods = {"oracle"};
  EXPECT_THROW(run_experiment(make_gaussian1d(), cfg), ArgumentError);
}

TEST(ReportTest, EmptyCsvHasHeaderOnly) {
  EXPECT_EQ(report_csv(ExperimentReport{}), "method,mean_regret,low,up,diversity\n");
}

TEST(ReportTest, JsonRoundTripIsExact) {
  const auto r = small_report();
  const auto back = report_from_json(nlohmann::json::parse(report_json(r).dump()));
  EXPECT_EQ(report_json(back), report_json(r));
  ASSERT_EQ(back.rows.size(), r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].mean_regret, r.rows[i].mean_regret);
    EXPECT_EQ(back.rows[i].diversity, r.rows[i].diversity);
  }
}

TEST(ReportTest, FilesRoundTrip) {
  const auto r = small_report();
  const auto dir = std::filesystem::temp_directory_path() / "gencur_bench_test";
  std::filesystem::create_directories(dir);
  write_report(r, dir / "r.json", ReportFormat::kJson);
  EXPECT_EQ(report_json(read_report(dir / "r.json")), report_json(r));
  write_report(r, dir / "r.csv", ReportFormat::kCsv);
  std::ifstream in(dir / "r.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), report_csv(r));
  std::filesystem::remove_all(dir);
}

TEST(MethodTest, EveryTagRunsOnGaussian) {
  const auto p = make_gaussian1d();
  MethodConfig cfg;
  cfg.dis.iterations = 200;
  cfg.nn.iterations = 20;
  for (const auto& tag : method_tags()) {
    const auto idx = run_method(p, tag, 5, 1, cfg);
    EXPECT_EQ(idx.size(), 5u) << tag;
    for (auto i : idx) EXPECT_LT(i, p.space.size()) << tag;
  }
  EXPECT_EQ(MethodConfig::from_json(cfg.to_json()).to_json(), cfg.to_json());
}

}  // namespace
}  // namespace gencur
