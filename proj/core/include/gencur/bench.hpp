#pragma once

// Benchmark problems and the repeated-trial experiment harness.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gencur/baselines.hpp"
#include "gencur/dis_gc.hpp"
#include "gencur/nn_gc.hpp"
#include "gencur/problem.hpp"
#include "json.hpp"

namespace gencur {

/// Y(a) = exp(-(a - 0.5)^2 / (2 * 0.1^2)) on a 200-point grid over [0, 1];
/// squared-exponential kernel h = 1, sigma = 0.25.
Problem make_gaussian1d();

/// Negative Ackley function on a 60 x 60 grid over [-3, 3]^2;
/// squared-exponential kernel h = 0.5, sigma = 10.
Problem make_ackley2d();

/// Weights and values drawn uniformly from {0, ..., 10}.
KnapsackInstance make_knapsack_instance(std::size_t d, int capacity, std::uint64_t seed);

/// All feasible selections of `instance`, Y = total value; Hamming kernel
/// h = 0.5, sigma = 10. Throws ArgumentError for more than 20 items.
Problem make_knapsack(const KnapsackInstance& instance);
Problem make_knapsack(std::size_t d = 10, int capacity = 20, std::uint64_t seed = 0);

inline constexpr std::size_t kMaxKnapsackItems = 20;

/// "gauss1d", "ackley2d" or "knapsack" (d = 10, capacity 20, `seed`).
Problem make_benchmark(const std::string& tag, std::uint64_t seed = 0);

/// Method tags accepted by run_method and run_experiment.
const std::vector<std::string>& method_tags();

struct MethodConfig {
  DisGcConfig dis;
  nn::TrainConfig nn;
  std::size_t hidden_width = 64;
  std::size_t noise_dim = 10;
  BaselineConfig baseline;

  nlohmann::json to_json() const;
  static MethodConfig from_json(const nlohmann::json& j);
};

/// Generator for `problem` trained on its Y with the problem's kernel and
/// sigma. Throws ArgumentError on non-grid spaces.
nn::TrainResult train_generator(const Problem& problem, int m, const MethodConfig& cfg);

/// Draws m generator actions and snaps them to the grid.
std::vector<std::size_t> generator_indices(const Problem& problem, const nn::GeneratorNet& net, std::size_t m,
                                           double sigma2_nn, std::uint64_t seed);

/// Runs one method and returns m space indices. nn-gc trains a fresh
/// generator unless `trained` is supplied.
std::vector<std::size_t> run_method(const Problem& problem, const std::string& method, std::size_t m,
                                    std::uint64_t seed, const MethodConfig& cfg,
                                    const nn::GeneratorNet* trained = nullptr);

struct ExperimentConfig {
  std::vector<std::string> methods;
  std::size_t trials = 50;
  int m = 20;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  MethodConfig method;
};

struct TrialRecord {
  std::string method;
  std::size_t trial = 0;
  double regret = 0.0;
  double rho_hat = 0.0;
  bool ok = true;
  std::string error;
};

struct MethodSummary {
  std::string method;
  double mean_regret = 0.0;
  double low = 0.0;        // 5% quantile of regret
  double up = 0.0;         // 95% quantile of regret
  double diversity = 0.0;  // mean of sqrt(1 - rho_hat)
  std::size_t failed = 0;  // trials excluded after an error
};

struct ExperimentReport {
  std::string problem;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<MethodSummary> rows;
  std::vector<TrialRecord> trial_log;
};

/// Empirical quantile with linear interpolation between order statistics
/// (position q (n - 1) in the sorted sample).
double quantile(std::vector<double> sample, double q);

/// Per trial: a fresh ground truth, every method run with its own seed, the
/// regret of the best selected action and rho_hat of the emitted set.
ExperimentReport run_experiment(const Problem& problem, const ExperimentConfig& config);

enum class ReportFormat { kCsv, kJson };

/// Columns: method, mean_regret, low, up, diversity.
void write_report(const ExperimentReport& report, const std::filesystem::path& path, ReportFormat format);
std::string report_csv(const ExperimentReport& report);
nlohmann::json report_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);
ExperimentReport read_report(const std::filesystem::path& path);

}  // namespace gencur
