#include "gencur/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "gencur/errors.hpp"
#include "gencur/gp_truth.hpp"
#include "gencur/objective.hpp"
#include "gencur/random.hpp"

namespace gencur {

Problem make_gaussian1d() {
  auto space = ActionSpace::Grid({GridAxis{0.0, 1.0, 200}});
  auto y = [](const ActionPoint& a) {
    const double x = a.coords()[0] - 0.5;
    return std::exp(-x * x / (2.0 * 0.1 * 0.1));
  };
  constexpr double sigma = 0.25;
  return make_problem("gauss1d", std::move(space), y, Kernel::SquaredExponential(1.0, sigma * sigma), sigma,
                      DistanceMetric::kEuclidean);
}

Problem make_ackley2d() {
  auto space = ActionSpace::Grid({GridAxis{-3.0, 3.0, 60}, GridAxis{-3.0, 3.0, 60}});
  auto y = [](const ActionPoint& a) {
    const double x1 = a.coords()[0];
    const double x2 = a.coords()[1];
    const double two_pi = 2.0 * std::numbers::pi;
    const double ackley = -20.0 * std::exp(-0.2 * std::sqrt(0.5 * (x1 * x1 + x2 * x2))) -
                          std::exp(0.5 * (std::cos(two_pi * x1) + std::cos(two_pi * x2))) + 20.0 + std::numbers::e;
    return -ackley;
  };
  constexpr double sigma = 10.0;
  return make_problem("ackley2d", std::move(space), y, Kernel::SquaredExponential(0.5, sigma * sigma), sigma,
                      DistanceMetric::kEuclidean);
}

KnapsackInstance make_knapsack_instance(std::size_t d, int capacity, std::uint64_t seed) {
  if (d < 1 || d > kMaxKnapsackItems) throw ArgumentError("knapsack needs between 1 and 20 items");
  if (capacity < 0) throw ArgumentError("capacity must be >= 0");
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<int> unif(0, 10);
  KnapsackInstance inst;
  inst.capacity = capacity;
  for (std::size_t i = 0; i < d; ++i) inst.weights.push_back(unif(rng));
  for (std::size_t i = 0; i < d; ++i) inst.values.push_back(unif(rng));
  return inst;
}

Problem make_knapsack(const KnapsackInstance& instance) {
  const std::size_t d = instance.weights.size();
  if (d < 1 || d > kMaxKnapsackItems) throw ArgumentError("knapsack needs between 1 and 20 items");
  if (instance.values.size() != d) throw DimensionError("weights and values differ in length");
  std::vector<ActionPoint> feasible;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    std::vector<std::uint8_t> bits(d);
    for (std::size_t i = 0; i < d; ++i) bits[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
    auto a = ActionPoint::Binary(std::move(bits));
    if (instance.feasible(a)) feasible.push_back(std::move(a));
  }
  auto y = [instance](const ActionPoint& a) { return static_cast<double>(instance.total_value(a)); };
  constexpr double sigma = 10.0;
  Problem p = make_problem("knapsack", ActionSpace::Enumerated(std::move(feasible)), y,
                           Kernel::HammingExponential(0.5, sigma * sigma), sigma, DistanceMetric::kHamming);
  p.knapsack = instance;
  return p;
}

Problem make_knapsack(std::size_t d, int capacity, std::uint64_t seed) {
  return make_knapsack(make_knapsack_instance(d, capacity, seed));
}

Problem make_benchmark(const std::string& tag, std::uint64_t seed) {
  if (tag == "gauss1d") return make_gaussian1d();
  if (tag == "ackley2d") return make_ackley2d();
  if (tag == "knapsack") return make_knapsack(10, 20, seed);
  throw ArgumentError("unknown problem tag: " + tag);
}

const std::vector<std::string>& method_tags() {
  static const std::vector<std::string> tags{"random", "qo", "qo-noise", "is", "dis-gc", "nn-gc"};
  return tags;
}

namespace {

nlohmann::json inner_json(const InnerMaximizerConfig& c) {
  const char* mode = c.mode == InnerMode::kAuto                    ? "auto"
                     : c.mode == InnerMode::kContinuousMultistart ? "multistart"
                                                                  : "annealing";
  return {{"mode", mode},
          {"restarts", c.restarts},
          {"initial_stride", c.initial_stride},
          {"max_evaluations", c.max_evaluations},
          {"anneal_steps", c.anneal_steps},
          {"t0", c.t0},
          {"gamma", c.gamma}};
}

InnerMaximizerConfig inner_from_json(const nlohmann::json& j) {
  InnerMaximizerConfig c;
  const auto mode = j.value("mode", std::string("auto"));
  if (mode == "auto") {
    c.mode = InnerMode::kAuto;
  } else if (mode == "multistart") {
    c.mode = InnerMode::kContinuousMultistart;
  } else if (mode == "annealing") {
    c.mode = InnerMode::kDiscreteAnnealing;
  } else {
    throw ArgumentError("unknown inner maximizer mode: " + mode);
  }
  c.restarts = j.value("restarts", c.restarts);
  c.initial_stride = j.value("initial_stride", c.initial_stride);
  c.max_evaluations = j.value("max_evaluations", c.max_evaluations);
  c.anneal_steps = j.value("anneal_steps", c.anneal_steps);
  c.t0 = j.value("t0", c.t0);
  c.gamma = j.value("gamma", c.gamma);
  return c;
}

CurationObjectiveParams params_for(const Problem& problem, int m) {
  CurationObjectiveParams p;
  p.sigma = problem.sigma;
  p.m = m;
  p.kernel = problem.kernel;
  return p;
}

}  // namespace

nlohmann::json MethodConfig::to_json() const {
  return {{"dis_gc",
           {{"buffer_size", dis.buffer_size}, {"iterations", dis.iterations}, {"sigma2_dis", dis.sigma2_dis}}},
          {"nn_gc",
           {{"batch", nn.batch},
            {"sigma2_nn", nn.sigma2_nn},
            {"iterations", nn.iterations},
            {"learning_rate", nn.learning_rate},
            {"hidden_width", hidden_width},
            {"noise_dim", noise_dim}}},
          {"baseline", {{"noise_std", baseline.noise_std}, {"delta", baseline.delta}}},
          {"inner", inner_json(baseline.inner)}};
}

MethodConfig MethodConfig::from_json(const nlohmann::json& j) {
  MethodConfig c;
  if (j.contains("dis_gc")) {
    const auto& d = j.at("dis_gc");
    c.dis.buffer_size = d.value("buffer_size", c.dis.buffer_size);
    c.dis.iterations = d.value("iterations", c.dis.iterations);
    c.dis.sigma2_dis = d.value("sigma2_dis", c.dis.sigma2_dis);
  }
  if (j.contains("nn_gc")) {
    const auto& n = j.at("nn_gc");
    c.nn.batch = n.value("batch", c.nn.batch);
    c.nn.sigma2_nn = n.value("sigma2_nn", c.nn.sigma2_nn);
    c.nn.iterations = n.value("iterations", c.nn.iterations);
    c.nn.learning_rate = n.value("learning_rate", c.nn.learning_rate);
    c.hidden_width = n.value("hidden_width", c.hidden_width);
    c.noise_dim = n.value("noise_dim", c.noise_dim);
  }
  if (j.contains("baseline")) {
    const auto& b = j.at("baseline");
    c.baseline.noise_std = b.value("noise_std", c.baseline.noise_std);
    c.baseline.delta = b.value("delta", c.baseline.delta);
  }
  if (j.contains("inner")) c.baseline.inner = inner_from_json(j.at("inner"));
  c.dis.inner = c.baseline.inner;
  return c;
}

nn::TrainResult train_generator(const Problem& problem, int m, const MethodConfig& cfg) {
  if (!problem.space.is_grid()) throw ArgumentError("the generator needs a continuous grid space");
  std::vector<double> lower, upper;
  for (const auto& ax : problem.space.axes()) {
    lower.push_back(ax.lower);
    upper.push_back(ax.upper);
  }
  auto net = nn::GeneratorNet::Create({cfg.noise_dim, cfg.hidden_width, cfg.hidden_width, problem.space.dim()},
                                      std::move(lower), std::move(upper), derive_seed(cfg.nn.seed, 1));
  const nn::GridInterpolator y(problem.space, problem.y_values);
  return nn::train(std::move(net), y, params_for(problem, m), cfg.nn);
}

std::vector<std::size_t> generator_indices(const Problem& problem, const nn::GeneratorNet& net, std::size_t m,
                                           double sigma2_nn, std::uint64_t seed) {
  std::vector<std::size_t> out;
  out.reserve(m);
  for (const auto& a : nn::sample_actions(net, m, sigma2_nn, seed)) out.push_back(problem.space.snap(a));
  return out;
}

std::vector<std::size_t> run_method(const Problem& problem, const std::string& method, std::size_t m,
                                    std::uint64_t seed, const MethodConfig& cfg, const nn::GeneratorNet* trained) {
  if (m < 1) throw ArgumentError("m must be >= 1");
  cfg.baseline.validate();
  const auto& inner = cfg.baseline.inner;
  if (method == "random") return random_policy(problem, m, seed);
  if (method == "qo") return qo(problem, m, seed, inner);
  if (method == "qo-noise") {
    const double sd = cfg.baseline.noise_std < 0.0 ? default_noise_std(problem) : cfg.baseline.noise_std;
    return qo_noise(problem, m, sd, seed, inner);
  }
  if (method == "is") return iterative_search(problem, m, cfg.baseline.delta, seed, inner);
  if (method == "dis-gc") {
    DisGcConfig dis = cfg.dis;
    dis.inner = inner;
    dis.seed = seed;
    return run_dis_gc(problem.space, problem.y_values, params_for(problem, static_cast<int>(m)), dis).indices;
  }
  if (method == "nn-gc") {
    if (trained != nullptr) return generator_indices(problem, *trained, m, cfg.nn.sigma2_nn, seed);
    MethodConfig local = cfg;
    local.nn.seed = derive_seed(seed, 0x6e6e);
    const auto result = train_generator(problem, static_cast<int>(m), local);
    return generator_indices(problem, result.net, m, cfg.nn.sigma2_nn, derive_seed(seed, 0x5a));
  }
  throw ArgumentError("unknown method: " + method);
}

double quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw ArgumentError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("quantile level must lie in [0, 1]");
  std::sort(sample.begin(), sample.end());
  const double pos = q * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sample[lo] + frac * (sample[hi] - sample[lo]);
}

ExperimentReport run_experiment(const Problem& problem, const ExperimentConfig& config) {
  if (config.methods.empty()) throw ArgumentError("need at least one method");
  if (config.trials < 1) throw ArgumentError("need at least one trial");
  if (config.m < 1) throw ArgumentError("m must be >= 1");
  for (const auto& method : config.methods) {
    if (std::find(method_tags().begin(), method_tags().end(), method) == method_tags().end()) {
      throw ArgumentError("unknown method: " + method);
    }
  }
  const auto m = static_cast<std::size_t>(config.m);
  const std::size_t methods = config.methods.size();

  // The generator never sees the realization, so one training run serves
  // every trial; trials differ in the sampling noise only.
  std::optional<nn::GeneratorNet> generator;
  std::string generator_error;
  if (std::find(config.methods.begin(), config.methods.end(), "nn-gc") != config.methods.end()) {
    MethodConfig local = config.method;
    local.nn.seed = derive_seed(config.seed, 0x6e6e);
    try {
      generator = train_generator(problem, config.m, local).net;
    } catch (const Error& e) {
      generator_error = e.what();
    }
  }

  std::vector<TrialRecord> log(config.trials * methods);
  auto run_trial = [&](std::size_t trial) {
    const std::uint64_t trial_seed = derive_seed(config.seed, trial);
    const GroundTruth truth = sample_realization(problem, derive_seed(trial_seed, 0));
    for (std::size_t k = 0; k < methods; ++k) {
      TrialRecord& rec = log[trial * methods + k];
      rec.method = config.methods[k];
      rec.trial = trial;
      try {
        if (rec.method == "nn-gc" && !generator) throw Error(generator_error);
        const auto idx = run_method(problem, rec.method, m, derive_seed(trial_seed, k + 1), config.method,
                                    generator ? &*generator : nullptr);
        std::vector<ActionPoint> actions;
        for (auto i : idx) actions.push_back(problem.space.point(i));
        rec.regret = truth.regret_of_indices(idx);
        rec.rho_hat = m >= 2 ? rho_empirical(problem.kernel.with_amplitude(1.0), actions) : 1.0;
      } catch (const Error& e) {
        rec.ok = false;
        rec.error = e.what();
      }
    }
  };

  const unsigned workers = std::max(1U, std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < config.trials; ++t) run_trial(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < config.trials; t = next++) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  ExperimentReport report;
  report.problem = problem.name;
  report.trials = config.trials;
  report.seed = config.seed;
  report.config = {{"problem", problem.name},
                   {"methods", config.methods},
                   {"trials", config.trials},
                   {"m", config.m},
                   {"seed", config.seed},
                   {"sigma", problem.sigma},
                   {"kernel", to_json(problem.kernel)},
                   {"space", {{"size", problem.space.size()}, {"dim", problem.space.dim()}}},
                   {"method_config", config.method.to_json()}};
  for (std::size_t k = 0; k < methods; ++k) {
    MethodSummary row;
    row.method = config.methods[k];
    std::vector<double> regrets;
    double diversity = 0.0;
    for (std::size_t t = 0; t < config.trials; ++t) {
      const auto& rec = log[t * methods + k];
      if (!rec.ok) {
        ++row.failed;
        continue;
      }
      regrets.push_back(rec.regret);
      diversity += std::sqrt(std::clamp(1.0 - rec.rho_hat, 0.0, 1.0));
    }
    if (regrets.empty()) {
      row.mean_regret = row.low = row.up = row.diversity = std::numeric_limits<double>::quiet_NaN();
    } else {
      double sum = 0.0;
      for (double r : regrets) sum += r;
      const auto count = static_cast<double>(regrets.size());
      row.mean_regret = sum / count;
      row.diversity = diversity / count;
      row.low = quantile(regrets, 0.05);
      row.up = quantile(regrets, 0.95);
    }
    report.rows.push_back(row);
  }
  report.trial_log = std::move(log);
  return report;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "method,mean_regret,low,up,diversity\n";
  for (const auto& r : report.rows) {
    out << r.method << ',' << format_double(r.mean_regret) << ',' << format_double(r.low) << ','
        << format_double(r.up) << ',' << format_double(r.diversity) << '\n';
  }
  return out.str();
}

nlohmann::json report_json(const ExperimentReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"method", r.method},
                    {"mean_regret", r.mean_regret},
                    {"low", r.low},
                    {"up", r.up},
                    {"diversity", r.diversity},
                    {"failed", r.failed}});
  }
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : report.trial_log) {
    nlohmann::json e{{"method", t.method}, {"trial", t.trial}, {"ok", t.ok}};
    if (t.ok) {
      e["regret"] = t.regret;
      e["rho_hat"] = t.rho_hat;
    } else {
      e["error"] = t.error;
    }
    trials.push_back(std::move(e));
  }
  return {{"problem", report.problem}, {"trials", report.trials}, {"seed", report.seed},
          {"config", report.config},   {"rows", std::move(rows)}, {"trial_log", std::move(trials)}};
}

ExperimentReport report_from_json(const nlohmann::json& j) {
  ExperimentReport r;
  r.problem = j.at("problem").get<std::string>();
  r.trials = j.at("trials").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config = j.value("config", nlohmann::json::object());
  auto number = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  for (const auto& row : j.at("rows")) {
    MethodSummary s;
    s.method = row.at("method").get<std::string>();
    s.mean_regret = number(row.at("mean_regret"));
    s.low = number(row.at("low"));
    s.up = number(row.at("up"));
    s.diversity = number(row.at("diversity"));
    s.failed = row.value("failed", std::size_t{0});
    r.rows.push_back(std::move(s));
  }
  for (const auto& t : j.value("trial_log", nlohmann::json::array())) {
    TrialRecord rec;
    rec.method = t.at("method").get<std::string>();
    rec.trial = t.at("trial").get<std::size_t>();
    rec.ok = t.at("ok").get<bool>();
    if (rec.ok) {
      rec.regret = t.at("regret").get<double>();
      rec.rho_hat = t.at("rho_hat").get<double>();
    } else {
      rec.error = t.at("error").get<std::string>();
    }
    r.trial_log.push_back(std::move(rec));
  }
  return r;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open report file: " + path.string());
  if (format == ReportFormat::kCsv) {
    out << report_csv(report);
  } else {
    out << report_json(report).dump(2) << '\n';
  }
  if (!out) throw Error("failed writing report file: " + path.string());
}

ExperimentReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open report file: " + path.string());
  return report_from_json(nlohmann::json::parse(in));
}

}  // namespace gencur
