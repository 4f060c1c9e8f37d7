// gencur: command-line entry point.
//
// Exit codes: 0 success, 1 runtime failure, 2 bad arguments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "gencur/bench.hpp"
#include "gencur/errors.hpp"
#include "gencur/grid_solver.hpp"
#include "gencur/objective.hpp"
#include "gencur/service.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace gencur;

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void echo_config(const std::string& command, const json& resolved) {
  std::cerr << json{{"command", command}, {"config", resolved}}.dump() << '\n';
}

// Writes to --out when given, otherwise stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << text;
  if (!out) throw Error("failed writing output file: " + path);
}

std::string action_text(const ActionPoint& a) {
  std::string s;
  if (a.is_binary()) {
    for (auto b : a.bits()) s += b ? '1' : '0';
    return s;
  }
  for (std::size_t k = 0; k < a.coords().size(); ++k) {
    if (k > 0) s += ' ';
    s += fmt_double(a.coords()[k]);
  }
  return s;
}

Kernel kernel_from_options(const json& cfg, double amplitude) {
  const auto tag = cfg.at("kernel").get<std::string>();
  const double h = cfg.at("length_scale").get<double>();
  switch (variant_from_tag(tag)) {
    case KernelVariant::kSquaredExponential:
      return Kernel::SquaredExponential(h, amplitude);
    case KernelVariant::kLaplacian:
      return Kernel::Laplacian(h, amplitude);
    case KernelVariant::kWhiteNoise:
      return Kernel::WhiteNoise(cfg.at("kappa").get<double>(), amplitude);
    case KernelVariant::kHammingExponential:
      return Kernel::HammingExponential(h, amplitude);
  }
  throw ArgumentError("unknown kernel: " + tag);
}

std::string weights_csv(std::span<const ActionPoint> grid, std::span<const double> w) {
  std::ostringstream out;
  out << "index,action,weight\n";
  for (std::size_t i = 0; i < grid.size(); ++i) out << i << ',' << action_text(grid[i]) << ',' << fmt_double(w[i]) << '\n';
  return out.str();
}

// Grid problem for solve-grid: a benchmark tag, or an explicit 1D table.
Problem grid_problem(const json& cfg) {
  const auto y = cfg.at("y").get<std::vector<double>>();
  if (y.empty()) {
    Problem p = make_benchmark(cfg.at("problem").get<std::string>(), cfg.at("seed").get<std::uint64_t>());
    if (!p.space.is_grid()) throw ArgumentError("solve-grid needs a grid problem");
    return p;
  }
  auto space = ActionSpace::Grid({GridAxis{cfg.at("lower").get<double>(), cfg.at("upper").get<double>(), y.size()}});
  Problem p;
  p.name = "custom";
  p.space = std::move(space);
  p.y_values = y;
  p.sigma = 1.0;
  return p;
}

int cmd_em(std::int64_t m) {
  std::cout << fmt_double(expected_max_gaussian(m)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generative curation toolkit"};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);

  // em
  auto* em = app.add_subcommand("em", "Expected maximum of m standard normals");
  std::int64_t em_m = 1;
  em->add_option("m", em_m, "Number of draws")->required()->check(CLI::PositiveNumber);

  // solve-grid
  auto* solve = app.add_subcommand("solve-grid", "Optimize the lower-bound objective over a grid policy");
  cli::OptionSet solve_opts(solve);
  solve_opts.add<std::string>("problem", "gauss1d", "Benchmark tag (ignored when y is given)");
  solve_opts.add<std::vector<double>>("y", {}, "Explicit Y table over an equidistant 1D grid");
  solve_opts.add<double>("lower", 0.0, "Lower end of the explicit grid");
  solve_opts.add<double>("upper", 1.0, "Upper end of the explicit grid");
  solve_opts.add<std::string>("kernel", "sqexp", "sqexp | laplace | white");
  solve_opts.add<double>("length-scale", 1.0, "Kernel length scale h");
  solve_opts.add<double>("kappa", 1.0, "White-noise scale");
  solve_opts.add<double>("sigma", 0.25, "Qualitative standard deviation");
  solve_opts.add<int>("m", 20, "Number of recommendations");
  solve_opts.add<int>("max-iters", 20000, "Iteration cap");
  solve_opts.add<double>("tol", 1e-8, "Stop when an iteration improves by less");
  solve_opts.add<std::uint64_t>("seed", 0, "Problem seed");
  solve_opts.add<std::string>("out", "", "Weights CSV path (default stdout)");

  // asymptotic
  auto* asym = app.add_subcommand("asymptotic", "Diversity-only policy over a 1D grid");
  cli::OptionSet asym_opts(asym);
  asym_opts.add<std::string>("kernel", "sqexp", "sqexp | laplace | white");
  asym_opts.add<double>("length-scale", 1.0, "Kernel length scale h");
  asym_opts.add<double>("kappa", 1.0, "White-noise scale");
  asym_opts.add<double>("lower", -1.0, "Grid lower end");
  asym_opts.add<double>("upper", 1.0, "Grid upper end");
  asym_opts.add<std::size_t>("count", 200, "Grid points");
  asym_opts.add<std::string>("out", "", "Weights CSV path (default stdout)");

  // curate
  auto* curate = app.add_subcommand("curate", "Produce m recommendations for a benchmark");
  cli::OptionSet cur_opts(curate);
  cur_opts.add<std::string>("problem", "gauss1d", "gauss1d | ackley2d | knapsack");
  cur_opts.add<std::string>("method", "dis-gc", "dis-gc | nn-gc | random | qo | qo-noise | is");
  cur_opts.add<int>("m", 20, "Number of recommendations");
  cur_opts.add<std::uint64_t>("seed", 0, "Random seed");
  cur_opts.add<std::size_t>("buffer-size", 50, "DIS-GC buffer size n");
  cur_opts.add<std::size_t>("iterations", 1000, "DIS-GC iterations T");
  cur_opts.add<double>("sigma2-dis", 2e-2, "DIS-GC evaluation noise variance");
  cur_opts.add<int>("nn-iterations", 500, "NN-GC training iterations");
  cur_opts.add<std::size_t>("nn-batch", 64, "NN-GC batch size");
  cur_opts.add<double>("learning-rate", 0.05, "NN-GC learning rate");
  cur_opts.add<double>("sigma2-nn", 0.1, "NN-GC noise variance");
  cur_opts.add<std::size_t>("hidden-width", 64, "NN-GC hidden layer width");
  cur_opts.add<double>("noise-std", -1.0, "qo-noise std (negative: 5% of the Y range)");
  cur_opts.add<double>("delta", 0.1, "IS optimality slack");
  cur_opts.add<std::string>("out", "", "Actions CSV path (default stdout)");
  cur_opts.add<std::string>("model-out", "", "NN-GC: write the trained generator JSON here");

  // bench
  auto* bench = app.add_subcommand("bench", "Repeated-trial comparison of methods");
  cli::OptionSet bench_opts(bench);
  bench_opts.add<std::string>("problem", "gauss1d", "gauss1d | ackley2d | knapsack");
  bench_opts.add<std::string>("methods", "random,qo,qo-noise,is,dis-gc,nn-gc", "Comma-separated methods");
  bench_opts.add<std::size_t>("trials", 50, "Trials");
  bench_opts.add<int>("m", 20, "Number of recommendations");
  bench_opts.add<std::uint64_t>("seed", 0, "Random seed");
  bench_opts.add<std::string>("format", "csv", "csv | json");
  bench_opts.add<std::string>("out", "", "Report path (default stdout)");
  bench_opts.add<std::string>("trial-log", "", "Per-trial JSON lines path");
  bench_opts.add<std::size_t>("iterations", 1000, "DIS-GC iterations T");
  bench_opts.add<int>("nn-iterations", 500, "NN-GC training iterations");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the curation session HTTP service");
  cli::OptionSet serve_opts(serve);
  serve_opts.add<std::string>("host", "127.0.0.1", "Bind address");
  serve_opts.add<int>("port", 8080, "Port");
  serve_opts.add<std::string>("snapshot-dir", "", "Session snapshot directory");
  serve_opts.add<std::string>("static-dir", "", "Directory of static UI assets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (em->parsed()) return cmd_em(em_m);

    if (solve->parsed()) {
      const json cfg = solve_opts.resolve();
      echo_config("solve-grid", cfg);
      const Problem p = grid_problem(cfg);
      CurationObjectiveParams params;
      params.sigma = cfg.at("sigma").get<double>();
      params.m = cfg.at("m").get<int>();
      params.kernel = kernel_from_options(cfg, 1.0);
      SolverOptions opts;
      opts.max_iters = cfg.at("max_iters").get<int>();
      opts.tol = cfg.at("tol").get<double>();
      const auto sol = optimize_policy(p.space.points(), p.y_values, params, opts);
      emit(cfg.at("out").get<std::string>(), weights_csv(sol.policy.grid(), sol.policy.weights()));
      const json summary{{"objective", sol.objective},
                         {"iterations", sol.iterations},
                         {"rho", rho_exact(params.kernel, sol.policy)},
                         {"expected_y", expected_y(sol.policy, p.y_values)},
                         {"clusters", count_clusters(sol.policy.weights())}};
      if (!cfg.at("out").get<std::string>().empty()) std::cout << summary.dump() << '\n';
      std::cerr << summary.dump() << '\n';
      return 0;
    }

    if (asym->parsed()) {
      const json cfg = asym_opts.resolve();
      echo_config("asymptotic", cfg);
      const auto space = ActionSpace::Grid(
          {GridAxis{cfg.at("lower").get<double>(), cfg.at("upper").get<double>(), cfg.at("count").get<std::size_t>()}});
      const auto sol = asymptotic_policy(kernel_from_options(cfg, 1.0), space.points());
      emit(cfg.at("out").get<std::string>(), weights_csv(sol.policy.grid(), sol.policy.weights()));
      const json summary{{"objective", sol.objective},
                         {"iterations", sol.iterations},
                         {"clusters", count_clusters(sol.policy.weights())}};
      if (!cfg.at("out").get<std::string>().empty()) std::cout << summary.dump() << '\n';
      std::cerr << summary.dump() << '\n';
      return 0;
    }

    if (curate->parsed()) {
      const json cfg = cur_opts.resolve();
      echo_config("curate", cfg);
      const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
      const Problem p = make_benchmark(cfg.at("problem").get<std::string>(), seed);
      const auto method = cfg.at("method").get<std::string>();
      const int m = cfg.at("m").get<int>();
      if (m < 1) throw ArgumentError("m must be >= 1");
      MethodConfig mc;
      mc.dis.buffer_size = cfg.at("buffer_size").get<std::size_t>();
      mc.dis.iterations = cfg.at("iterations").get<std::size_t>();
      mc.dis.sigma2_dis = cfg.at("sigma2_dis").get<double>();
      mc.nn.iterations = cfg.at("nn_iterations").get<int>();
      mc.nn.batch = cfg.at("nn_batch").get<std::size_t>();
      mc.nn.learning_rate = cfg.at("learning_rate").get<double>();
      mc.nn.sigma2_nn = cfg.at("sigma2_nn").get<double>();
      mc.hidden_width = cfg.at("hidden_width").get<std::size_t>();
      mc.baseline.noise_std = cfg.at("noise_std").get<double>();
      mc.baseline.delta = cfg.at("delta").get<double>();

      std::vector<std::size_t> idx;
      const auto model_out = cfg.at("model_out").get<std::string>();
      if (method == "nn-gc") {
        mc.nn.seed = derive_seed(seed, 0x6e6e);
        const auto trained = train_generator(p, m, mc);
        if (!model_out.empty()) emit(model_out, trained.net.to_json().dump(2) + "\n");
        idx = generator_indices(p, trained.net, static_cast<std::size_t>(m), mc.nn.sigma2_nn, derive_seed(seed, 0x5a));
      } else {
        if (!model_out.empty()) throw ArgumentError("--model-out applies to nn-gc only");
        idx = run_method(p, method, static_cast<std::size_t>(m), seed, mc);
      }
      std::ostringstream out;
      out << "rank,index,action,y\n";
      for (std::size_t r = 0; r < idx.size(); ++r) {
        out << r << ',' << idx[r] << ',' << action_text(p.space.point(idx[r])) << ','
            << fmt_double(p.y_values[idx[r]]) << '\n';
      }
      emit(cfg.at("out").get<std::string>(), out.str());
      return 0;
    }

    if (bench->parsed()) {
      const json cfg = bench_opts.resolve();
      echo_config("bench", cfg);
      ExperimentConfig ec;
      ec.methods = cli::split_list(cfg.at("methods").get<std::string>());
      ec.trials = cfg.at("trials").get<std::size_t>();
      ec.m = cfg.at("m").get<int>();
      ec.seed = cfg.at("seed").get<std::uint64_t>();
      ec.threads = threads;
      ec.method.dis.iterations = cfg.at("iterations").get<std::size_t>();
      ec.method.nn.iterations = cfg.at("nn_iterations").get<int>();
      const auto format = cfg.at("format").get<std::string>();
      if (format != "csv" && format != "json") throw ArgumentError("format must be csv or json");
      const Problem p = make_benchmark(cfg.at("problem").get<std::string>(), ec.seed);
      const auto report = run_experiment(p, ec);
      emit(cfg.at("out").get<std::string>(),
           format == "csv" ? report_csv(report) : report_json(report).dump(2) + "\n");
      const auto log_path = cfg.at("trial_log").get<std::string>();
      if (!log_path.empty()) {
        std::ostringstream lines;
        const auto doc = report_json(report);
        for (const auto& e : doc.at("trial_log")) lines << e.dump() << '\n';
        emit(log_path, lines.str());
      }
      return 0;
    }

    if (serve->parsed()) {
      const json cfg = serve_opts.resolve();
      echo_config("serve", cfg);
      const auto dir = cfg.at("snapshot_dir").get<std::string>();
      const auto static_dir = cfg.at("static_dir").get<std::string>();
      SessionManager manager(dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(dir));
      HttpOptions opts;
      opts.host = cfg.at("host").get<std::string>();
      opts.port = cfg.at("port").get<int>();
      opts.threads = threads;
      if (!static_dir.empty()) opts.static_dir = static_dir;
      serve_http(manager, opts);
      return 0;
    }
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
