#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gradkit/config.hpp"
#include "gradkit/csv.hpp"
#include "gradkit/harness.hpp"
#include "gradkit/idx.hpp"

namespace fs = std::filesystem;
using namespace gradkit;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_io = 3;

bool write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << body;
  return out.good();
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            bool no_timing) {
  CliConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return exit_io;
  }

  if (const char* env_seed = std::getenv("GRADKIT_SEED")) {
    try {
      cfg.seed = std::stoull(env_seed);
    } catch (const std::exception&) {
      std::cerr << "config error: GRADKIT_SEED='" << env_seed
                << "' is not an unsigned integer\n";
      return exit_config;
    }
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "io error: cannot create '" << out_dir << "': " << ec.message()
              << "\n";
    return exit_io;
  }

  std::vector<SummaryRow> rows;
  try {
    for (const RunConfig& rc : to_run_configs(cfg)) {
      const Trace trace = run(rc);
      const fs::path trace_path =
          fs::path(out_dir) / ("trace_" + trace.algorithm + ".csv");
      if (!write_file(trace_path, trace_csv(trace, !no_timing))) {
        std::cerr << "io error: cannot write '" << trace_path.string() << "'\n";
        return exit_io;
      }
      rows.push_back(summarize(trace));
    }
  } catch (const IdxError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return exit_io;
  }

  const std::string text = summary_text(rows);
  if (!write_file(fs::path(out_dir) / "summary.csv", summary_csv(rows)) ||
      !write_file(fs::path(out_dir) / "summary.txt", text)) {
    std::cerr << "io error: cannot write summary files\n";
    return exit_io;
  }
  std::cout << text;
  return exit_ok;  // divergence is a result, not a tool failure
}

int cmd_gradcheck(const std::string& problem_name, int trials) {
  Problem problem;
  try {
    ProblemSpec spec;
    spec.name = problem_name;
    problem = make_problem(spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }

  Rng rng(20240229);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Batch batch;
    if (problem.batch_independent || problem.data.count <= 32) {
      batch = full_batch(problem.data);
    } else {
      BatchSampler sampler(problem.data.count, 32);
      batch = sampler.next(rng);
    }
    const Vec theta = draw_check_point(problem, batch, rng, 0.1, 0.5);
    worst = std::max(worst, grad_check(problem, theta, batch));
  }
  std::cout << "max relative error over " << trials << " trials: "
            << format_double(worst) << "\n";
  return worst < 1e-5 ? exit_ok : exit_config;
}

int cmd_list() {
  std::cout << "algorithms:\n";
  for (Algo a : all_algos()) {
    const HyperParams h = default_hyperparams(a);
    std::string line = "  " + std::string(algo_name(a));
    line.resize(std::max<std::size_t>(line.size(), 12), ' ');
    switch (a) {
      case Algo::sgd:
        line += " epsilon=" + format_double(h.epsilon);
        break;
      case Algo::momentum:
      case Algo::nesterov:
        line += " epsilon=" + format_double(h.epsilon) +
                " alpha=" + format_double(h.alpha);
        break;
      case Algo::adagrad:
        line += " epsilon=" + format_double(h.epsilon) +
                " delta=" + format_double(h.delta);
        break;
      case Algo::adadelta:
        line += " rho=" + format_double(h.rho) + " delta=" + format_double(h.delta);
        break;
      case Algo::rmsprop:
        line += " epsilon=" + format_double(h.epsilon) +
                " rho=" + format_double(h.rho) + " delta=" + format_double(h.delta);
        break;
      case Algo::adamax:
        line += " epsilon=" + format_double(h.epsilon) +
                " rho1=" + format_double(h.rho1) + " rho2=" + format_double(h.rho2);
        break;
      case Algo::adam:
      case Algo::nadam:
      case Algo::amsgrad:
        line += " epsilon=" + format_double(h.epsilon) +
                " rho1=" + format_double(h.rho1) + " rho2=" + format_double(h.rho2) +
                " delta=" + format_double(h.delta);
        break;
    }
    std::cout << line << "\n";
  }
  std::cout << "problems:\n"
            << "  quadratic   dim=10 condition_number=100\n"
            << "  rosenbrock  dim=2\n"
            << "  logreg      n_examples=2000 n_features=20\n"
            << "  mlp         hidden_units=16\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ten first-order optimizers benchmarked on small differentiable problems"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  bool no_timing = false;
  CLI::App* run_cmd = app.add_subcommand("run", "execute the runs in a config file");
  run_cmd->add_option("config", config_path, "path to the config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory for CSV files");
  run_cmd->add_flag("--no-timing", no_timing, "omit the wall_s column");

  std::string problem_name;
  int trials = 100;
  CLI::App* check_cmd =
      app.add_subcommand("gradcheck", "finite-difference check of a problem's gradient");
  check_cmd->add_option("problem", problem_name, "problem name")->required();
  check_cmd->add_option("--trials", trials, "number of random points");

  CLI::App* list_cmd =
      app.add_subcommand("list", "print algorithms and problems with defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  if (run_cmd->parsed()) return cmd_run(config_path, out_dir, no_timing);
  if (check_cmd->parsed()) return cmd_gradcheck(problem_name, trials);
  if (list_cmd->parsed()) return cmd_list();
  return exit_config;
}
