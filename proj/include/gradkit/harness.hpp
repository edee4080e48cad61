#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gradkit/optimizers.hpp"
#include "gradkit/problems.hpp"

namespace gradkit {

struct Schedule {
  enum class Kind { constant, inverse_t, step };
  Kind kind = Kind::constant;
  double decay = 0.01;  // inverse-t: eps / (1 + k * decay)
  double factor = 0.5;  // step: eps * factor^floor(epoch / every)
  std::int64_t every = 10;
};

struct ProblemSpec {
  std::string name = "quadratic";
  std::ptrdiff_t dim = 10;
  double condition_number = 100.0;
  std::int64_t n_examples = 2000;
  std::int64_t n_features = 20;
  std::int64_t hidden_units = 16;
  std::uint64_t seed = 1234;  // data-generation seed
  std::string images, labels;  // optional IDX pair backing the mlp
};

Problem make_problem(const ProblemSpec& spec);

enum class Granularity { per_step, per_epoch };

struct RunConfig {
  Algo algo = Algo::sgd;
  HyperParams hp;  // fill from default_hyperparams(algo)
  Schedule schedule;
  std::int64_t epochs = 50;
  std::int64_t batch_size = 128;
  std::uint64_t seed = 42;
  ProblemSpec problem;
  Granularity granularity = Granularity::per_step;
  // steps-to-threshold target; NaN disables the metric
  double loss_threshold = std::numeric_limits<double>::quiet_NaN();
};

struct TraceRecord {
  std::int64_t step = 0;   // 1-based update index
  std::int64_t epoch = 0;  // 0-based
  double loss = 0.0;       // batch loss at the pre-update parameters
  double grad_norm = 0.0;  // norm of the gradient the update consumed
  double update_norm = 0.0;
  double wall_s = 0.0;  // cumulative, monotonic clock
};

struct Trace {
  std::string algorithm;
  std::vector<TraceRecord> records;
  bool diverged = false;
  std::int64_t total_steps = 0;
  // evaluated on the full training split after the last update (NaN if diverged)
  double final_loss = std::numeric_limits<double>::quiet_NaN();
  double final_grad_norm = std::numeric_limits<double>::quiet_NaN();
  // held-out loss when the problem has a test split, else NaN
  double test_loss = std::numeric_limits<double>::quiet_NaN();
  // updates needed before the recorded loss dropped below the threshold; -1
  // when no threshold was set or it was never reached
  std::int64_t steps_to_threshold = -1;
  double wall_total_s = 0.0;
};

// eps_k for update index k (0-based) in the given epoch.
double lr_schedule(const RunConfig& cfg, std::int64_t k, std::int64_t epoch);

// Start point shared across algorithms: uniform in [-0.05, 0.05] per
// coordinate from the seed, or zeros when the problem asks for them.
Vec init_theta(const Problem& p, std::uint64_t seed);

Trace run(const RunConfig& cfg);
Trace run(const RunConfig& cfg, const Problem& problem);

struct SummaryRow {
  std::string algorithm;
  double final_loss = std::numeric_limits<double>::quiet_NaN();
  double test_loss = std::numeric_limits<double>::quiet_NaN();
  std::int64_t steps_to_threshold = -1;
  double wall_s = 0.0;
  bool diverged = false;
  std::string error;  // nonempty when the run failed outright
};

// One row per config, in input order. A failed run fills its row's error and
// leaves the others untouched. jobs > 1 runs configs on that many threads;
// each run owns its state and RNG, so results do not depend on jobs.
std::vector<SummaryRow> compare(const std::vector<RunConfig>& configs, int jobs = 1);

SummaryRow summarize(const Trace& t);

}  // namespace gradkit
