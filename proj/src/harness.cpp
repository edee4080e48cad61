#include "gradkit/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "gradkit/idx.hpp"

namespace gradkit {

Problem make_problem(const ProblemSpec& spec) {
  if (spec.name == "quadratic") {
    return builtin_quadratic(spec.dim, spec.condition_number);
  }
  if (spec.name == "rosenbrock") {
    return builtin_rosenbrock();
  }
  if (spec.name == "logreg") {
    return builtin_logreg(spec.n_examples, spec.n_features, spec.seed);
  }
  if (spec.name == "mlp") {
    if (!spec.images.empty()) {
      Dataset d = with_labels(load_idx(spec.images), load_idx(spec.labels));
      std::int64_t classes = 0;
      for (double t : d.targets) classes = std::max(classes, static_cast<std::int64_t>(t) + 1);
      return mlp_on_dataset(spec.hidden_units, std::move(d), classes);
    }
    return builtin_mlp(spec.hidden_units, spec.seed);
  }
  throw std::invalid_argument("unknown problem '" + spec.name + "'");
}

double lr_schedule(const RunConfig& cfg, std::int64_t k, std::int64_t epoch) {
  const double eps = cfg.hp.epsilon;
  switch (cfg.schedule.kind) {
    case Schedule::Kind::constant:
      return eps;
    case Schedule::Kind::inverse_t:
      return eps / (1.0 + static_cast<double>(k) * cfg.schedule.decay);
    case Schedule::Kind::step:
      return eps * std::pow(cfg.schedule.factor,
                            static_cast<double>(epoch / cfg.schedule.every));
  }
  return eps;
}

Vec init_theta(const Problem& p, std::uint64_t seed) {
  Vec theta(static_cast<std::size_t>(p.dim), 0.0);
  if (p.zero_init) return theta;
  Rng rng(seed);
  for (double& v : theta) v = rng.uniform(-0.05, 0.05);
  return theta;
}

namespace {

void validate(const RunConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(cfg.schedule.decay > 0.0) && cfg.schedule.kind == Schedule::Kind::inverse_t) {
    throw std::invalid_argument("schedule decay must be > 0");
  }
  if (cfg.schedule.kind == Schedule::Kind::step) {
    if (!(cfg.schedule.factor > 0.0)) throw std::invalid_argument("schedule factor must be > 0");
    if (cfg.schedule.every < 1) throw std::invalid_argument("schedule every must be >= 1");
  }
  gradkit::validate(cfg.hp);
}

Batch remap(const Batch& local, const std::vector<std::int64_t>& subset) {
  Batch out;
  out.indices.reserve(local.indices.size());
  for (std::int64_t i : local.indices) {
    out.indices.push_back(subset[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

Trace run(const RunConfig& cfg) { return run(cfg, make_problem(cfg.problem)); }

Trace run(const RunConfig& cfg, const Problem& problem) {
  validate(cfg);

  Trace trace;
  trace.algorithm = std::string(algo_name(cfg.algo));

  // Draw order is fixed (theta0, split shuffle, then epoch shuffles) so runs
  // that share a seed and a problem also share their start and batches.
  Rng rng(cfg.seed);
  Vec theta = init_theta(problem, cfg.seed);

  std::vector<std::int64_t> train_idx, test_idx;
  if (problem.has_test_split) {
    std::vector<std::int64_t> order(static_cast<std::size_t>(problem.data.count));
    std::iota(order.begin(), order.end(), std::int64_t{0});
    rng.shuffle(order);
    const std::int64_t n_train = problem.data.count * 3 / 4;
    train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  } else {
    train_idx.resize(static_cast<std::size_t>(problem.data.count));
    std::iota(train_idx.begin(), train_idx.end(), std::int64_t{0});
  }

  const std::int64_t train_count = static_cast<std::int64_t>(train_idx.size());
  const std::int64_t batch_size =
      problem.batch_independent ? std::min(cfg.batch_size, train_count) : cfg.batch_size;
  BatchSampler sampler(train_count, batch_size);

  Optimizer opt(cfg.algo, problem.dim, cfg.hp);
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  Vec used_grad;
  std::int64_t k = 0;
  for (std::int64_t epoch = 0; epoch < cfg.epochs && !trace.diverged; ++epoch) {
    for (std::int64_t b = 0; b < sampler.batches_per_epoch(); ++b) {
      const Batch batch = remap(sampler.next(rng), train_idx);
      const double loss = problem.loss(theta, batch);
      if (!std::isfinite(loss)) {
        trace.diverged = true;
        break;
      }

      const double eps_k = lr_schedule(cfg, k, epoch);
      StepReport report;
      try {
        if (cfg.algo == Algo::nesterov) {
          report = opt.step_nesterov(
              theta, [&](const Vec& at) { return problem.grad(at, batch); }, eps_k,
              &used_grad);
        } else {
          used_grad = problem.grad(theta, batch);
          report = opt.step(theta, used_grad, eps_k);
        }
      } catch (const std::domain_error&) {
        trace.diverged = true;  // non-finite gradient or lookahead point
        break;
      }
      ++k;

      if (!std::isfinite(report.update_norm) || first_nonfinite(theta) >= 0) {
        trace.diverged = true;
        break;
      }

      const bool last_in_epoch = b + 1 == sampler.batches_per_epoch();
      if (cfg.granularity == Granularity::per_step ||
          (cfg.granularity == Granularity::per_epoch && last_in_epoch)) {
        TraceRecord rec;
        rec.step = k;
        rec.epoch = epoch;
        rec.loss = loss;
        rec.grad_norm = l2_norm(used_grad);
        rec.update_norm = report.update_norm;
        rec.wall_s = elapsed();
        trace.records.push_back(rec);
      }
    }
  }
  trace.total_steps = k;

  if (!trace.diverged) {
    Batch train_all;
    train_all.indices = train_idx;
    trace.final_loss = problem.loss(theta, train_all);
    trace.final_grad_norm = l2_norm(problem.grad(theta, train_all));
    if (problem.has_test_split && !test_idx.empty()) {
      Batch test_all;
      test_all.indices = test_idx;
      trace.test_loss = problem.loss(theta, test_all);
    }
  }

  if (std::isfinite(cfg.loss_threshold)) {
    for (const TraceRecord& rec : trace.records) {
      if (rec.loss < cfg.loss_threshold) {
        trace.steps_to_threshold = rec.step - 1;
        break;
      }
    }
    if (trace.steps_to_threshold < 0 && std::isfinite(trace.final_loss) &&
        trace.final_loss < cfg.loss_threshold) {
      trace.steps_to_threshold = trace.total_steps;
    }
  }

  trace.wall_total_s = elapsed();
  return trace;
}

SummaryRow summarize(const Trace& t) {
  SummaryRow row;
  row.algorithm = t.algorithm;
  row.final_loss = t.final_loss;
  row.test_loss = t.test_loss;
  row.steps_to_threshold = t.steps_to_threshold;
  row.wall_s = t.wall_total_s;
  row.diverged = t.diverged;
  return row;
}

std::vector<SummaryRow> compare(const std::vector<RunConfig>& configs, int jobs) {
  std::vector<SummaryRow> rows(configs.size());
  auto run_one = [&](std::size_t i) {
    try {
      rows[i] = summarize(run(configs[i]));
    } catch (const std::exception& e) {
      rows[i].algorithm = std::string(algo_name(configs[i].algo));
      rows[i].error = e.what();
    }
  };

  if (jobs <= 1 || configs.size() <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) run_one(i);
    return rows;
  }

  std::atomic<std::size_t> cursor{0};
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), configs.size());
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t w = 0; w < n_threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = cursor.fetch_add(1); i < configs.size();
           i = cursor.fetch_add(1)) {
        run_one(i);
      }
    });
  }
  for (std::thread& th : pool) th.join();
  return rows;
}

}  // namespace gradkit
