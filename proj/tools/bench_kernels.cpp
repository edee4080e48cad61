// Serial reference vs OpenMP kernels on large vectors. The rules are
// elementwise and memory-bound, so the interesting number is the scaling of
// the parallel variant; correctness (bitwise equality) is covered by tests.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "gradkit/kernels.hpp"
#include "gradkit/parallel.hpp"
#include "gradkit/vec.hpp"

namespace {

using gradkit::Vec;
namespace ks = gradkit::kernels::serial;
namespace kp = gradkit::kernels::openmp;

struct Arrays {
  Vec theta, g, a, b, c, dtheta;
  explicit Arrays(std::int64_t n)
      : theta(n, 0.1), g(n, 0.02), a(n, 0.0), b(n, 0.0), c(n, 0.0), dtheta(n, 0.0) {}
};

template <class Step>
void drive(benchmark::State& state, Step step) {
  Arrays v(state.range(0));
  std::int64_t t = 0;
  for (auto _ : state) {
    ++t;
    step(v, t);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_sgd_serial(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) { ks::sgd(v.theta, v.g, 1e-3, v.dtheta); });
}
void BM_sgd_openmp(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) { kp::sgd(v.theta, v.g, 1e-3, v.dtheta); });
}

void BM_momentum_serial(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) {
    ks::momentum(v.theta, v.g, 1e-3, 0.9, v.a, v.dtheta);
  });
}
void BM_momentum_openmp(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) {
    kp::momentum(v.theta, v.g, 1e-3, 0.9, v.a, v.dtheta);
  });
}

void BM_adagrad_serial(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) {
    ks::adagrad(v.theta, v.g, 1e-3, 1e-8, v.a, v.dtheta);
  });
}
void BM_adagrad_openmp(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) {
    kp::adagrad(v.theta, v.g, 1e-3, 1e-8, v.a, v.dtheta);
  });
}

void BM_adadelta_serial(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) {
    ks::adadelta(v.theta, v.g, 0.95, 1e-6, v.a, v.b, v.dtheta);
  });
}
void BM_adadelta_openmp(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) {
    kp::adadelta(v.theta, v.g, 0.95, 1e-6, v.a, v.b, v.dtheta);
  });
}

void BM_rmsprop_serial(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) {
    ks::rmsprop(v.theta, v.g, 1e-3, 0.9, 1e-8, v.a, v.dtheta);
  });
}
void BM_rmsprop_openmp(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) {
    kp::rmsprop(v.theta, v.g, 1e-3, 0.9, 1e-8, v.a, v.dtheta);
  });
}

void BM_adam_serial(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t t) {
    ks::adam(v.theta, v.g, 1e-3, 0.9, 0.999, 1e-8, t, v.a, v.b, v.dtheta);
  });
}
void BM_adam_openmp(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t t) {
    kp::adam(v.theta, v.g, 1e-3, 0.9, 0.999, 1e-8, t, v.a, v.b, v.dtheta);
  });
}

void BM_adamax_serial(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t t) {
    ks::adamax(v.theta, v.g, 1e-3, 0.9, 0.999, t, v.a, v.b, v.dtheta);
  });
}
void BM_adamax_openmp(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t t) {
    kp::adamax(v.theta, v.g, 1e-3, 0.9, 0.999, t, v.a, v.b, v.dtheta);
  });
}

void BM_nadam_serial(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t t) {
    ks::nadam(v.theta, v.g, 1e-3, 0.9, 0.999, 1e-6, t, v.a, v.b, v.dtheta);
  });
}
void BM_nadam_openmp(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t t) {
    kp::nadam(v.theta, v.g, 1e-3, 0.9, 0.999, 1e-6, t, v.a, v.b, v.dtheta);
  });
}

void BM_amsgrad_serial(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) {
    ks::amsgrad(v.theta, v.g, 1e-3, 0.9, 0.999, 1e-8, v.a, v.b, v.c, v.dtheta);
  });
}
void BM_amsgrad_openmp(benchmark::State& s) {
  drive(s, [](Arrays& v, std::int64_t) {
    kp::amsgrad(v.theta, v.g, 1e-3, 0.9, 0.999, 1e-8, v.a, v.b, v.c, v.dtheta);
  });
}

void BM_l2_norm(benchmark::State& s) {
  Vec x(s.range(0), 0.5);
  for (auto _ : s) {
    benchmark::DoNotOptimize(gradkit::l2_norm(x));
  }
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

constexpr std::int64_t small = 1 << 14;
constexpr std::int64_t large = 1 << 22;

}  // namespace

BENCHMARK(BM_sgd_serial)->Arg(small)->Arg(large);
BENCHMARK(BM_sgd_openmp)->Arg(small)->Arg(large);
BENCHMARK(BM_momentum_serial)->Arg(small)->Arg(large);
BENCHMARK(BM_momentum_openmp)->Arg(small)->Arg(large);
BENCHMARK(BM_adagrad_serial)->Arg(small)->Arg(large);
BENCHMARK(BM_adagrad_openmp)->Arg(small)->Arg(large);
BENCHMARK(BM_adadelta_serial)->Arg(small)->Arg(large);
BENCHMARK(BM_adadelta_openmp)->Arg(small)->Arg(large);
BENCHMARK(BM_rmsprop_serial)->Arg(small)->Arg(large);
BENCHMARK(BM_rmsprop_openmp)->Arg(small)->Arg(large);
BENCHMARK(BM_adam_serial)->Arg(small)->Arg(large);
BENCHMARK(BM_adam_openmp)->Arg(small)->Arg(large);
BENCHMARK(BM_adamax_serial)->Arg(small)->Arg(large);
BENCHMARK(BM_adamax_openmp)->Arg(small)->Arg(large);
BENCHMARK(BM_nadam_serial)->Arg(small)->Arg(large);
BENCHMARK(BM_nadam_openmp)->Arg(small)->Arg(large);
BENCHMARK(BM_amsgrad_serial)->Arg(small)->Arg(large);
BENCHMARK(BM_amsgrad_openmp)->Arg(small)->Arg(large);
BENCHMARK(BM_l2_norm)->Arg(small)->Arg(large);

BENCHMARK_MAIN();
