#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <stdexcept>

#include "gradkit/kernels.hpp"
#include "gradkit/parallel.hpp"
#include "gradkit/rng.hpp"
#include "gradkit/vec.hpp"

using namespace gradkit;

namespace {

Vec random_vec(Rng& rng, std::size_t n, double lo = -10.0, double hi = 10.0) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("hadamard examples") {
  CHECK(hadamard({1, 2, 3}, {1, 2, 3}) == Vec{1, 4, 9});
  CHECK(hadamard({5, -7, 0.25}, {0, 0, 0}) == Vec{0, 0, 0});
  CHECK(hadamard({0.5, -2}, {4, 0.25}) == Vec{2, -0.5});
  CHECK_THROWS_AS(hadamard({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("hadamard is commutative, associative, and dim-preserving") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.below(40));
    const Vec a = random_vec(rng, n), b = random_vec(rng, n);
    CHECK(hadamard(a, b) == hadamard(b, a));  // exact in ieee arithmetic
    CHECK(hadamard(a, b).size() == n);

    // associativity is checked on integer lattices, where triple products
    // are exactly representable and no reassociation rounding occurs
    Vec ia(n), ib(n), ic(n);
    for (std::size_t i = 0; i < n; ++i) {
      ia[i] = static_cast<double>(rng.below(2000)) - 1000.0;
      ib[i] = static_cast<double>(rng.below(2000)) - 1000.0;
      ic[i] = static_cast<double>(rng.below(2000)) - 1000.0;
    }
    CHECK(hadamard(hadamard(ia, ib), ic) == hadamard(ia, hadamard(ib, ic)));
  }
}

TEST_CASE("elementwise_max examples and dominance") {
  CHECK(elementwise_max({0.5}, {0.3}) == Vec{0.5});
  CHECK(elementwise_max({1, -3, 2}, {0, 5, 2}) == Vec{1, 5, 2});
  CHECK_THROWS_AS(elementwise_max({1}, {1, 2}), std::invalid_argument);

  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.below(40));
    const Vec a = random_vec(rng, n), b = random_vec(rng, n);
    CHECK(elementwise_max(a, a) == a);
    const Vec m = elementwise_max(a, b);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(m[i] >= a[i]);
      CHECK(m[i] >= b[i]);
    }
  }
}

TEST_CASE("l2_norm examples") {
  CHECK(l2_norm(Vec{0, 0, 0}) == 0.0);
  CHECK(l2_norm(Vec{3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(l2_norm(Vec{1, 1, 1, 1}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l2_norm(Vec{}) == 0.0);

  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec a = random_vec(rng, 1 + static_cast<std::size_t>(rng.below(100)));
    bool all_zero = true;
    for (double v : a) all_zero = all_zero && v == 0.0;
    CHECK((l2_norm(a) == 0.0) == all_zero);
  }
}

TEST_CASE("first_nonfinite finds the offender") {
  CHECK(first_nonfinite(Vec{1, 2, 3}) == -1);
  CHECK(first_nonfinite(Vec{1, std::nan(""), 3}) == 1);
  CHECK(first_nonfinite(Vec{1, 2, INFINITY}) == 2);
}

TEST_CASE("det_sum does not depend on the thread count") {
  Rng rng(14);
  const Vec big = random_vec(rng, 100000);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double s1 = det_sum(big);
  const double q1 = det_sumsq(big);
  omp_set_num_threads(2);
  const double s2 = det_sum(big);
  const double q2 = det_sumsq(big);
  omp_set_num_threads(saved);
  CHECK(s1 == s2);
  CHECK(q1 == q2);

  // agree with a plain accumulation to rounding error
  double plain = 0.0;
  for (double v : big) plain += v;
  CHECK(s1 == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("openmp kernels are bitwise identical to the serial reference") {
  Rng rng(15);
  namespace ks = kernels::serial;
  namespace kp = kernels::openmp;

  // cover both the below-grain and above-grain paths
  for (const std::size_t n : {7ul, 1000ul, 20000ul}) {
    const Vec theta0 = random_vec(rng, n, -1.0, 1.0);

    auto roundtrip = [&](auto serial_fn, auto openmp_fn, int state_arrays) {
      Vec ts = theta0, tp = theta0;
      Vec s1(n, 0.0), s2(n, 0.0), s3(n, 0.0);
      Vec p1(n, 0.0), p2(n, 0.0), p3(n, 0.0);
      Vec ds(n, 0.0), dp(n, 0.0);
      for (int stepno = 1; stepno <= 5; ++stepno) {
        const Vec g = random_vec(rng, n, -5.0, 5.0);
        serial_fn(ts, g, s1, s2, s3, ds, stepno);
        openmp_fn(tp, g, p1, p2, p3, dp, stepno);
      }
      CHECK(ts == tp);
      CHECK(ds == dp);
      if (state_arrays > 0) CHECK(s1 == p1);
      if (state_arrays > 1) CHECK(s2 == p2);
      if (state_arrays > 2) CHECK(s3 == p3);
    };

    roundtrip(
        [](Vec& th, const Vec& g, Vec&, Vec&, Vec&, Vec& d, int) {
          ks::sgd(th, g, 0.01, d);
        },
        [](Vec& th, const Vec& g, Vec&, Vec&, Vec&, Vec& d, int) {
          kp::sgd(th, g, 0.01, d);
        },
        0);
    roundtrip(
        [](Vec& th, const Vec& g, Vec& v, Vec&, Vec&, Vec& d, int) {
          ks::momentum(th, g, 0.01, 0.9, v, d);
        },
        [](Vec& th, const Vec& g, Vec& v, Vec&, Vec&, Vec& d, int) {
          kp::momentum(th, g, 0.01, 0.9, v, d);
        },
        1);
    roundtrip(
        [](Vec& th, const Vec& g, Vec& r, Vec&, Vec&, Vec& d, int) {
          ks::adagrad(th, g, 0.001, 1e-8, r, d);
        },
        [](Vec& th, const Vec& g, Vec& r, Vec&, Vec&, Vec& d, int) {
          kp::adagrad(th, g, 0.001, 1e-8, r, d);
        },
        1);
    roundtrip(
        [](Vec& th, const Vec& g, Vec& a, Vec& b, Vec&, Vec& d, int) {
          ks::adadelta(th, g, 0.95, 1e-6, a, b, d);
        },
        [](Vec& th, const Vec& g, Vec& a, Vec& b, Vec&, Vec& d, int) {
          kp::adadelta(th, g, 0.95, 1e-6, a, b, d);
        },
        2);
    roundtrip(
        [](Vec& th, const Vec& g, Vec& r, Vec&, Vec&, Vec& d, int) {
          ks::rmsprop(th, g, 0.001, 0.9, 1e-8, r, d);
        },
        [](Vec& th, const Vec& g, Vec& r, Vec&, Vec&, Vec& d, int) {
          kp::rmsprop(th, g, 0.001, 0.9, 1e-8, r, d);
        },
        1);
    roundtrip(
        [](Vec& th, const Vec& g, Vec& m, Vec& u, Vec&, Vec& d, int t) {
          ks::adam(th, g, 0.001, 0.9, 0.999, 1e-8, t, m, u, d);
        },
        [](Vec& th, const Vec& g, Vec& m, Vec& u, Vec&, Vec& d, int t) {
          kp::adam(th, g, 0.001, 0.9, 0.999, 1e-8, t, m, u, d);
        },
        2);
    roundtrip(
        [](Vec& th, const Vec& g, Vec& m, Vec& ga, Vec&, Vec& d, int t) {
          ks::adamax(th, g, 0.001, 0.9, 0.999, t, m, ga, d);
        },
        [](Vec& th, const Vec& g, Vec& m, Vec& ga, Vec&, Vec& d, int t) {
          kp::adamax(th, g, 0.001, 0.9, 0.999, t, m, ga, d);
        },
        2);
    roundtrip(
        [](Vec& th, const Vec& g, Vec& m, Vec& u, Vec&, Vec& d, int t) {
          ks::nadam(th, g, 0.001, 0.9, 0.999, 1e-6, t, m, u, d);
        },
        [](Vec& th, const Vec& g, Vec& m, Vec& u, Vec&, Vec& d, int t) {
          kp::nadam(th, g, 0.001, 0.9, 0.999, 1e-6, t, m, u, d);
        },
        2);
    roundtrip(
        [](Vec& th, const Vec& g, Vec& m, Vec& u, Vec& x, Vec& d, int) {
          ks::amsgrad(th, g, 0.001, 0.9, 0.999, 1e-8, m, u, x, d);
        },
        [](Vec& th, const Vec& g, Vec& m, Vec& u, Vec& x, Vec& d, int) {
          kp::amsgrad(th, g, 0.001, 0.9, 0.999, 1e-8, m, u, x, d);
        },
        3);
  }
}
