#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "gradkit/idx.hpp"
#include "gradkit/problems.hpp"
#include "gradkit/rng.hpp"

using namespace gradkit;

namespace {

Vec random_theta(Rng& rng, std::size_t n, double lo, double hi) {
  Vec v(n);
  for (double& x : v) {
    const double mag = rng.uniform(lo, hi);
    x = rng.uniform() < 0.5 ? -mag : mag;
  }
  return v;
}

}  // namespace

TEST_CASE("quadratic: spectrum, gradient, minimum") {
  const Problem p1 = builtin_quadratic(1, 1.0);
  const Batch b = full_batch(p1.data);
  CHECK(p1.loss(Vec{3.0}, b) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(p1.grad(Vec{3.0}, b)[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(p1.grad(Vec{0.0}, b)[0] == 0.0);

  const Problem p2 = builtin_quadratic(2, 100.0);
  const Vec g = p2.grad(Vec{1.0, 1.0}, b);
  CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(100.0).epsilon(1e-12));

  CHECK_THROWS_AS(builtin_quadratic(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(builtin_quadratic(3, 0.5), std::invalid_argument);
}

TEST_CASE("rosenbrock: minimum and origin values") {
  const Problem p = builtin_rosenbrock();
  const Batch b = full_batch(p.data);
  CHECK(p.loss(Vec{1.0, 1.0}, b) == 0.0);
  CHECK(p.grad(Vec{1.0, 1.0}, b) == Vec{0.0, 0.0});
  CHECK(p.loss(Vec{0.0, 0.0}, b) == 1.0);
  CHECK(p.grad(Vec{0.0, 0.0}, b) == Vec{-2.0, 0.0});
}

TEST_CASE("logreg: zero-parameter loss and gradient") {
  const Problem p = builtin_logreg(200, 6, 77);
  CHECK(p.dim == 6);
  CHECK(p.zero_init);
  const Batch b = full_batch(p.data);
  const Vec zero(6, 0.0);
  CHECK(p.loss(zero, b) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // gradient at zero is the mean of (0.5 - y) x
  const Vec g = p.grad(zero, b);
  Vec expect(6, 0.0);
  for (std::int64_t i = 0; i < p.data.count; ++i) {
    const double c = 0.5 - p.data.targets[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < 6; ++j) {
      expect[j] += c * p.data.inputs[static_cast<std::size_t>(i)][j];
    }
  }
  for (std::size_t j = 0; j < 6; ++j) {
    CHECK(g[j] == doctest::Approx(expect[j] / 200.0).epsilon(1e-12));
  }

  // loss is non-negative everywhere we care about
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    CHECK(p.loss(random_theta(rng, 6, 0.0, 2.0), b) >= 0.0);
  }

  CHECK_THROWS_AS(builtin_logreg(1, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(builtin_logreg(100, 0, 0), std::invalid_argument);

  // same seed, same data
  const Problem q = builtin_logreg(200, 6, 77);
  CHECK(q.data.inputs == p.data.inputs);
}

TEST_CASE("mlp: uniform softmax at zero weights and duplication invariance") {
  const Problem p = builtin_mlp(8, 5);
  const Batch b = full_batch(p.data);
  const Vec zero(static_cast<std::size_t>(p.dim), 0.0);
  CHECK(p.loss(zero, b) == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  // duplicating every example leaves the mean loss unchanged
  Rng rng(2);
  Vec theta = random_theta(rng, static_cast<std::size_t>(p.dim), 0.05, 0.5);
  Batch doubled = b;
  doubled.indices.insert(doubled.indices.end(), b.indices.begin(), b.indices.end());
  CHECK(p.loss(theta, doubled) == doctest::Approx(p.loss(theta, b)).epsilon(1e-12));

  CHECK_THROWS_AS(builtin_mlp(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(mlp_on_dataset(4, Dataset{}, 3), std::invalid_argument);
}

TEST_CASE("grad_check validates every builtin problem") {
  Rng rng(3);

  const Problem quad = builtin_quadratic(3, 50.0);
  const Batch qb = full_batch(quad.data);
  for (int i = 0; i < 100; ++i) {
    CHECK(grad_check(quad, random_theta(rng, 3, 0.1, 1.0), qb) < 1e-8);
  }

  const Problem rosen = builtin_rosenbrock();
  const Batch rb = full_batch(rosen.data);
  CHECK(grad_check(rosen, Vec{0.5, 0.5}, rb) < 1e-6);
  for (int i = 0; i < 100; ++i) {
    CHECK(grad_check(rosen, random_theta(rng, 2, 0.1, 1.0), rb) < 1e-5);
  }

  const Problem lr = builtin_logreg(300, 8, 11);
  const Batch lb = full_batch(lr.data);
  for (int i = 0; i < 100; ++i) {
    CHECK(grad_check(lr, random_theta(rng, 8, 0.1, 1.0), lb) < 1e-6);
  }

  // ReLU network: points drawn away from kinks and degenerate coordinates
  const Problem mlp = builtin_mlp(6, 21);
  BatchSampler msampler(mlp.data.count, 32);
  for (int checked = 0; checked < 100; ++checked) {
    const Batch mb = msampler.next(rng);
    const Vec theta = draw_check_point(mlp, mb, rng, 0.1, 0.6);
    CHECK(grad_check(mlp, theta, mb) < 1e-5);
  }

  // central differences are exact on linear objectives; dyadic coefficients
  // and steps keep the arithmetic itself exact, so tiny h stays clean too
  Problem linear;
  linear.name = "linear";
  linear.dim = 3;
  linear.data.count = 1;
  linear.batch_independent = true;
  const Vec coef{0.25, -1.5, 2.0};
  linear.loss = [coef](const Vec& th, const Batch&) {
    double s = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) s += coef[i] * th[i];
    return s;
  };
  linear.grad = [coef](const Vec&, const Batch&) { return coef; };
  const Batch onep = full_batch(linear.data);
  for (double h : {0x1.0p-10, 0x1.0p-14, 0x1.0p-20}) {
    CHECK(grad_check(linear, Vec{0.5, 0.25, -0.75}, onep, h) < 1e-10);
  }
  for (double h : {1e-3, 1e-4}) {
    CHECK(grad_check(linear, Vec{0.4, 0.5, -0.6}, onep, h) < 1e-10);
  }

  CHECK_THROWS_AS(grad_check(linear, Vec{0, 0, 0}, onep, 0.0), std::invalid_argument);
}

TEST_CASE("batch sampler: epoch partition and determinism") {
  Rng rng(4);
  BatchSampler s(10, 3);
  CHECK(s.batches_per_epoch() == 3);
  std::set<std::int64_t> seen;
  for (int b = 0; b < 3; ++b) {
    const Batch batch = s.next(rng);
    CHECK(batch.size() == 3);
    for (std::int64_t i : batch.indices) {
      CHECK(i >= 0);
      CHECK(i < 10);
      CHECK(seen.insert(i).second);  // no duplicates within an epoch
    }
  }
  CHECK(seen.size() == 9);  // floor(10/3) * 3 retained, short tail dropped

  // full-dataset batch is a permutation
  Rng rng2(5);
  BatchSampler full(6, 6);
  const Batch perm = full.next(rng2);
  std::set<std::int64_t> uniq(perm.indices.begin(), perm.indices.end());
  CHECK(uniq.size() == 6);

  // fixed seed, identical batch sequence
  Rng ra(123), rb(123);
  BatchSampler sa(20, 4), sb(20, 4);
  for (int i = 0; i < 15; ++i) {
    CHECK(sa.next(ra).indices == sb.next(rb).indices);
  }

  CHECK_THROWS_AS(BatchSampler(10, 0), std::invalid_argument);
  CHECK_THROWS_AS(BatchSampler(10, 11), std::invalid_argument);
}

TEST_CASE("idx: hand-built fixtures round-trip byte-exactly") {
  // 2x2x2 image tensor: magic, dims, 8 payload bytes
  const std::vector<std::uint8_t> image_bytes = {
      0x00, 0x00, 0x08, 0x03, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00,
      0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0,    51,   102,  153,
      204,  255,  10,   20,
  };
  const Dataset img = parse_idx(image_bytes);
  CHECK(img.count == 2);
  CHECK(img.rows == 2);
  CHECK(img.cols == 2);
  CHECK(img.inputs.size() == 2);
  CHECK(img.inputs[0].size() == 4);
  CHECK(img.inputs[0][0] == 0.0);
  CHECK(img.inputs[0][1] == doctest::Approx(51.0 / 255.0).epsilon(1e-15));
  CHECK(img.inputs[1][1] == 1.0);
  CHECK(idx_bytes(img) == image_bytes);

  // 3-entry label vector
  const std::vector<std::uint8_t> label_bytes = {
      0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, 0x03, 7, 0, 2,
  };
  const Dataset lab = parse_idx(label_bytes);
  CHECK(lab.count == 3);
  CHECK(lab.targets == Vec{7.0, 0.0, 2.0});
  CHECK(lab.inputs.empty());
  CHECK(idx_bytes(lab) == label_bytes);

  // file round-trip through disk
  namespace fs = std::filesystem;
  const fs::path dir = fs::path("idx_test_tmp");
  fs::create_directories(dir);
  save_idx(img, (dir / "img.idx").string());
  const Dataset reloaded = load_idx((dir / "img.idx").string());
  CHECK(idx_bytes(reloaded) == image_bytes);
  fs::remove_all(dir);

  const Dataset both = with_labels(img, parse_idx(
      std::vector<std::uint8_t>{0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, 0x02, 1, 0}));
  CHECK(both.targets == Vec{1.0, 0.0});
  CHECK_THROWS_AS(with_labels(img, lab), std::invalid_argument);
}

TEST_CASE("idx: the three malformation classes are distinct") {
  // too short for the magic
  try {
    parse_idx({0x00, 0x00, 0x08});
    FAIL("expected IdxError");
  } catch (const IdxError& e) {
    CHECK(e.kind == IdxError::Kind::truncated);
  }

  // unsupported magic
  try {
    parse_idx({0x00, 0x00, 0x08, 0x05, 0x00, 0x00, 0x00, 0x01});
    FAIL("expected IdxError");
  } catch (const IdxError& e) {
    CHECK(e.kind == IdxError::Kind::bad_magic);
  }

  // payload shorter than the declared dimensions
  try {
    parse_idx({0x00, 0x00, 0x08, 0x03, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00,
               0x02, 0x00, 0x00, 0x00, 0x02, 1, 2, 3});
    FAIL("expected IdxError");
  } catch (const IdxError& e) {
    CHECK(e.kind == IdxError::Kind::truncated);
  }

  // dimension product overflows the supported range
  try {
    parse_idx({0x00, 0x00, 0x08, 0x03, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF,
               0xFF, 0xFF, 0xFF, 0xFF, 0xFF});
    FAIL("expected IdxError");
  } catch (const IdxError& e) {
    CHECK(e.kind == IdxError::Kind::dim_overflow);
  }

  CHECK_THROWS(load_idx("definitely_missing_file.idx"));
}
