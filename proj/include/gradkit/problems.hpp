#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gradkit/rng.hpp"
#include "gradkit/vec.hpp"

namespace gradkit {

struct Batch {
  std::vector<std::int64_t> indices;  // within dataset bounds, no duplicates
  std::int64_t size() const { return static_cast<std::int64_t>(indices.size()); }
};

struct Dataset {
  std::vector<Vec> inputs;
  Vec targets;  // class index or regression target per example
  std::int64_t count = 0;
  std::int64_t rows = 0, cols = 0;  // image geometry when loaded from IDX
};

// A differentiable objective over an example batch. Objects are read-only
// after construction and safe for concurrent evaluation.
struct Problem {
  std::string name;
  std::ptrdiff_t dim = 0;
  Dataset data;
  bool zero_init = false;         // training starts from zeros, not uniform draws
  bool batch_independent = false; // loss/grad ignore the batch (full gradient)
  bool has_test_split = false;    // a held-out split is meaningful
  std::function<double(const Vec&, const Batch&)> loss;
  std::function<Vec(const Vec&, const Batch&)> grad;
  // Smallest |pre-activation| over the batch; only set for ReLU problems,
  // where finite-difference checks need a margin from the kinks.
  std::function<double(const Vec&, const Batch&)> kink_margin;
};

// f(theta) = 1/2 * sum_i lambda_i theta_i^2 with lambda log-spaced in
// [1, condition_number]; the gradient is exact and batch-independent.
Problem builtin_quadratic(std::ptrdiff_t dim, double condition_number);

// f(x, y) = (1 - x)^2 + 100 (y - x^2)^2, minimum at (1, 1).
Problem builtin_rosenbrock();

// Two-class Gaussian blobs with anisotropic feature scales: feature j is
// drawn as s_j * (m_c + N(0, 1)) with m_c = -2/sqrt(d) for class 0 and
// +2/sqrt(d) for class 1, s_j = 10^(-2 j / (d - 1)) (s_0 = 1 when d = 1).
// The first n/2 examples are class 0. Loss is mean binary cross-entropy.
Problem builtin_logreg(std::int64_t n_examples, std::int64_t n_features,
                       std::uint64_t seed);

// One-hidden-layer ReLU network with softmax + categorical cross-entropy on
// synthetic 3-class blobs (8 features, 600 examples, class c mean 3 * e_c,
// unit covariance). Parameters are [W1 | b1 | W2 | b2], row-major.
Problem builtin_mlp(std::int64_t hidden_units, std::uint64_t seed);

// The same network over a caller-provided labeled dataset.
Problem mlp_on_dataset(std::int64_t hidden_units, Dataset data,
                       std::int64_t n_classes);

Batch full_batch(const Dataset& d);

// Epoch semantics: a seeded shuffle per epoch, then consecutive
// non-overlapping slices; a short tail is dropped, so every retained example
// appears exactly once per epoch.
class BatchSampler {
 public:
  BatchSampler(std::int64_t count, std::int64_t batch_size);
  Batch next(Rng& rng);
  std::int64_t batches_per_epoch() const { return batches_per_epoch_; }

 private:
  std::vector<std::int64_t> order_;
  std::int64_t batch_size_;
  std::int64_t batches_per_epoch_;
  std::int64_t next_batch_ = 0;
};

// Central differences against the analytic gradient; returns
// max_i |fd_i - g_i| / (|g_i| + 1e-12).
double grad_check(const Problem& p, const Vec& theta, const Batch& batch,
                  double h = 1e-6);

// Random point where the central-difference probe is well posed: coordinate
// magnitudes drawn from [lo, hi], redrawn while the point sits within 1e-3 of
// a ReLU kink or some nonzero gradient coordinate falls under 1e-4, below
// which double-precision differencing carries no signal at the 1e-5 target.
Vec draw_check_point(const Problem& p, const Batch& batch, Rng& rng, double lo,
                     double hi);

}  // namespace gradkit
