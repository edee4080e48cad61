#include "gradkit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace gradkit {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// -y*log(s) - (1-y)*log(1-s) without forming s
double binary_ce(double t, double y) {
  return std::max(t, 0.0) - y * t + std::log1p(std::exp(-std::fabs(t)));
}

Dataset surrogate_dataset() {
  Dataset d;
  d.count = 1;  // batch-independent problems expose one surrogate example
  return d;
}

}  // namespace

Problem builtin_quadratic(std::ptrdiff_t dim, double condition_number) {
  if (dim < 1) throw std::invalid_argument("quadratic: dim must be >= 1");
  if (!(condition_number >= 1.0)) {
    throw std::invalid_argument("quadratic: condition_number must be >= 1");
  }
  auto lambda = std::make_shared<Vec>(static_cast<std::size_t>(dim));
  for (std::ptrdiff_t i = 0; i < dim; ++i) {
    (*lambda)[static_cast<std::size_t>(i)] =
        dim == 1 ? 1.0
                 : std::pow(condition_number,
                            static_cast<double>(i) / static_cast<double>(dim - 1));
  }

  Problem p;
  p.name = "quadratic";
  p.dim = dim;
  p.data = surrogate_dataset();
  p.batch_independent = true;
  p.loss = [lambda](const Vec& theta, const Batch&) {
    double s = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      s += (*lambda)[i] * theta[i] * theta[i];
    }
    return 0.5 * s;
  };
  p.grad = [lambda](const Vec& theta, const Batch&) {
    Vec g(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) g[i] = (*lambda)[i] * theta[i];
    return g;
  };
  return p;
}

Problem builtin_rosenbrock() {
  Problem p;
  p.name = "rosenbrock";
  p.dim = 2;
  p.data = surrogate_dataset();
  p.batch_independent = true;
  p.loss = [](const Vec& theta, const Batch&) {
    const double x = theta[0], y = theta[1];
    const double a = 1.0 - x;
    const double b = y - x * x;
    return a * a + 100.0 * b * b;
  };
  p.grad = [](const Vec& theta, const Batch&) {
    const double x = theta[0], y = theta[1];
    const double b = y - x * x;
    return Vec{-2.0 * (1.0 - x) - 400.0 * x * b, 200.0 * b};
  };
  return p;
}

Problem builtin_logreg(std::int64_t n_examples, std::int64_t n_features,
                       std::uint64_t seed) {
  if (n_examples < 2 || n_features < 1) {
    throw std::invalid_argument("logreg: need n_examples >= 2 and n_features >= 1");
  }
  const std::size_t d = static_cast<std::size_t>(n_features);
  Vec scale(d);
  for (std::size_t j = 0; j < d; ++j) {
    scale[j] = d == 1 ? 1.0
                      : std::pow(10.0, -2.0 * static_cast<double>(j) /
                                           static_cast<double>(d - 1));
  }
  const double mean = 2.0 / std::sqrt(static_cast<double>(n_features));

  Dataset data;
  data.count = n_examples;
  data.inputs.resize(static_cast<std::size_t>(n_examples));
  data.targets.resize(static_cast<std::size_t>(n_examples));
  Rng rng(seed);
  const std::int64_t n0 = n_examples / 2;
  for (std::int64_t i = 0; i < n_examples; ++i) {
    const double cls_mean = i < n0 ? -mean : mean;
    Vec& x = data.inputs[static_cast<std::size_t>(i)];
    x.resize(d);
    for (std::size_t j = 0; j < d; ++j) x[j] = scale[j] * (cls_mean + rng.normal());
    data.targets[static_cast<std::size_t>(i)] = i < n0 ? 0.0 : 1.0;
  }

  auto shared = std::make_shared<Dataset>(std::move(data));
  Problem p;
  p.name = "logreg";
  p.dim = n_features;
  p.data = *shared;
  p.zero_init = true;
  p.has_test_split = true;
  p.loss = [shared](const Vec& theta, const Batch& batch) {
    double s = 0.0;
    for (std::int64_t idx : batch.indices) {
      const Vec& x = shared->inputs[static_cast<std::size_t>(idx)];
      double t = 0.0;
      for (std::size_t j = 0; j < theta.size(); ++j) t += theta[j] * x[j];
      s += binary_ce(t, shared->targets[static_cast<std::size_t>(idx)]);
    }
    return s / static_cast<double>(batch.size());
  };
  p.grad = [shared](const Vec& theta, const Batch& batch) {
    Vec g(theta.size(), 0.0);
    const double inv_m = 1.0 / static_cast<double>(batch.size());
    for (std::int64_t idx : batch.indices) {
      const Vec& x = shared->inputs[static_cast<std::size_t>(idx)];
      double t = 0.0;
      for (std::size_t j = 0; j < theta.size(); ++j) t += theta[j] * x[j];
      const double coeff =
          (sigmoid(t) - shared->targets[static_cast<std::size_t>(idx)]) * inv_m;
      for (std::size_t j = 0; j < theta.size(); ++j) g[j] += coeff * x[j];
    }
    return g;
  };
  return p;
}

namespace {

struct MlpShape {
  std::int64_t in = 0, hidden = 0, classes = 0;
  std::ptrdiff_t dim() const {
    return static_cast<std::ptrdiff_t>(hidden * in + hidden + classes * hidden +
                                       classes);
  }
  // offsets into the flat parameter vector [W1 | b1 | W2 | b2]
  std::size_t w1() const { return 0; }
  std::size_t b1() const { return static_cast<std::size_t>(hidden * in); }
  std::size_t w2() const { return b1() + static_cast<std::size_t>(hidden); }
  std::size_t b2() const { return w2() + static_cast<std::size_t>(classes * hidden); }
};

struct MlpScratch {
  Vec z, a, logits, prob;
};

void mlp_forward(const MlpShape& s, const Vec& theta, const Vec& x, MlpScratch& t) {
  const std::size_t h = static_cast<std::size_t>(s.hidden);
  const std::size_t c = static_cast<std::size_t>(s.classes);
  const std::size_t d = static_cast<std::size_t>(s.in);
  t.z.resize(h);
  t.a.resize(h);
  t.logits.resize(c);
  t.prob.resize(c);
  for (std::size_t i = 0; i < h; ++i) {
    double z = theta[s.b1() + i];
    const std::size_t row = s.w1() + i * d;
    for (std::size_t j = 0; j < d; ++j) z += theta[row + j] * x[j];
    t.z[i] = z;
    t.a[i] = z > 0.0 ? z : 0.0;  // subgradient at 0 is taken as 0
  }
  double zmax = -1e300;
  for (std::size_t k = 0; k < c; ++k) {
    double z = theta[s.b2() + k];
    const std::size_t row = s.w2() + k * h;
    for (std::size_t i = 0; i < h; ++i) z += theta[row + i] * t.a[i];
    t.logits[k] = z;
    if (z > zmax) zmax = z;
  }
  double denom = 0.0;
  for (std::size_t k = 0; k < c; ++k) denom += std::exp(t.logits[k] - zmax);
  for (std::size_t k = 0; k < c; ++k) {
    t.prob[k] = std::exp(t.logits[k] - zmax) / denom;
  }
}

}  // namespace

Problem mlp_on_dataset(std::int64_t hidden_units, Dataset data,
                       std::int64_t n_classes) {
  if (hidden_units < 1) throw std::invalid_argument("mlp: hidden_units must be >= 1");
  if (data.inputs.empty()) throw std::invalid_argument("mlp: dataset absent");
  if (n_classes < 2) throw std::invalid_argument("mlp: need at least 2 classes");

  MlpShape shape;
  shape.in = static_cast<std::int64_t>(data.inputs[0].size());
  shape.hidden = hidden_units;
  shape.classes = n_classes;

  auto shared = std::make_shared<Dataset>(std::move(data));
  auto sh = std::make_shared<MlpShape>(shape);

  Problem p;
  p.name = "mlp";
  p.dim = shape.dim();
  p.data = *shared;
  p.has_test_split = true;
  p.loss = [shared, sh](const Vec& theta, const Batch& batch) {
    MlpScratch t;
    double s = 0.0;
    for (std::int64_t idx : batch.indices) {
      mlp_forward(*sh, theta, shared->inputs[static_cast<std::size_t>(idx)], t);
      const std::size_t y = static_cast<std::size_t>(
          shared->targets[static_cast<std::size_t>(idx)]);
      double zmax = t.logits[0];
      for (double z : t.logits) zmax = std::max(zmax, z);
      double denom = 0.0;
      for (double z : t.logits) denom += std::exp(z - zmax);
      s += -(t.logits[y] - zmax - std::log(denom));
    }
    return s / static_cast<double>(batch.size());
  };
  p.grad = [shared, sh](const Vec& theta, const Batch& batch) {
    const MlpShape& s = *sh;
    const std::size_t h = static_cast<std::size_t>(s.hidden);
    const std::size_t c = static_cast<std::size_t>(s.classes);
    const std::size_t d = static_cast<std::size_t>(s.in);
    Vec g(theta.size(), 0.0);
    MlpScratch t;
    Vec dlogits(c), da(h);
    const double inv_m = 1.0 / static_cast<double>(batch.size());
    for (std::int64_t idx : batch.indices) {
      const Vec& x = shared->inputs[static_cast<std::size_t>(idx)];
      mlp_forward(s, theta, x, t);
      const std::size_t y = static_cast<std::size_t>(
          shared->targets[static_cast<std::size_t>(idx)]);
      for (std::size_t k = 0; k < c; ++k) {
        dlogits[k] = (t.prob[k] - (k == y ? 1.0 : 0.0)) * inv_m;
      }
      for (std::size_t k = 0; k < c; ++k) {
        const std::size_t row = s.w2() + k * h;
        for (std::size_t i = 0; i < h; ++i) g[row + i] += dlogits[k] * t.a[i];
        g[s.b2() + k] += dlogits[k];
      }
      for (std::size_t i = 0; i < h; ++i) {
        double v = 0.0;
        for (std::size_t k = 0; k < c; ++k) v += theta[s.w2() + k * h + i] * dlogits[k];
        da[i] = t.z[i] > 0.0 ? v : 0.0;
      }
      for (std::size_t i = 0; i < h; ++i) {
        const std::size_t row = s.w1() + i * d;
        for (std::size_t j = 0; j < d; ++j) g[row + j] += da[i] * x[j];
        g[s.b1() + i] += da[i];
      }
    }
    return g;
  };
  p.kink_margin = [shared, sh](const Vec& theta, const Batch& batch) {
    MlpScratch t;
    double margin = 1e300;
    for (std::int64_t idx : batch.indices) {
      mlp_forward(*sh, theta, shared->inputs[static_cast<std::size_t>(idx)], t);
      for (double z : t.z) margin = std::min(margin, std::fabs(z));
    }
    return margin;
  };
  return p;
}

Problem builtin_mlp(std::int64_t hidden_units, std::uint64_t seed) {
  constexpr std::int64_t n = 600, features = 8, classes = 3;
  Dataset data;
  data.count = n;
  data.inputs.resize(static_cast<std::size_t>(n));
  data.targets.resize(static_cast<std::size_t>(n));
  Rng rng(seed);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t cls = i % classes;
    Vec& x = data.inputs[static_cast<std::size_t>(i)];
    x.resize(static_cast<std::size_t>(features));
    for (std::int64_t j = 0; j < features; ++j) {
      x[static_cast<std::size_t>(j)] = (j == cls ? 3.0 : 0.0) + rng.normal();
    }
    data.targets[static_cast<std::size_t>(i)] = static_cast<double>(cls);
  }
  return mlp_on_dataset(hidden_units, std::move(data), classes);
}

Batch full_batch(const Dataset& d) {
  Batch b;
  b.indices.resize(static_cast<std::size_t>(d.count));
  std::iota(b.indices.begin(), b.indices.end(), std::int64_t{0});
  return b;
}

BatchSampler::BatchSampler(std::int64_t count, std::int64_t batch_size)
    : batch_size_(batch_size), batches_per_epoch_(count / (batch_size > 0 ? batch_size : 1)) {
  if (batch_size < 1 || batch_size > count) {
    throw std::invalid_argument("batch size " + std::to_string(batch_size) +
                                " out of range [1, " + std::to_string(count) + "]");
  }
  order_.resize(static_cast<std::size_t>(count));
  std::iota(order_.begin(), order_.end(), std::int64_t{0});
}

Batch BatchSampler::next(Rng& rng) {
  if (next_batch_ == 0) rng.shuffle(order_);
  Batch b;
  const auto first =
      order_.begin() + static_cast<std::ptrdiff_t>(next_batch_ * batch_size_);
  b.indices.assign(first, first + static_cast<std::ptrdiff_t>(batch_size_));
  next_batch_ = (next_batch_ + 1) % batches_per_epoch_;
  return b;
}

Vec draw_check_point(const Problem& p, const Batch& batch, Rng& rng, double lo,
                     double hi) {
  Vec theta(static_cast<std::size_t>(p.dim));
  for (int attempt = 0; attempt < 10000; ++attempt) {
    for (double& v : theta) {
      const double mag = rng.uniform(lo, hi);
      v = rng.uniform() < 0.5 ? -mag : mag;
    }
    if (p.kink_margin && p.kink_margin(theta, batch) <= 1e-3) continue;
    const Vec g = p.grad(theta, batch);
    double gmin = 1e300;
    for (double x : g) {
      const double a = std::fabs(x);
      if (a > 0.0 && a < gmin) gmin = a;
    }
    if (gmin < 1e-4) continue;
    return theta;
  }
  throw std::runtime_error("draw_check_point: no well-posed point found for '" +
                           p.name + "'");
}

double grad_check(const Problem& p, const Vec& theta, const Batch& batch, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grad_check: h must be > 0");
  const Vec analytic = p.grad(theta, batch);
  Vec probe = theta;
  double worst = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    const double up = p.loss(probe, batch);
    probe[i] = theta[i] - h;
    const double down = p.loss(probe, batch);
    probe[i] = theta[i];
    const double fd = (up - down) / (2.0 * h);
    const double err = std::fabs(fd - analytic[i]) / (std::fabs(analytic[i]) + 1e-12);
    if (err > worst) worst = err;
  }
  return worst;
}

}  // namespace gradkit
