#include "gradkit/optimizers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gradkit/kernels.hpp"
#include "gradkit/parallel.hpp"

namespace gradkit {

namespace {

constexpr double eff_lr_grad_floor = 1e-12;

struct RatioStats {
  double min = 0.0, max = 0.0, sum = 0.0;
  std::int64_t count = 0;
};

RatioStats ratio_chunk(std::span<const double> dtheta, std::span<const double> g,
                       std::ptrdiff_t lo, std::ptrdiff_t hi) {
  RatioStats s;
  for (std::ptrdiff_t i = lo; i < hi; ++i) {
    const double gi = g[static_cast<std::size_t>(i)];
    if (std::fabs(gi) <= eff_lr_grad_floor) continue;
    const double r = std::fabs(dtheta[static_cast<std::size_t>(i)] / gi);
    if (s.count == 0) {
      s.min = s.max = r;
    } else {
      if (r < s.min) s.min = r;
      if (r > s.max) s.max = r;
    }
    s.sum += r;
    ++s.count;
  }
  return s;
}

void merge(RatioStats& total, const RatioStats& s) {
  if (s.count == 0) return;
  if (total.count == 0) {
    total.min = s.min;
    total.max = s.max;
  } else {
    if (s.min < total.min) total.min = s.min;
    if (s.max > total.max) total.max = s.max;
  }
  total.sum += s.sum;
  total.count += s.count;
}

// Chunked like det_sum so the mean does not depend on the thread count.
RatioStats ratio_stats(std::span<const double> dtheta, std::span<const double> g) {
  const std::ptrdiff_t n = std::ssize(dtheta);
  if (n < omp_grain) return ratio_chunk(dtheta, g, 0, n);

  const std::ptrdiff_t nchunks = (n + reduce_chunk - 1) / reduce_chunk;
  std::vector<RatioStats> parts(static_cast<std::size_t>(nchunks));
#pragma omp parallel for
  for (std::ptrdiff_t c = 0; c < nchunks; ++c) {
    const std::ptrdiff_t lo = c * reduce_chunk;
    const std::ptrdiff_t hi = lo + reduce_chunk < n ? lo + reduce_chunk : n;
    parts[static_cast<std::size_t>(c)] = ratio_chunk(dtheta, g, lo, hi);
  }
  RatioStats total;
  for (const RatioStats& s : parts) merge(total, s);
  return total;
}

StepReport make_report(std::span<const double> dtheta, std::span<const double> g) {
  StepReport r;
  r.update_norm = l2_norm(dtheta);
  const RatioStats s = ratio_stats(dtheta, g);
  if (s.count > 0) {
    r.eff_lr_min = s.min;
    r.eff_lr_max = s.max;
    r.eff_lr_mean = s.sum / static_cast<double>(s.count);
  }
  return r;
}

void require_finite(const Vec& g, const char* what) {
  const std::ptrdiff_t bad = first_nonfinite(g);
  if (bad >= 0) {
    throw std::domain_error(std::string(what) + " entry " + std::to_string(bad) +
                            " is not finite");
  }
}

}  // namespace

const std::vector<Algo>& all_algos() {
  static const std::vector<Algo> algos = {
      Algo::sgd,      Algo::momentum, Algo::nesterov, Algo::adagrad,
      Algo::adadelta, Algo::rmsprop,  Algo::adam,     Algo::adamax,
      Algo::nadam,    Algo::amsgrad,
  };
  return algos;
}

std::string_view algo_name(Algo a) {
  switch (a) {
    case Algo::sgd: return "sgd";
    case Algo::momentum: return "momentum";
    case Algo::nesterov: return "nesterov";
    case Algo::adagrad: return "adagrad";
    case Algo::adadelta: return "adadelta";
    case Algo::rmsprop: return "rmsprop";
    case Algo::adam: return "adam";
    case Algo::adamax: return "adamax";
    case Algo::nadam: return "nadam";
    case Algo::amsgrad: return "amsgrad";
  }
  return "?";
}

Algo parse_algo(std::string_view name) {
  for (Algo a : all_algos()) {
    if (algo_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

HyperParams default_hyperparams(Algo a) {
  HyperParams h;
  switch (a) {
    case Algo::sgd:
    case Algo::momentum:
    case Algo::nesterov:
      h.epsilon = 0.01;
      break;
    case Algo::adagrad:
    case Algo::rmsprop:
    case Algo::adam:
    case Algo::adamax:
    case Algo::nadam:
    case Algo::amsgrad:
    case Algo::adadelta:
      h.epsilon = 0.001;
      break;
  }
  h.rho = a == Algo::rmsprop ? 0.9 : 0.95;
  h.delta = (a == Algo::adadelta || a == Algo::nadam) ? 1e-6 : 1e-8;
  return h;
}

void validate(const HyperParams& h) {
  auto in_unit = [](double v) { return v >= 0.0 && v < 1.0; };
  if (!(h.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!in_unit(h.alpha)) throw std::invalid_argument("alpha must be in [0, 1)");
  if (!in_unit(h.rho)) throw std::invalid_argument("rho must be in [0, 1)");
  if (!in_unit(h.rho1)) throw std::invalid_argument("rho1 must be in [0, 1)");
  if (!in_unit(h.rho2)) throw std::invalid_argument("rho2 must be in [0, 1)");
  if (!(h.delta > 0.0)) throw std::invalid_argument("delta must be > 0");
}

OptimizerState make_state(Algo kind, std::ptrdiff_t dim) {
  if (dim < 1) throw std::invalid_argument("state dimension must be >= 1");
  OptimizerState s;
  s.kind = kind;
  const std::size_t n = static_cast<std::size_t>(dim);
  switch (kind) {
    case Algo::sgd:
      break;
    case Algo::momentum:
    case Algo::nesterov:
      s.velocity.assign(n, 0.0);
      break;
    case Algo::adagrad:
    case Algo::rmsprop:
      s.sq_grad_acc.assign(n, 0.0);
      break;
    case Algo::adadelta:
      s.sq_grad_acc.assign(n, 0.0);
      s.sq_step_acc.assign(n, 0.0);
      break;
    case Algo::adam:
    case Algo::nadam:
      s.moment1.assign(n, 0.0);
      s.moment2.assign(n, 0.0);
      break;
    case Algo::adamax:
      s.moment1.assign(n, 0.0);
      s.inf_norm.assign(n, 0.0);
      break;
    case Algo::amsgrad:
      s.moment1.assign(n, 0.0);
      s.moment2.assign(n, 0.0);
      s.moment2_max.assign(n, 0.0);
      break;
  }
  return s;
}

Optimizer::Optimizer(Algo algo, std::ptrdiff_t dim, HyperParams hp, Exec exec)
    : dim_(dim), hp_(hp), state_(make_state(algo, dim)), exec_(exec) {
  validate(hp_);
  dtheta_.assign(static_cast<std::size_t>(dim), 0.0);
  if (algo == Algo::nesterov) lookahead_.assign(static_cast<std::size_t>(dim), 0.0);
}

StepReport Optimizer::dispatch(Vec& theta, const Vec& g, double eps_k) {
  namespace ks = kernels::serial;
  namespace kp = kernels::openmp;
  const bool par = exec_ == Exec::parallel;
  ++state_.t;
  switch (state_.kind) {
    case Algo::sgd:
      par ? kp::sgd(theta, g, eps_k, dtheta_) : ks::sgd(theta, g, eps_k, dtheta_);
      break;
    case Algo::momentum:
    case Algo::nesterov:
      par ? kp::momentum(theta, g, eps_k, hp_.alpha, state_.velocity, dtheta_)
          : ks::momentum(theta, g, eps_k, hp_.alpha, state_.velocity, dtheta_);
      break;
    case Algo::adagrad:
      par ? kp::adagrad(theta, g, eps_k, hp_.delta, state_.sq_grad_acc, dtheta_)
          : ks::adagrad(theta, g, eps_k, hp_.delta, state_.sq_grad_acc, dtheta_);
      break;
    case Algo::adadelta:
      par ? kp::adadelta(theta, g, hp_.rho, hp_.delta, state_.sq_grad_acc,
                         state_.sq_step_acc, dtheta_)
          : ks::adadelta(theta, g, hp_.rho, hp_.delta, state_.sq_grad_acc,
                         state_.sq_step_acc, dtheta_);
      break;
    case Algo::rmsprop:
      par ? kp::rmsprop(theta, g, eps_k, hp_.rho, hp_.delta, state_.sq_grad_acc,
                        dtheta_)
          : ks::rmsprop(theta, g, eps_k, hp_.rho, hp_.delta, state_.sq_grad_acc,
                        dtheta_);
      break;
    case Algo::adam:
      par ? kp::adam(theta, g, eps_k, hp_.rho1, hp_.rho2, hp_.delta, state_.t,
                     state_.moment1, state_.moment2, dtheta_)
          : ks::adam(theta, g, eps_k, hp_.rho1, hp_.rho2, hp_.delta, state_.t,
                     state_.moment1, state_.moment2, dtheta_);
      break;
    case Algo::adamax:
      par ? kp::adamax(theta, g, eps_k, hp_.rho1, hp_.rho2, state_.t,
                       state_.moment1, state_.inf_norm, dtheta_)
          : ks::adamax(theta, g, eps_k, hp_.rho1, hp_.rho2, state_.t,
                       state_.moment1, state_.inf_norm, dtheta_);
      break;
    case Algo::nadam:
      par ? kp::nadam(theta, g, eps_k, hp_.rho1, hp_.rho2, hp_.delta, state_.t,
                      state_.moment1, state_.moment2, dtheta_)
          : ks::nadam(theta, g, eps_k, hp_.rho1, hp_.rho2, hp_.delta, state_.t,
                      state_.moment1, state_.moment2, dtheta_);
      break;
    case Algo::amsgrad:
      par ? kp::amsgrad(theta, g, eps_k, hp_.rho1, hp_.rho2, hp_.delta,
                        state_.moment1, state_.moment2, state_.moment2_max, dtheta_)
          : ks::amsgrad(theta, g, eps_k, hp_.rho1, hp_.rho2, hp_.delta,
                        state_.moment1, state_.moment2, state_.moment2_max, dtheta_);
      break;
  }
  return make_report(dtheta_, g);
}

StepReport Optimizer::step(Vec& theta, const Vec& g, double eps_k) {
  if (state_.kind == Algo::nesterov) {
    throw std::logic_error("nesterov requires a gradient evaluator; use step_nesterov");
  }
  check_same_dim(theta.size(), static_cast<std::size_t>(dim_), "step theta");
  check_same_dim(g.size(), static_cast<std::size_t>(dim_), "step gradient");
  require_finite(g, "gradient");
  return dispatch(theta, g, eps_k);
}

StepReport Optimizer::step_nesterov(Vec& theta, const GradFn& grad_at, double eps_k,
                                    Vec* used_grad) {
  if (state_.kind != Algo::nesterov) {
    throw std::logic_error("step_nesterov is only valid for the nesterov rule");
  }
  check_same_dim(theta.size(), static_cast<std::size_t>(dim_), "step theta");
  const bool par = exec_ == Exec::parallel;
  par ? kernels::openmp::lookahead_point(theta, state_.velocity, hp_.alpha, lookahead_)
      : kernels::serial::lookahead_point(theta, state_.velocity, hp_.alpha, lookahead_);
  require_finite(lookahead_, "lookahead point");
  Vec g = grad_at(lookahead_);
  check_same_dim(g.size(), static_cast<std::size_t>(dim_), "step gradient");
  require_finite(g, "gradient");
  const StepReport report = dispatch(theta, g, eps_k);
  if (used_grad != nullptr) *used_grad = std::move(g);
  return report;
}

}  // namespace gradkit
