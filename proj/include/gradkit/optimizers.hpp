#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "gradkit/vec.hpp"

namespace gradkit {

enum class Algo {
  sgd,
  momentum,
  nesterov,
  adagrad,
  adadelta,
  rmsprop,
  adam,
  adamax,
  nadam,
  amsgrad,
};

inline constexpr int algo_count = 10;
const std::vector<Algo>& all_algos();
std::string_view algo_name(Algo a);
Algo parse_algo(std::string_view name);  // throws, naming the bad value

struct HyperParams {
  double epsilon = 0.001;  // learning rate (unused by adadelta)
  double alpha = 0.9;      // momentum decay
  double rho = 0.95;       // squared-average decay (adadelta / rmsprop)
  double rho1 = 0.9;       // first-moment decay
  double rho2 = 0.999;     // second-moment decay
  double delta = 1e-8;     // stability constant; placement varies per rule
};

// Conventional defaults per algorithm: epsilon 0.01 for the sgd family and
// 0.001 for the adaptive family, rho 0.95 for adadelta and 0.9 for rmsprop,
// delta 1e-6 for adadelta/nadam and 1e-8 elsewhere.
HyperParams default_hyperparams(Algo a);

// Throws std::invalid_argument when a rate is outside its range or delta <= 0.
void validate(const HyperParams& h);

struct OptimizerState {
  Algo kind = Algo::sgd;
  std::int64_t t = 0;  // completed steps

  // Only the accumulators the rule uses get allocated; all start at zero.
  Vec velocity;      // momentum family
  Vec sq_grad_acc;   // adagrad running sum / adadelta+rmsprop decayed average
  Vec sq_step_acc;   // adadelta squared-update average
  Vec moment1;       // adam family first moment
  Vec moment2;       // adam family second moment
  Vec moment2_max;   // amsgrad running max of moment2
  Vec inf_norm;      // adamax decayed infinity norm
};

OptimizerState make_state(Algo kind, std::ptrdiff_t dim);

struct StepReport {
  double update_norm = 0.0;
  // |dtheta_i / g_i| over coordinates with |g_i| > 1e-12; zeros when none qualify
  double eff_lr_min = 0.0;
  double eff_lr_mean = 0.0;
  double eff_lr_max = 0.0;
};

enum class Exec { serial, parallel };

using GradFn = std::function<Vec(const Vec&)>;

class Optimizer {
 public:
  Optimizer(Algo algo, std::ptrdiff_t dim, HyperParams hp,
            Exec exec = Exec::parallel);

  // Applies one update with the scheduled rate eps_k (callers without a
  // schedule pass hp.epsilon). Rejects non-finite gradients, naming the
  // offending index. Not valid for nesterov, which needs an evaluator.
  StepReport step(Vec& theta, const Vec& g, double eps_k);
  StepReport step(Vec& theta, const Vec& g) { return step(theta, g, hp_.epsilon); }

  // Nesterov update: the gradient is evaluated at theta + alpha * velocity.
  // `used_grad`, when given, receives the gradient the step consumed.
  StepReport step_nesterov(Vec& theta, const GradFn& grad_at, double eps_k,
                           Vec* used_grad = nullptr);
  StepReport step_nesterov(Vec& theta, const GradFn& grad_at) {
    return step_nesterov(theta, grad_at, hp_.epsilon);
  }

  const OptimizerState& state() const { return state_; }
  const HyperParams& hyperparams() const { return hp_; }
  Algo algo() const { return state_.kind; }
  std::ptrdiff_t dim() const { return dim_; }

 private:
  StepReport dispatch(Vec& theta, const Vec& g, double eps_k);

  std::ptrdiff_t dim_;
  HyperParams hp_;
  OptimizerState state_;
  Vec dtheta_;
  Vec lookahead_;
  Exec exec_;
};

}  // namespace gradkit
