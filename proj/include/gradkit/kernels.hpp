#pragma once

#include <cstdint>
#include <span>

namespace gradkit::kernels {

using dspan = std::span<double>;
using cspan = std::span<const double>;

// One kernel per update rule. Each call advances the rule by a single step:
// state arrays are updated in place, the applied change lands in `dtheta`,
// and `theta[i] += dtheta[i]`. Callers guarantee matching extents and finite
// inputs. `t` is the 1-based step count where a rule needs it.
//
// The `serial` namespace is the reference: plain loops, no pragmas. The
// `openmp` namespace mirrors it with parallel loops over coordinates and must
// stay bitwise identical (the rules are elementwise, so scheduling cannot
// change any coordinate's arithmetic). Tests compare the two; the bench
// target measures them against each other.

#define GRADKIT_KERNEL_DECLS                                                         \
  void sgd(dspan theta, cspan g, double eps, dspan dtheta);                          \
  void momentum(dspan theta, cspan g, double eps, double alpha, dspan velocity,      \
                dspan dtheta);                                                       \
  void lookahead_point(cspan theta, cspan velocity, double alpha, dspan out);        \
  void adagrad(dspan theta, cspan g, double eps, double delta, dspan sq_grad_acc,    \
               dspan dtheta);                                                        \
  void adadelta(dspan theta, cspan g, double rho, double delta, dspan avg_sq_grad,   \
                dspan avg_sq_step, dspan dtheta);                                    \
  void rmsprop(dspan theta, cspan g, double eps, double rho, double delta,           \
               dspan sq_grad_acc, dspan dtheta);                                     \
  void adam(dspan theta, cspan g, double eps, double rho1, double rho2,              \
            double delta, std::int64_t t, dspan moment1, dspan moment2,              \
            dspan dtheta);                                                           \
  void adamax(dspan theta, cspan g, double eps, double rho1, double rho2,            \
              std::int64_t t, dspan moment1, dspan inf_norm, dspan dtheta);          \
  void nadam(dspan theta, cspan g, double eps, double rho1, double rho2,             \
             double delta, std::int64_t t, dspan moment1, dspan moment2,             \
             dspan dtheta);                                                          \
  void amsgrad(dspan theta, cspan g, double eps, double rho1, double rho2,           \
               double delta, dspan moment1, dspan moment2, dspan moment2_max,        \
               dspan dtheta);

namespace serial {
GRADKIT_KERNEL_DECLS
}

namespace openmp {
GRADKIT_KERNEL_DECLS
}

#undef GRADKIT_KERNEL_DECLS

}  // namespace gradkit::kernels
