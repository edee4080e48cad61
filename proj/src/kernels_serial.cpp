#include <cmath>

#include "gradkit/kernels.hpp"

// Reference bodies. Keep these the plainest possible transcription of the
// update rules; the openmp variants must match them bitwise.

namespace gradkit::kernels::serial {

void sgd(dspan theta, cspan g, double eps, dspan dtheta) {
  const std::ptrdiff_t n = std::ssize(theta);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double dx = -eps * g[i];
    dtheta[i] = dx;
    theta[i] += dx;
  }
}

void momentum(dspan theta, cspan g, double eps, double alpha, dspan velocity,
              dspan dtheta) {
  const std::ptrdiff_t n = std::ssize(theta);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double v = alpha * velocity[i] - eps * g[i];
    velocity[i] = v;
    dtheta[i] = v;
    theta[i] += v;
  }
}

void lookahead_point(cspan theta, cspan velocity, double alpha, dspan out) {
  const std::ptrdiff_t n = std::ssize(theta);
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = theta[i] + alpha * velocity[i];
}

void adagrad(dspan theta, cspan g, double eps, double delta, dspan sq_grad_acc,
             dspan dtheta) {
  const std::ptrdiff_t n = std::ssize(theta);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double acc = sq_grad_acc[i] + g[i] * g[i];
    sq_grad_acc[i] = acc;
    const double dx = -(eps / (delta + std::sqrt(acc))) * g[i];
    dtheta[i] = dx;
    theta[i] += dx;
  }
}

void adadelta(dspan theta, cspan g, double rho, double delta, dspan avg_sq_grad,
              dspan avg_sq_step, dspan dtheta) {
  const std::ptrdiff_t n = std::ssize(theta);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double eg2 = rho * avg_sq_grad[i] + (1.0 - rho) * g[i] * g[i];
    avg_sq_grad[i] = eg2;
    // the step uses the squared-step average from *before* this step
    const double rms_step = std::sqrt(avg_sq_step[i] + delta);
    const double rms_grad = std::sqrt(eg2 + delta);
    const double dx = -(rms_step / rms_grad) * g[i];
    avg_sq_step[i] = rho * avg_sq_step[i] + (1.0 - rho) * dx * dx;
    dtheta[i] = dx;
    theta[i] += dx;
  }
}

void rmsprop(dspan theta, cspan g, double eps, double rho, double delta,
             dspan sq_grad_acc, dspan dtheta) {
  const std::ptrdiff_t n = std::ssize(theta);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double acc = rho * sq_grad_acc[i] + (1.0 - rho) * g[i] * g[i];
    sq_grad_acc[i] = acc;
    const double dx = -(eps / std::sqrt(delta + acc)) * g[i];
    dtheta[i] = dx;
    theta[i] += dx;
  }
}

void adam(dspan theta, cspan g, double eps, double rho1, double rho2, double delta,
          std::int64_t t, dspan moment1, dspan moment2, dspan dtheta) {
  const double corr1 = 1.0 - std::pow(rho1, static_cast<double>(t));
  const double corr2 = 1.0 - std::pow(rho2, static_cast<double>(t));
  const std::ptrdiff_t n = std::ssize(theta);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double m = rho1 * moment1[i] + (1.0 - rho1) * g[i];
    const double u = rho2 * moment2[i] + (1.0 - rho2) * g[i] * g[i];
    moment1[i] = m;
    moment2[i] = u;
    const double mhat = m / corr1;
    const double uhat = u / corr2;
    const double dx = -eps * mhat / (std::sqrt(uhat) + delta);
    dtheta[i] = dx;
    theta[i] += dx;
  }
}

void adamax(dspan theta, cspan g, double eps, double rho1, double rho2,
            std::int64_t t, dspan moment1, dspan inf_norm, dspan dtheta) {
  const double corr1 = 1.0 - std::pow(rho1, static_cast<double>(t));
  const std::ptrdiff_t n = std::ssize(theta);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double m = rho1 * moment1[i] + (1.0 - rho1) * g[i];
    moment1[i] = m;
    const double decayed = rho2 * inf_norm[i];
    const double mag = std::fabs(g[i]);
    const double gamma = decayed > mag ? decayed : mag;
    inf_norm[i] = gamma;
    // gamma stays 0 only while every gradient seen so far was 0: no movement
    const double dx = gamma == 0.0 ? 0.0 : -(eps / corr1) * m / gamma;
    dtheta[i] = dx;
    theta[i] += dx;
  }
}

void nadam(dspan theta, cspan g, double eps, double rho1, double rho2, double delta,
           std::int64_t t, dspan moment1, dspan moment2, dspan dtheta) {
  const double corr1_next = 1.0 - std::pow(rho1, static_cast<double>(t + 1));
  const double corr1 = 1.0 - std::pow(rho1, static_cast<double>(t));
  const double corr2 = 1.0 - std::pow(rho2, static_cast<double>(t));
  const std::ptrdiff_t n = std::ssize(theta);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double m = rho1 * moment1[i] + (1.0 - rho1) * g[i];
    const double u = rho2 * moment2[i] + (1.0 - rho2) * g[i] * g[i];
    moment1[i] = m;
    moment2[i] = u;
    const double mhat = rho1 * m / corr1_next + (1.0 - rho1) * g[i] / corr1;
    const double uhat = rho2 * u / corr2;
    const double dx = -eps * mhat / std::sqrt(uhat + delta);
    dtheta[i] = dx;
    theta[i] += dx;
  }
}

void amsgrad(dspan theta, cspan g, double eps, double rho1, double rho2,
             double delta, dspan moment1, dspan moment2, dspan moment2_max,
             dspan dtheta) {
  const std::ptrdiff_t n = std::ssize(theta);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double m = rho1 * moment1[i] + (1.0 - rho1) * g[i];
    const double u = rho2 * moment2[i] + (1.0 - rho2) * g[i] * g[i];
    moment1[i] = m;
    moment2[i] = u;
    const double umax = moment2_max[i] > u ? moment2_max[i] : u;
    moment2_max[i] = umax;
    // no bias correction; the divisor floor keeps an all-zero prefix inert
    const double root = std::sqrt(umax);
    const double dx = -eps * m / (root > delta ? root : delta);
    dtheta[i] = dx;
    theta[i] += dx;
  }
}

}  // namespace gradkit::kernels::serial
