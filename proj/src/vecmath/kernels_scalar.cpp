#include <cmath>

#include "palsgd/kernels.hpp"

namespace palsgd::kernels {
namespace {

void axpy(double a, const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + y[i];
}

void mix(const double* x, const double* anchor, double beta, double* out, std::size_t n) {
  const double keep = 1.0 - beta;
  for (std::size_t i = 0; i < n; ++i) out[i] = keep * x[i] + beta * anchor[i];
}

void pull(double* x, const double* anchor, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] - c * (x[i] - anchor[i]);
}

void sub(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

void accumulate(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void divide(double* x, double d, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] /= d;
}

void scale(double* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq(const double* x, std::size_t n) { return dot(x, x, n); }

double dist_sq(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

void momentum_step(double* x, double* m, const double* g, double mu, double lr, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = mu * m[i] + g[i];
    x[i] = x[i] - lr * m[i];
  }
}

void adamw_step(double* x, double* m, double* v, const double* g, double lr, double beta1,
                double beta2, double bc1, double bc2, double eps, double weight_decay,
                std::size_t n) {
  const double one_m_b1 = 1.0 - beta1;
  const double one_m_b2 = 1.0 - beta2;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + one_m_b1 * g[i];
    v[i] = beta2 * v[i] + one_m_b2 * (g[i] * g[i]);
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    const double update = m_hat / (std::sqrt(v_hat) + eps) + weight_decay * x[i];
    x[i] = x[i] - lr * update;
  }
}

void nesterov_step(double* x, double* v, const double* d, double mu, double lr, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = mu * v[i] + d[i];
    x[i] = x[i] - lr * (d[i] + mu * v[i]);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, axpy,   mix,     pull,          sub,
                                 accumulate,  divide, scale,   dot,           sum_sq,
                                 dist_sq,     momentum_step,   adamw_step,    nesterov_step};
  return table;
}

}  // namespace palsgd::kernels
