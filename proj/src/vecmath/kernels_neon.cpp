#include "palsgd/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

#include <cmath>
#endif

namespace palsgd::kernels {

#if defined(__aarch64__)
namespace {

// Two lanes of f64 per register. Only plain vmul/vadd/vsub are used; vfma would
// break bit-equality with the scalar reference.

void axpy(double a, const double* x, const double* y, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vaddq_f64(vmulq_f64(va, vld1q_f64(x + i)), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = a * x[i] + y[i];
}

void mix(const double* x, const double* anchor, double beta, double* out, std::size_t n) {
  const double keep = 1.0 - beta;
  const float64x2_t vk = vdupq_n_f64(keep);
  const float64x2_t vb = vdupq_n_f64(beta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vaddq_f64(vmulq_f64(vk, vld1q_f64(x + i)), vmulq_f64(vb, vld1q_f64(anchor + i))));
  for (; i < n; ++i) out[i] = keep * x[i] + beta * anchor[i];
}

void pull(double* x, const double* anchor, double c, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(x + i);
    vst1q_f64(x + i, vsubq_f64(xi, vmulq_f64(vc, vsubq_f64(xi, vld1q_f64(anchor + i)))));
  }
  for (; i < n; ++i) x[i] = x[i] - c * (x[i] - anchor[i]);
}

void sub(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

void accumulate(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(x + i)));
  for (; i < n; ++i) acc[i] += x[i];
}

void divide(double* x, double d, std::size_t n) {
  const float64x2_t vd = vdupq_n_f64(d);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vdivq_f64(vld1q_f64(x + i), vd));
  for (; i < n; ++i) x[i] /= d;
}

void scale(double* x, double s, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), vs));
  for (; i < n; ++i) x[i] *= s;
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq(const double* x, std::size_t n) { return dot(x, x, n); }

double dist_sq(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    acc = vaddq_f64(acc, vmulq_f64(d, d));
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

void momentum_step(double* x, double* m, const double* g, double mu, double lr, std::size_t n) {
  const float64x2_t vmu = vdupq_n_f64(mu);
  const float64x2_t vlr = vdupq_n_f64(lr);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t mi = vaddq_f64(vmulq_f64(vmu, vld1q_f64(m + i)), vld1q_f64(g + i));
    vst1q_f64(m + i, mi);
    vst1q_f64(x + i, vsubq_f64(vld1q_f64(x + i), vmulq_f64(vlr, mi)));
  }
  for (; i < n; ++i) {
    m[i] = mu * m[i] + g[i];
    x[i] = x[i] - lr * m[i];
  }
}

void adamw_step(double* x, double* m, double* v, const double* g, double lr, double beta1,
                double beta2, double bc1, double bc2, double eps, double weight_decay,
                std::size_t n) {
  const double one_m_b1 = 1.0 - beta1;
  const double one_m_b2 = 1.0 - beta2;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gi = vld1q_f64(g + i);
    const float64x2_t xi = vld1q_f64(x + i);
    const float64x2_t mi = vaddq_f64(vmulq_f64(vdupq_n_f64(beta1), vld1q_f64(m + i)),
                                     vmulq_f64(vdupq_n_f64(one_m_b1), gi));
    const float64x2_t vi = vaddq_f64(vmulq_f64(vdupq_n_f64(beta2), vld1q_f64(v + i)),
                                     vmulq_f64(vdupq_n_f64(one_m_b2), vmulq_f64(gi, gi)));
    vst1q_f64(m + i, mi);
    vst1q_f64(v + i, vi);
    const float64x2_t m_hat = vdivq_f64(mi, vdupq_n_f64(bc1));
    const float64x2_t v_hat = vdivq_f64(vi, vdupq_n_f64(bc2));
    const float64x2_t update = vaddq_f64(vdivq_f64(m_hat, vaddq_f64(vsqrtq_f64(v_hat), vdupq_n_f64(eps))),
                                         vmulq_f64(vdupq_n_f64(weight_decay), xi));
    vst1q_f64(x + i, vsubq_f64(xi, vmulq_f64(vdupq_n_f64(lr), update)));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + one_m_b1 * g[i];
    v[i] = beta2 * v[i] + one_m_b2 * (g[i] * g[i]);
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    const double update = m_hat / (std::sqrt(v_hat) + eps) + weight_decay * x[i];
    x[i] = x[i] - lr * update;
  }
}

void nesterov_step(double* x, double* v, const double* d, double mu, double lr, std::size_t n) {
  const float64x2_t vmu = vdupq_n_f64(mu);
  const float64x2_t vlr = vdupq_n_f64(lr);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t di = vld1q_f64(d + i);
    const float64x2_t vi = vaddq_f64(vmulq_f64(vmu, vld1q_f64(v + i)), di);
    vst1q_f64(v + i, vi);
    vst1q_f64(x + i, vsubq_f64(vld1q_f64(x + i), vmulq_f64(vlr, vaddq_f64(di, vmulq_f64(vmu, vi)))));
  }
  for (; i < n; ++i) {
    v[i] = mu * v[i] + d[i];
    x[i] = x[i] - lr * (d[i] + mu * v[i]);
  }
}

}  // namespace

const KernelTable* neon_kernels() {
  static const KernelTable table{Isa::neon,  axpy,   mix,     pull,          sub,
                                 accumulate, divide, scale,   dot,           sum_sq,
                                 dist_sq,    momentum_step,   adamw_step,    nesterov_step};
  return &table;
}
#else
const KernelTable* neon_kernels() { return nullptr; }
#endif

}  // namespace palsgd::kernels
