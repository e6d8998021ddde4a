#include "palsgd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define PALSGD_HAVE_AVX2_KERNELS 1
#include <immintrin.h>

#include <cmath>
#endif

namespace palsgd::kernels {

#if PALSGD_HAVE_AVX2_KERNELS
namespace {

#define PALSGD_AVX2 __attribute__((target("avx2")))

// Tails fall through to the same scalar expressions so lane and tail results
// round identically.

PALSGD_AVX2 void axpy(double a, const double* x, const double* y, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = a * x[i] + y[i];
}

PALSGD_AVX2 void mix(const double* x, const double* anchor, double beta, double* out,
                     std::size_t n) {
  const double keep = 1.0 - beta;
  const __m256d vk = _mm256_set1_pd(keep);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(vk, _mm256_loadu_pd(x + i)),
                                    _mm256_mul_pd(vb, _mm256_loadu_pd(anchor + i)));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = keep * x[i] + beta * anchor[i];
}

PALSGD_AVX2 void pull(double* x, const double* anchor, double c, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d diff = _mm256_sub_pd(xi, _mm256_loadu_pd(anchor + i));
    _mm256_storeu_pd(x + i, _mm256_sub_pd(xi, _mm256_mul_pd(vc, diff)));
  }
  for (; i < n; ++i) x[i] = x[i] - c * (x[i] - anchor[i]);
}

PALSGD_AVX2 void sub(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

PALSGD_AVX2 void accumulate(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) acc[i] += x[i];
}

PALSGD_AVX2 void divide(double* x, double d, std::size_t n) {
  const __m256d vd = _mm256_set1_pd(d);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_div_pd(_mm256_loadu_pd(x + i), vd));
  for (; i < n; ++i) x[i] /= d;
}

PALSGD_AVX2 void scale(double* x, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
  for (; i < n; ++i) x[i] *= s;
}

PALSGD_AVX2 double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

PALSGD_AVX2 double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

PALSGD_AVX2 double sum_sq(const double* x, std::size_t n) { return dot(x, x, n); }

PALSGD_AVX2 double dist_sq(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

PALSGD_AVX2 void momentum_step(double* x, double* m, const double* g, double mu, double lr,
                               std::size_t n) {
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vlr = _mm256_set1_pd(lr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mi = _mm256_add_pd(_mm256_mul_pd(vmu, _mm256_loadu_pd(m + i)), _mm256_loadu_pd(g + i));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(vlr, mi)));
  }
  for (; i < n; ++i) {
    m[i] = mu * m[i] + g[i];
    x[i] = x[i] - lr * m[i];
  }
}

PALSGD_AVX2 void adamw_step(double* x, double* m, double* v, const double* g, double lr,
                            double beta1, double beta2, double bc1, double bc2, double eps,
                            double weight_decay, std::size_t n) {
  const double one_m_b1 = 1.0 - beta1;
  const double one_m_b2 = 1.0 - beta2;
  const __m256d vb1 = _mm256_set1_pd(beta1);
  const __m256d vb2 = _mm256_set1_pd(beta2);
  const __m256d v1b1 = _mm256_set1_pd(one_m_b1);
  const __m256d v1b2 = _mm256_set1_pd(one_m_b2);
  const __m256d vbc1 = _mm256_set1_pd(bc1);
  const __m256d vbc2 = _mm256_set1_pd(bc2);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m256d vwd = _mm256_set1_pd(weight_decay);
  const __m256d vlr = _mm256_set1_pd(lr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gi = _mm256_loadu_pd(g + i);
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d mi = _mm256_add_pd(_mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)), _mm256_mul_pd(v1b1, gi));
    const __m256d vi = _mm256_add_pd(_mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)),
                                     _mm256_mul_pd(v1b2, _mm256_mul_pd(gi, gi)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d m_hat = _mm256_div_pd(mi, vbc1);
    const __m256d v_hat = _mm256_div_pd(vi, vbc2);
    const __m256d update = _mm256_add_pd(_mm256_div_pd(m_hat, _mm256_add_pd(_mm256_sqrt_pd(v_hat), veps)),
                                         _mm256_mul_pd(vwd, xi));
    _mm256_storeu_pd(x + i, _mm256_sub_pd(xi, _mm256_mul_pd(vlr, update)));
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

PALSGD_AVX2 void nesterov_step(double* x, double* v, const double* d, double mu, double lr,
                               std::size_t n) {
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vlr = _mm256_set1_pd(lr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d di = _mm256_loadu_pd(d + i);
    const __m256d vi = _mm256_add_pd(_mm256_mul_pd(vmu, _mm256_loadu_pd(v + i)), di);
    _mm256_storeu_pd(v + i, vi);
    const __m256d step = _mm256_mul_pd(vlr, _mm256_add_pd(di, _mm256_mul_pd(vmu, vi)));
    _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), step));
  }
  for (; i < n; ++i) {
    v[i] = mu * v[i] + d[i];
    x[i] = x[i] - lr * (d[i] + mu * v[i]);
  }
}

#undef PALSGD_AVX2

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelTable table{Isa::avx2, axpy,   mix,     pull,          sub,
                                 accumulate, divide, scale,   dot,           sum_sq,
                                 dist_sq,    momentum_step,   adamw_step,    nesterov_step};
  return supported ? &table : nullptr;
}
#else
const KernelTable* avx2_kernels() { return nullptr; }
#endif

}  // namespace palsgd::kernels
