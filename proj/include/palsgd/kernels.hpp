#pragma once

#include <cstddef>
#include <string_view>

// Dense double-precision kernels. Every routine has a scalar reference and
// optional AVX2 / NEON variants; `active_kernels()` picks one at first use.
//
// Elementwise kernels are required to be bit-identical across variants (no
// FMA contraction, same operation order per lane). Reductions (dot, sum of
// squares) may differ in summation order and agree to ~1e-15 relative.

namespace palsgd::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // out = a*x + y
  void (*axpy)(double a, const double* x, const double* y, double* out, std::size_t n);
  // out = (1-beta)*x + beta*anchor
  void (*mix)(const double* x, const double* anchor, double beta, double* out, std::size_t n);
  // x -= c*(x - anchor), in place
  void (*pull)(double* x, const double* anchor, double c, std::size_t n);
  // out = x - y
  void (*sub)(const double* x, const double* y, double* out, std::size_t n);
  // acc += x
  void (*accumulate)(double* acc, const double* x, std::size_t n);
  // x /= d
  void (*divide)(double* x, double d, std::size_t n);
  // x *= s
  void (*scale)(double* x, double s, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum_sq)(const double* x, std::size_t n);
  double (*dist_sq)(const double* x, const double* y, std::size_t n);
  // m = mu*m + g; x -= lr*m   (mu = 0 gives plain SGD with m = g)
  void (*momentum_step)(double* x, double* m, const double* g, double mu, double lr,
                        std::size_t n);
  // Decoupled-weight-decay Adam update; bc1/bc2 are 1 - beta^step.
  void (*adamw_step)(double* x, double* m, double* v, const double* g, double lr, double beta1,
                     double beta2, double bc1, double bc2, double eps, double weight_decay,
                     std::size_t n);
  // v = mu*v + d; x -= lr*(d + mu*v)
  void (*nesterov_step)(double* x, double* v, const double* d, double mu, double lr,
                        std::size_t n);
};

const KernelTable& scalar_kernels();
// Null when the variant is not compiled in or not supported by the CPU.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Best table for this CPU. `PALSGD_ISA=scalar|avx2|neon` overrides the choice
/// (an unavailable request falls back to scalar).
const KernelTable& active_kernels();

}  // namespace palsgd::kernels
