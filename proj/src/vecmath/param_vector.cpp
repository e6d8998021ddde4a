#include <cmath>

#include "palsgd/vecmath.hpp"

namespace palsgd {

ParamVector::ParamVector(std::size_t dim, double fill) : data_(dim, fill) {
  if (dim == 0) throw std::invalid_argument("ParamVector: dim must be >= 1");
}

ParamVector::ParamVector(std::vector<double> values) : data_(std::move(values)) {
  if (data_.empty()) throw std::invalid_argument("ParamVector: dim must be >= 1");
}

ParamVector::ParamVector(std::initializer_list<double> values) : data_(values) {
  if (data_.empty()) throw std::invalid_argument("ParamVector: dim must be >= 1");
}

bool ParamVector::all_finite() const noexcept {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void require_same_dim(const char* op, std::size_t a, std::size_t b) {
  if (a != b || a == 0) throw DimensionMismatch(op, a, b);
}

ParamVector axpy(double a, const ParamVector& x, const ParamVector& y) {
  require_same_dim("axpy", x.dim(), y.dim());
  ParamVector out(x.dim());
  kernels::active_kernels().axpy(a, x.data(), y.data(), out.data(), x.dim());
  return out;
}

ParamVector mix(const ParamVector& x, const ParamVector& anchor, double beta) {
  require_same_dim("mix", x.dim(), anchor.dim());
  ParamVector out(x.dim());
  kernels::active_kernels().mix(x.data(), anchor.data(), beta, out.data(), x.dim());
  return out;
}

void pull_toward(ParamVector& x, const ParamVector& anchor, double c) {
  require_same_dim("pull_toward", x.dim(), anchor.dim());
  kernels::active_kernels().pull(x.data(), anchor.data(), c, x.dim());
}

ParamVector operator-(const ParamVector& x, const ParamVector& y) {
  require_same_dim("sub", x.dim(), y.dim());
  ParamVector out(x.dim());
  kernels::active_kernels().sub(x.data(), y.data(), out.data(), x.dim());
  return out;
}

ParamVector mean_of(std::span<const ParamVector> vectors) {
  return mean_by(vectors, [](const ParamVector& v) -> const ParamVector& { return v; });
}

double l2_norm_sq(const ParamVector& x) {
  return kernels::active_kernels().sum_sq(x.data(), x.dim());
}

double distance_sq(const ParamVector& x, const ParamVector& y) {
  require_same_dim("distance_sq", x.dim(), y.dim());
  return kernels::active_kernels().dist_sq(x.data(), y.data(), x.dim());
}

double dot(const ParamVector& x, const ParamVector& y) {
  require_same_dim("dot", x.dim(), y.dim());
  return kernels::active_kernels().dot(x.data(), y.data(), x.dim());
}

}  // namespace palsgd
