#include <algorithm>
#include <cmath>
#include <numeric>

#include "palsgd/workloads.hpp"

namespace palsgd {

double Workload::progress_loss(const ParamVector& x) const {
  const double f = full_objective(x);
  if (const auto opt = optimum_value()) return f - *opt;
  return f;
}

void Workload::check_point(const char* op, const ParamVector& x) const {
  require_same_dim(op, x.dim(), dim());
  if (!x.all_finite()) throw std::domain_error(std::string(op) + ": non-finite parameters");
}

double QuadraticSpec::mu() const {
  return *std::min_element(hessian_diag.begin(), hessian_diag.end());
}

double QuadraticSpec::smoothness() const {
  return *std::max_element(hessian_diag.begin(), hessian_diag.end());
}

double QuadraticSpec::noise_scale() const {
  double sum_sq = 0.0;
  for (double a : hessian_diag) sum_sq += a * a;
  return noise_sigma / std::sqrt(sum_sq);
}

void QuadraticSpec::validate() const {
  if (hessian_diag.empty()) throw ConfigError("workload.dim", "must be >= 1");
  for (double a : hessian_diag)
    if (!(a > 0.0) || !std::isfinite(a))
      throw ConfigError("workload.hessian_diag", "entries must be finite and > 0");
  if (x_star.dim() != hessian_diag.size())
    throw DimensionMismatch("quadratic x_star", x_star.dim(), hessian_diag.size());
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw ConfigError("workload.noise_sigma", "must be finite and >= 0");
}

std::vector<double> linear_spectrum(std::size_t dim, double mu, double smoothness) {
  std::vector<double> out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out[i] = dim == 1 ? mu
                      : mu + (smoothness - mu) * static_cast<double>(i) / static_cast<double>(dim - 1);
  }
  return out;
}

QuadraticWorkload::QuadraticWorkload(QuadraticSpec spec, ParamVector x0)
    : spec_(std::move(spec)), x0_(std::move(x0)) {
  spec_.validate();
  require_same_dim("quadratic x0", x0_.dim(), spec_.dim());
  scale_ = spec_.noise_scale();
  // E_xi 1/2 xi^T A xi = 1/2 s^2 tr(A)
  floor_ = 0.5 * scale_ * scale_ *
           std::accumulate(spec_.hessian_diag.begin(), spec_.hessian_diag.end(), 0.0);
}

Sample QuadraticWorkload::draw_sample(ShardSampler&, RngStream& stream) const {
  Sample s;
  s.shift = ParamVector(dim());
  for (double& v : s.shift) v = draw_gaussian(stream, scale_);
  return s;
}

double QuadraticWorkload::sample_loss(const ParamVector& x, const Sample& sample) const {
  check_point("quadratic sample_loss", x);
  require_same_dim("quadratic sample", sample.shift.dim(), dim());
  double f = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double r = x[i] - spec_.x_star[i] - sample.shift[i];
    f += spec_.hessian_diag[i] * r * r;
  }
  return 0.5 * f;
}

ParamVector QuadraticWorkload::stochastic_gradient(const ParamVector& x,
                                                   const Sample& sample) const {
  check_point("quadratic stochastic_gradient", x);
  require_same_dim("quadratic sample", sample.shift.dim(), dim());
  ParamVector g(dim());
  for (std::size_t i = 0; i < dim(); ++i)
    g[i] = spec_.hessian_diag[i] * (x[i] - spec_.x_star[i] - sample.shift[i]);
  return g;
}

double QuadraticWorkload::suboptimality(const ParamVector& x) const {
  require_same_dim("quadratic suboptimality", x.dim(), dim());
  double f = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double r = x[i] - spec_.x_star[i];
    f += spec_.hessian_diag[i] * r * r;
  }
  return 0.5 * f;
}

double QuadraticWorkload::full_objective(const ParamVector& x) const {
  return suboptimality(x) + floor_;
}

ParamVector QuadraticWorkload::full_gradient(const ParamVector& x) const {
  require_same_dim("quadratic full_gradient", x.dim(), dim());
  ParamVector g(dim());
  for (std::size_t i = 0; i < dim(); ++i) g[i] = spec_.hessian_diag[i] * (x[i] - spec_.x_star[i]);
  return g;
}

std::optional<double> QuadraticWorkload::optimum_value() const { return floor_; }

double variance_at_optimum(const QuadraticWorkload& workload, std::size_t n_samples,
                           RngStream stream) {
  if (n_samples == 0) throw std::invalid_argument("variance_at_optimum: n_samples must be >= 1");
  ShardSampler unused;
  const ParamVector& x_star = workload.spec().x_star;
  double acc = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Sample s = workload.draw_sample(unused, stream);
    acc += l2_norm_sq(workload.stochastic_gradient(x_star, s));
  }
  return acc / static_cast<double>(n_samples);
}

}  // namespace palsgd
