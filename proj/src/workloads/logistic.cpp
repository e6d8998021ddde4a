#include <cmath>
#include <numeric>

#include "palsgd/workloads.hpp"

namespace palsgd {
namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_binary(const Dataset& d, const char* field) {
  if (d.size() == 0) throw ConfigError(field, "dataset is empty");
  for (int y : d.labels)
    if (y != 0 && y != 1) throw ConfigError(field, "logistic labels must be 0 or 1");
}

}  // namespace

LogisticWorkload::LogisticWorkload(LogisticSpec spec) : spec_(std::move(spec)) {
  check_binary(spec_.train, "workload.train");
  if (spec_.eval) check_binary(*spec_.eval, "workload.eval");
  if (!(spec_.l2_reg >= 0.0)) throw ConfigError("workload.l2_reg", "must be >= 0");
  if (spec_.batch_size == 0) throw ConfigError("workload.batch_size", "must be >= 1");
  all_.resize(spec_.train.size());
  std::iota(all_.begin(), all_.end(), std::size_t{0});
}

double LogisticWorkload::batch_loss(const Dataset& data, const ParamVector& x,
                                    std::span<const std::size_t> idx, ParamVector* grad) const {
  const std::size_t d = data.dim;
  const auto& k = kernels::active_kernels();
  if (grad) *grad = ParamVector(dim());
  double loss = 0.0;
  for (std::size_t i : idx) {
    const auto a = data.row(i);
    const double z = k.dot(x.data(), a.data(), d) + x[d];
    const double y = data.labels[i];
    loss += softplus(z) - y * z;
    if (grad) {
      const double dz = sigmoid(z) - y;
      k.axpy(dz, a.data(), grad->data(), grad->data(), d);
      (*grad)[d] += dz;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(idx.size());
  loss *= inv_n;
  if (spec_.l2_reg > 0.0) loss += 0.5 * spec_.l2_reg * l2_norm_sq(x);
  if (grad) {
    k.scale(grad->data(), inv_n, dim());
    if (spec_.l2_reg > 0.0) k.axpy(spec_.l2_reg, x.data(), grad->data(), grad->data(), dim());
  }
  return loss;
}

Sample LogisticWorkload::draw_sample(ShardSampler& sampler, RngStream& stream) const {
  return Sample{sampler.next_batch(stream, spec_.batch_size), {}};
}

double LogisticWorkload::sample_loss(const ParamVector& x, const Sample& sample) const {
  check_point("logistic sample_loss", x);
  return batch_loss(spec_.train, x, sample.indices, nullptr);
}

ParamVector LogisticWorkload::stochastic_gradient(const ParamVector& x,
                                                  const Sample& sample) const {
  check_point("logistic stochastic_gradient", x);
  ParamVector g;
  batch_loss(spec_.train, x, sample.indices, &g);
  return g;
}

double LogisticWorkload::full_objective(const ParamVector& x) const {
  require_same_dim("logistic full_objective", x.dim(), dim());
  return batch_loss(spec_.train, x, all_, nullptr);
}

ParamVector LogisticWorkload::full_gradient(const ParamVector& x) const {
  require_same_dim("logistic full_gradient", x.dim(), dim());
  ParamVector g;
  batch_loss(spec_.train, x, all_, &g);
  return g;
}

std::optional<EvalResult> LogisticWorkload::evaluate(const ParamVector& x) const {
  if (!spec_.eval) return std::nullopt;
  const Dataset& data = *spec_.eval;
  const auto& k = kernels::active_kernels();
  double loss = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double z = k.dot(x.data(), data.row(i).data(), data.dim) + x[data.dim];
    loss += softplus(z) - data.labels[i] * z;
    if ((z > 0.0) == (data.labels[i] == 1)) ++correct;
  }
  const double n = static_cast<double>(data.size());
  return EvalResult{loss / n, static_cast<double>(correct) / n};
}

}  // namespace palsgd
