#include <algorithm>
#include <cmath>
#include <numeric>

#include "palsgd/workloads.hpp"

namespace palsgd {

std::string_view activation_name(Activation a) {
  return a == Activation::relu ? "relu" : "tanh";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  throw ConfigError("workload.activation", "must be one of relu, tanh");
}

MlpWorkload::MlpWorkload(MlpSpec spec) : spec_(std::move(spec)) {
  const auto& w = spec_.widths;
  if (w.size() < 2) throw ConfigError("workload.widths", "need at least input and output widths");
  for (std::size_t v : w)
    if (v == 0) throw ConfigError("workload.widths", "widths must be >= 1");
  if (spec_.train.size() == 0) throw ConfigError("workload.train", "dataset is empty");
  if (spec_.train.dim != w.front())
    throw DimensionMismatch("mlp input width", w.front(), spec_.train.dim);
  if (static_cast<std::size_t>(spec_.train.classes) != w.back())
    throw DimensionMismatch("mlp output width", w.back(),
                            static_cast<std::size_t>(spec_.train.classes));
  if (spec_.batch_size == 0) throw ConfigError("workload.batch_size", "must be >= 1");

  offsets_.push_back(0);
  for (std::size_t l = 0; l + 1 < w.size(); ++l) {
    param_count_ += w[l + 1] * w[l] + w[l + 1];
    offsets_.push_back(param_count_);
  }
  all_.resize(spec_.train.size());
  std::iota(all_.begin(), all_.end(), std::size_t{0});
}

ParamVector MlpWorkload::initial_point() const {
  ParamVector x(param_count_);
  RngStream rng(spec_.init_seed, 0, StreamPurpose::init);
  const auto& w = spec_.widths;
  const double gain = spec_.activation == Activation::relu ? std::sqrt(2.0) : 1.0;
  for (std::size_t l = 0; l + 1 < w.size(); ++l) {
    const double sd = gain / std::sqrt(static_cast<double>(w[l]));
    const std::size_t n_weights = w[l + 1] * w[l];
    for (std::size_t i = 0; i < n_weights; ++i) x[offsets_[l] + i] = draw_gaussian(rng, sd);
    // biases stay at zero
  }
  return x;
}

std::pair<double, std::size_t> MlpWorkload::run_batch(const Dataset& data, const ParamVector& x,
                                                      std::span<const std::size_t> idx,
                                                      ParamVector* grad) const {
  const auto& k = kernels::active_kernels();
  const auto& w = spec_.widths;
  const std::size_t layers = w.size() - 1;
  const bool relu = spec_.activation == Activation::relu;

  // acts[0] is the input; acts[l+1] the (post-activation) output of layer l.
  std::vector<std::vector<double>> acts(w.size());
  for (std::size_t l = 0; l < w.size(); ++l) acts[l].resize(w[l]);
  std::vector<std::vector<double>> delta(w.size());
  for (std::size_t l = 0; l < w.size(); ++l) delta[l].resize(w[l]);

  if (grad) *grad = ParamVector(param_count_);
  double loss = 0.0;
  std::size_t correct = 0;

  for (std::size_t s : idx) {
    const auto row = data.row(s);
    std::copy(row.begin(), row.end(), acts[0].begin());
    for (std::size_t l = 0; l < layers; ++l) {
      const double* W = x.data() + offsets_[l];
      const double* b = W + w[l + 1] * w[l];
      auto& out = acts[l + 1];
      for (std::size_t o = 0; o < w[l + 1]; ++o) {
        double z = k.dot(W + o * w[l], acts[l].data(), w[l]) + b[o];
        if (l + 1 < layers) z = relu ? std::max(z, 0.0) : std::tanh(z);
        out[o] = z;
      }
    }

    // softmax cross-entropy on the logits
    auto& logits = acts[layers];
    const int label = data.labels[s];
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (double z : logits) denom += std::exp(z - zmax);
    const double log_denom = std::log(denom) + zmax;
    loss += log_denom - logits[static_cast<std::size_t>(label)];
    const auto argmax = static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
    if (argmax == label) ++correct;

    if (!grad) continue;
    auto& top = delta[layers];
    for (std::size_t c = 0; c < logits.size(); ++c)
      top[c] = std::exp(logits[c] - log_denom) - (static_cast<int>(c) == label ? 1.0 : 0.0);

    for (std::size_t l = layers; l-- > 0;) {
      const double* W = x.data() + offsets_[l];
      double* dW = grad->data() + offsets_[l];
      double* db = dW + w[l + 1] * w[l];
      const auto& d_out = delta[l + 1];
      const auto& a_in = acts[l];
      for (std::size_t o = 0; o < w[l + 1]; ++o) {
        k.axpy(d_out[o], a_in.data(), dW + o * w[l], dW + o * w[l], w[l]);
        db[o] += d_out[o];
      }
      if (l == 0) break;
      auto& d_in = delta[l];
      std::fill(d_in.begin(), d_in.end(), 0.0);
      for (std::size_t o = 0; o < w[l + 1]; ++o)
        k.axpy(d_out[o], W + o * w[l], d_in.data(), d_in.data(), w[l]);
      for (std::size_t i = 0; i < w[l]; ++i) {
        const double a = a_in[i];
        d_in[i] *= relu ? (a > 0.0 ? 1.0 : 0.0) : (1.0 - a * a);
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(idx.size());
  if (grad) k.scale(grad->data(), inv_n, param_count_);
  return {loss * inv_n, correct};
}

Sample MlpWorkload::draw_sample(ShardSampler& sampler, RngStream& stream) const {
  return Sample{sampler.next_batch(stream, spec_.batch_size), {}};
}

double MlpWorkload::sample_loss(const ParamVector& x, const Sample& sample) const {
  check_point("mlp sample_loss", x);
  return run_batch(spec_.train, x, sample.indices, nullptr).first;
}

ParamVector MlpWorkload::stochastic_gradient(const ParamVector& x, const Sample& sample) const {
  check_point("mlp stochastic_gradient", x);
  ParamVector g;
  run_batch(spec_.train, x, sample.indices, &g);
  return g;
}

double MlpWorkload::full_objective(const ParamVector& x) const {
  require_same_dim("mlp full_objective", x.dim(), dim());
  return run_batch(spec_.train, x, all_, nullptr).first;
}

ParamVector MlpWorkload::full_gradient(const ParamVector& x) const {
  require_same_dim("mlp full_gradient", x.dim(), dim());
  ParamVector g;
  run_batch(spec_.train, x, all_, &g);
  return g;
}

std::optional<EvalResult> MlpWorkload::evaluate(const ParamVector& x) const {
  if (!spec_.eval) return std::nullopt;
  std::vector<std::size_t> idx(spec_.eval->size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto [loss, correct] = run_batch(*spec_.eval, x, idx, nullptr);
  return EvalResult{loss, static_cast<double>(correct) / static_cast<double>(idx.size())};
}

}  // namespace palsgd
