#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "palsgd/rng.hpp"
#include "palsgd/vecmath.hpp"

namespace palsgd {

// ---------------------------------------------------------------------------
// Datasets and sharding

/// Dense labelled dataset, features row-major (n x dim).
struct Dataset {
  std::size_t dim = 0;
  int classes = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const double> row(std::size_t i) const noexcept {
    return {features.data() + i * dim, dim};
  }
};

/// Gaussian-mixture classification data. Each class owns
/// `clusters_per_class` centres drawn from N(0, separation^2 I); a sample is
/// its centre plus N(0, cluster_std^2 I).
struct ClassificationSpec {
  int classes = 10;
  std::size_t dim = 16;
  std::size_t samples_per_class = 100;
  int clusters_per_class = 1;
  double separation = 1.0;
  double cluster_std = 1.0;
};

/// Deterministic in (spec, seed, split). Splits share cluster centres and
/// differ only in the sample draws, so split 1 is a held-out set for split 0.
Dataset generate_synthetic_classification(const ClassificationSpec& spec, std::uint64_t seed,
                                          std::uint32_t split = 0);

/// CSV with columns f0..f{d-1},label.
void write_dataset_csv(const Dataset& data, std::ostream& out);

/// One worker's slice of the training set.
struct Shard {
  std::uint32_t worker = 0;
  std::vector<std::size_t> indices;
};

/// Random partition of [0, n) into K shards whose sizes differ by at most one
/// (the first n mod K shards get the extra element). Depends only on
/// (n, K, seed).
std::vector<Shard> shard_dataset(std::size_t n, std::size_t workers, std::uint64_t seed);

enum class DrawPolicy { with_replacement, epoch_shuffle };

/// Draws minibatches from a shard. With-replacement sampling is stateless;
/// epoch shuffling walks a per-epoch permutation keyed by the draw stream.
class ShardSampler {
 public:
  ShardSampler() = default;
  ShardSampler(Shard shard, DrawPolicy policy) : shard_(std::move(shard)), policy_(policy) {}

  const Shard& shard() const noexcept { return shard_; }
  std::vector<std::size_t> next_batch(RngStream& stream, std::size_t batch);

 private:
  Shard shard_;
  DrawPolicy policy_ = DrawPolicy::with_replacement;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

// ---------------------------------------------------------------------------
// Workloads

/// A realization of xi: either dataset indices or a shift of the optimum.
struct Sample {
  std::vector<std::size_t> indices;
  ParamVector shift;
};

struct EvalResult {
  double loss = 0.0;
  double accuracy = 0.0;
};

/// Stochastic objective F(x) = E f(x, xi). Immutable after construction;
/// every member is safe to call concurrently.
class Workload {
 public:
  virtual ~Workload() = default;

  virtual std::string_view kind() const noexcept = 0;
  virtual std::size_t dim() const noexcept = 0;
  virtual ParamVector initial_point() const = 0;

  /// Training-set size, 0 for workloads with an unbounded sample space.
  virtual std::size_t dataset_size() const noexcept { return 0; }

  virtual Sample draw_sample(ShardSampler& sampler, RngStream& stream) const = 0;

  /// f(x, xi)
  virtual double sample_loss(const ParamVector& x, const Sample& sample) const = 0;
  /// grad f(x, xi)
  virtual ParamVector stochastic_gradient(const ParamVector& x, const Sample& sample) const = 0;

  /// F(x), exact (closed form or full-dataset mean).
  virtual double full_objective(const ParamVector& x) const = 0;
  virtual ParamVector full_gradient(const ParamVector& x) const = 0;

  /// F(x*) when the optimum is known.
  virtual std::optional<double> optimum_value() const { return std::nullopt; }

  /// Held-out metrics when the workload has an eval split.
  virtual std::optional<EvalResult> evaluate(const ParamVector&) const { return std::nullopt; }

  /// Suboptimality F(x) - F(x*) when x* is known, otherwise F(x).
  virtual double progress_loss(const ParamVector& x) const;

 protected:
  void check_point(const char* op, const ParamVector& x) const;
};

// Quadratic -----------------------------------------------------------------

/// f(x, xi) = 1/2 (x - x* - xi)^T A (x - x* - xi), A = diag(hessian_diag),
/// xi ~ N(0, s^2 I) with s^2 = noise_sigma^2 / sum(a_i^2), which makes
/// E||grad f(x*, xi)||^2 = noise_sigma^2 exactly.
struct QuadraticSpec {
  std::vector<double> hessian_diag;
  ParamVector x_star;
  double noise_sigma = 0.0;

  std::size_t dim() const noexcept { return hessian_diag.size(); }
  double mu() const;
  double smoothness() const;
  double noise_scale() const;
  void validate() const;
};

/// Eigenvalues spaced linearly on [mu, L].
std::vector<double> linear_spectrum(std::size_t dim, double mu, double smoothness);

class QuadraticWorkload final : public Workload {
 public:
  QuadraticWorkload(QuadraticSpec spec, ParamVector x0);

  const QuadraticSpec& spec() const noexcept { return spec_; }

  std::string_view kind() const noexcept override { return "quadratic"; }
  std::size_t dim() const noexcept override { return spec_.dim(); }
  ParamVector initial_point() const override { return x0_; }
  Sample draw_sample(ShardSampler& sampler, RngStream& stream) const override;
  double sample_loss(const ParamVector& x, const Sample& sample) const override;
  ParamVector stochastic_gradient(const ParamVector& x, const Sample& sample) const override;
  double full_objective(const ParamVector& x) const override;
  ParamVector full_gradient(const ParamVector& x) const override;
  std::optional<double> optimum_value() const override;
  double progress_loss(const ParamVector& x) const override { return suboptimality(x); }

  /// 1/2 (x - x*)^T A (x - x*)
  double suboptimality(const ParamVector& x) const;
  double noise_floor() const noexcept { return floor_; }

 private:
  QuadraticSpec spec_;
  ParamVector x0_;
  double scale_;
  double floor_;
};

/// Monte Carlo estimate of E||grad f(x*, xi)||^2 from n_samples draws.
double variance_at_optimum(const QuadraticWorkload& workload, std::size_t n_samples,
                           RngStream stream);

// Logistic regression ---------------------------------------------------------

/// Binary logistic regression on a two-class dataset; parameters are the
/// weights followed by a bias. The L2 term covers all parameters, so each
/// per-sample loss is l2_reg-strongly convex.
struct LogisticSpec {
  Dataset train;
  std::optional<Dataset> eval;
  double l2_reg = 0.0;
  std::size_t batch_size = 1;
};

class LogisticWorkload final : public Workload {
 public:
  explicit LogisticWorkload(LogisticSpec spec);

  std::string_view kind() const noexcept override { return "logistic"; }
  std::size_t dim() const noexcept override { return spec_.train.dim + 1; }
  ParamVector initial_point() const override { return ParamVector(dim()); }
  std::size_t dataset_size() const noexcept override { return spec_.train.size(); }
  Sample draw_sample(ShardSampler& sampler, RngStream& stream) const override;
  double sample_loss(const ParamVector& x, const Sample& sample) const override;
  ParamVector stochastic_gradient(const ParamVector& x, const Sample& sample) const override;
  double full_objective(const ParamVector& x) const override;
  ParamVector full_gradient(const ParamVector& x) const override;
  std::optional<EvalResult> evaluate(const ParamVector& x) const override;

 private:
  double batch_loss(const Dataset& data, const ParamVector& x,
                    std::span<const std::size_t> idx, ParamVector* grad) const;
  LogisticSpec spec_;
  std::vector<std::size_t> all_;
};

// MLP -----------------------------------------------------------------------

enum class Activation { relu, tanh };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

/// Fully connected network trained with softmax cross-entropy. `widths` runs
/// from input dim to class count. Parameters are laid out layer by layer as
/// W (out x in, row-major) followed by b (out).
struct MlpSpec {
  std::vector<std::size_t> widths;
  Activation activation = Activation::relu;
  Dataset train;
  std::optional<Dataset> eval;
  std::size_t batch_size = 16;
  std::uint64_t init_seed = 0;
};

class MlpWorkload final : public Workload {
 public:
  explicit MlpWorkload(MlpSpec spec);

  std::string_view kind() const noexcept override { return "mlp"; }
  std::size_t dim() const noexcept override { return param_count_; }
  ParamVector initial_point() const override;
  std::size_t dataset_size() const noexcept override { return spec_.train.size(); }
  Sample draw_sample(ShardSampler& sampler, RngStream& stream) const override;
  double sample_loss(const ParamVector& x, const Sample& sample) const override;
  ParamVector stochastic_gradient(const ParamVector& x, const Sample& sample) const override;
  double full_objective(const ParamVector& x) const override;
  ParamVector full_gradient(const ParamVector& x) const override;
  std::optional<EvalResult> evaluate(const ParamVector& x) const override;

  const MlpSpec& spec() const noexcept { return spec_; }

 private:
  // Mean loss over idx; adds the mean gradient into grad when non-null.
  // Returns {loss, correct count}.
  std::pair<double, std::size_t> run_batch(const Dataset& data, const ParamVector& x,
                                           std::span<const std::size_t> idx,
                                           ParamVector* grad) const;

  MlpSpec spec_;
  std::size_t param_count_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> all_;
};

}  // namespace palsgd
