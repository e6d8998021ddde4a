#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "palsgd/cluster_sim.hpp"
#include "palsgd/optimizers.hpp"
#include "palsgd/rng.hpp"
#include "palsgd/vecmath.hpp"
#include "palsgd/workloads.hpp"

namespace palsgd {

enum class Variant { ddp, local_sgd, diloco, palsgd, palsgd_theory };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

enum class LrShape { constant, warmup_cosine };

std::string_view lr_shape_name(LrShape s);
LrShape parse_lr_shape(std::string_view name);

/// Step sizes and sync structure for one run.
struct Schedule {
  double alpha = 0.01;  // inner learning rate (peak value for warmup_cosine)
  double eta = 1.0;     // mixing rate
  double p = 0.0;       // pseudo-sync probability
  std::size_t sync_interval = 1;  // H
  std::size_t warmup_steps = 0;   // DDP phase, rounded up to a multiple of H
  std::size_t total_steps = 0;    // T
  LrShape lr_shape = LrShape::constant;
  std::size_t lr_warmup_steps = 0;
  double min_lr_ratio = 0.0;
  // Set by theory_schedule: the averaged iterate uses w_t = (1 - mu*alpha)^-(t+1).
  std::optional<double> averaging_mu;

  double alpha_at(std::size_t t) const;
  double eta_at(std::size_t) const { return eta; }
  /// Warmup length after rounding up to a multiple of H (capped at T).
  std::size_t effective_warmup() const;
  /// `theory` adds p in (0, 1/2] and alpha*eta == p/(2H).
  void validate(bool theory) const;
};

/// Constant schedule of the strongly convex convergence theorem:
/// alpha = min(p/(48 L H), ln(mu^2 d0 T^2 K / sigma^2)/(mu T)),
/// eta = p/(2 H alpha). sigma == 0 (or a non-positive log argument) leaves
/// only the first branch. alpha is nudged down by a few ulps when needed so
/// that alpha * eta == p/(2H) holds exactly in double precision.
Schedule theory_schedule(double mu, double smoothness, double p, std::size_t sync_interval,
                         std::size_t total_steps, std::size_t workers, double sigma, double d0);

/// w_t / Z_t for w_t = (1 - rate)^-(t+1), Z_t = sum_{s<=t} w_s, evaluated
/// without forming w_t (which overflows for long runs).
double averaging_increment(double rate, std::size_t t);

struct AlgoVariant {
  Variant variant = Variant::palsgd;
  InnerOptConfig inner;
  OuterOptConfig outer;

  /// Applies the fixed parts of each variant (local_sgd forces outer sgd
  /// lr 1; palsgd_theory also forces inner sgd).
  AlgoVariant normalized() const;
};

struct WorkerState {
  std::uint32_t index = 0;
  ParamVector x;       // local model
  ParamVector anchor;  // worker-resident copy of the last synced global model
  InnerOptState opt;
  ShardSampler sampler;
  RngStream data_rng;
  RngStream bernoulli_rng;
  std::uint64_t gradient_steps = 0;
  std::uint64_t mixing_steps = 0;
};

std::vector<WorkerState> make_workers(const Workload& workload, std::size_t workers,
                                      const InnerOptConfig& inner, std::uint64_t seed,
                                      DrawPolicy policy = DrawPolicy::with_replacement);

enum class StepBranch { gradient, mixing };

/// One PALSGD local step. Draws b from the Bernoulli stream; b <= p mixes
/// toward the anchor with coefficient alpha_t*eta_t/p (no data, inner state
/// untouched), otherwise takes an inner step with lr alpha_t/(1-p). p == 0
/// disables the mixing branch and consumes no Bernoulli draws.
StepBranch palsgd_local_step(WorkerState& worker, const Workload& workload,
                             const Schedule& schedule, std::size_t t);

/// Plain local gradient step with lr alpha_t (Local SGD, DiLoCo).
void local_sgd_step(WorkerState& worker, const Workload& workload, const Schedule& schedule,
                    std::size_t t);

/// All-reduce of the outer gradient delta = mean_k(anchor - x_k) in
/// ascending worker order, outer step on the global model, then every
/// worker's x and anchor are reset to it. Appends one CommEvent.
CommEvent sync_round(std::span<WorkerState> workers, ParamVector& global, OuterOptState& outer,
                     ClusterSim& cluster, std::size_t t);

/// Gradient all-reduce step: every worker applies the mean gradient.
/// Workers must hold identical models on entry and do again on exit.
CommEvent ddp_step(std::span<WorkerState> workers, ParamVector& global, const Workload& workload,
                   const Schedule& schedule, ClusterSim& cluster, std::size_t t);

struct ConsensusProbe {
  double xi = 0.0;              // (1/K) sum ||x_k - anchor_k||^2
  double mean_model_dist = 0.0;  // (1/K) sum ||x_k - mean(x)||^2
};

ConsensusProbe consensus_probe(std::span<const WorkerState> workers);

ParamVector mean_model(std::span<const WorkerState> workers);

struct StepRecord {
  std::size_t t = 0;
  double sim_time_s = 0.0;
  double loss = 0.0;  // suboptimality of the mean model, or its training loss
  std::optional<EvalResult> eval;
  double xi = 0.0;
  double mean_model_dist = 0.0;
  std::size_t comm_events = 0;
  double comm_seconds = 0.0;
};

struct Diagnostics {
  std::vector<double> xi;           // every step, after any sync
  std::vector<std::uint8_t> synced; // 1 where the step ended with a sync
  std::vector<StepRecord> records;  // at the metrics cadence
};

struct DivergenceReport {
  std::size_t step = 0;
  std::optional<StepRecord> last_finite;
};

struct TrainerOptions {
  AlgoVariant algorithm;
  Schedule schedule;
  ClusterSpec cluster;
  std::uint64_t seed = 0;
  DrawPolicy draw_policy = DrawPolicy::with_replacement;
  std::size_t metrics_every = 1;
  // Receives each StepRecord as it is produced.
  std::function<void(const StepRecord&)> on_record;
  // Called after every step with the worker states and global model.
  std::function<void(std::size_t, std::span<const WorkerState>, const ParamVector&)> on_step;
};

struct TrainResult {
  ParamVector global;
  std::optional<ParamVector> weighted_average;  // theory schedule only
  Diagnostics diagnostics;
  std::vector<CommEvent> events;
  double sim_time_s = 0.0;
  double comm_seconds = 0.0;
  std::size_t steps_completed = 0;
  std::optional<DivergenceReport> divergence;
  std::vector<std::uint64_t> gradient_steps;  // per worker
  std::vector<std::uint64_t> mixing_steps;    // per worker

  bool diverged() const noexcept { return divergence.has_value(); }
};

/// Runs `effective_warmup()` DDP steps, then the selected variant, for
/// schedule.total_steps steps. A partial final round ends with a sync.
/// Non-finite parameters stop the run with a DivergenceReport.
TrainResult run_training(const Workload& workload, const TrainerOptions& options);

}  // namespace palsgd
