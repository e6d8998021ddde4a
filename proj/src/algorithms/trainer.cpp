#include <cmath>
#include <string>

#include "palsgd/algorithms.hpp"

namespace palsgd {
namespace {

bool all_finite(std::span<const WorkerState> workers, const ParamVector& global) {
  if (!global.all_finite()) return false;
  for (const auto& w : workers)
    if (!w.x.all_finite()) return false;
  return true;
}

}  // namespace

TrainResult run_training(const Workload& workload, const TrainerOptions& options) {
  const AlgoVariant algo = options.algorithm.normalized();
  const Schedule& schedule = options.schedule;
  const bool theory = algo.variant == Variant::palsgd_theory;
  schedule.validate(theory);
  if (theory && !schedule.averaging_mu)
    throw ConfigError("schedule", "theory mode needs a schedule built by theory_schedule");
  if ((algo.variant == Variant::local_sgd || algo.variant == Variant::diloco) && schedule.p != 0.0)
    throw ConfigError("schedule.p", std::string(variant_name(algo.variant)) + " requires p == 0");

  const std::size_t K = options.cluster.workers;
  const std::size_t T = schedule.total_steps;
  const std::size_t H = schedule.sync_interval;
  const std::size_t every = options.metrics_every == 0 ? 1 : options.metrics_every;
  const bool ddp_only = algo.variant == Variant::ddp;
  const bool pseudo_sync = algo.variant == Variant::palsgd || theory;
  const std::size_t warmup = ddp_only ? T : schedule.effective_warmup();

  std::vector<WorkerState> workers =
      make_workers(workload, K, algo.inner, options.seed, options.draw_policy);
  ParamVector global = workers.front().x;
  OuterOptState outer(algo.outer);
  ClusterSim cluster(options.cluster, workload.dim());

  TrainResult result;
  result.diagnostics.xi.reserve(T);
  result.diagnostics.synced.reserve(T);
  std::optional<ParamVector> averaged;
  const double avg_rate = schedule.averaging_mu ? *schedule.averaging_mu * schedule.alpha : 0.0;

  for (std::size_t t = 0; t < T; ++t) {
    if (schedule.averaging_mu) {
      // x_hat over the global models x^(0..T-1), each weighted by w_t.
      if (!averaged) {
        averaged = global;
      } else {
        const double r = averaging_increment(avg_rate, t);
        const ParamVector diff = global - *averaged;
        kernels::active_kernels().axpy(r, diff.data(), averaged->data(), averaged->data(), diff.dim());
      }
    }

    bool synced = false;
    if (t < warmup) {
      ddp_step(workers, global, workload, schedule, cluster, t);
      synced = true;
    } else {
      for (auto& w : workers) {
        bool gradient = true;
        if (pseudo_sync)
          gradient = palsgd_local_step(w, workload, schedule, t) == StepBranch::gradient;
        else
          local_sgd_step(w, workload, schedule, t);
        cluster.local_step(w.index, t, gradient);
      }
      if ((t + 1) % H == 0 || t + 1 == T) {
        sync_round(workers, global, outer, cluster, t);
        synced = true;
      }
    }

    if (!all_finite(workers, global)) {
      DivergenceReport report;
      report.step = t;
      if (!result.diagnostics.records.empty()) report.last_finite = result.diagnostics.records.back();
      result.divergence = report;
      break;
    }

    const ConsensusProbe probe = consensus_probe(workers);
    result.diagnostics.xi.push_back(probe.xi);
    result.diagnostics.synced.push_back(synced ? 1 : 0);
    result.steps_completed = t + 1;

    if ((t + 1) % every == 0 || t + 1 == T) {
      StepRecord rec;
      rec.t = t;
      rec.sim_time_s = cluster.clock().now();
      const ParamVector mean = mean_model(workers);
      rec.loss = workload.progress_loss(mean);
      rec.eval = workload.evaluate(mean);
      rec.xi = probe.xi;
      rec.mean_model_dist = probe.mean_model_dist;
      rec.comm_events = cluster.events().size();
      rec.comm_seconds = cluster.comm_seconds();
      if (options.on_record) options.on_record(rec);
      result.diagnostics.records.push_back(std::move(rec));
    }
    if (options.on_step) options.on_step(t, workers, global);
  }

  cluster.finish();
  result.global = std::move(global);
  result.weighted_average = std::move(averaged);
  result.events = cluster.events();
  result.sim_time_s = cluster.clock().global_time();
  result.comm_seconds = cluster.comm_seconds();
  for (const auto& w : workers) {
    result.gradient_steps.push_back(w.gradient_steps);
    result.mixing_steps.push_back(w.mixing_steps);
  }
  return result;
}

}  // namespace palsgd
