#include <cmath>

#include "palsgd/algorithms.hpp"

namespace palsgd {

std::vector<WorkerState> make_workers(const Workload& workload, std::size_t workers,
                                      const InnerOptConfig& inner, std::uint64_t seed,
                                      DrawPolicy policy) {
  if (workers == 0) throw std::invalid_argument("make_workers: K must be >= 1");
  std::vector<Shard> shards;
  if (workload.dataset_size() > 0) shards = shard_dataset(workload.dataset_size(), workers, seed);

  const ParamVector x0 = workload.initial_point();
  std::vector<WorkerState> out(workers);
  for (std::size_t k = 0; k < workers; ++k) {
    auto& w = out[k];
    w.index = static_cast<std::uint32_t>(k);
    w.x = x0;
    w.anchor = x0;
    w.opt = InnerOptState(inner);
    Shard shard = shards.empty() ? Shard{w.index, {}} : std::move(shards[k]);
    w.sampler = ShardSampler(std::move(shard), policy);
    w.data_rng = RngStream(seed, w.index, StreamPurpose::data);
    w.bernoulli_rng = RngStream(seed, w.index, StreamPurpose::bernoulli);
  }
  return out;
}

StepBranch palsgd_local_step(WorkerState& worker, const Workload& workload,
                             const Schedule& schedule, std::size_t t) {
  const double alpha = schedule.alpha_at(t);
  const double p = schedule.p;
  if (p > 0.0) {
    const double b = draw_uniform(worker.bernoulli_rng);
    if (b <= p) {
      pull_toward(worker.x, worker.anchor, alpha * schedule.eta_at(t) / p);
      ++worker.mixing_steps;
      return StepBranch::mixing;
    }
  }
  const Sample sample = workload.draw_sample(worker.sampler, worker.data_rng);
  const ParamVector g = workload.stochastic_gradient(worker.x, sample);
  worker.opt.apply(worker.x, g, alpha / (1.0 - p));
  ++worker.gradient_steps;
  return StepBranch::gradient;
}

void local_sgd_step(WorkerState& worker, const Workload& workload, const Schedule& schedule,
                    std::size_t t) {
  const Sample sample = workload.draw_sample(worker.sampler, worker.data_rng);
  const ParamVector g = workload.stochastic_gradient(worker.x, sample);
  worker.opt.apply(worker.x, g, schedule.alpha_at(t));
  ++worker.gradient_steps;
}

CommEvent sync_round(std::span<WorkerState> workers, ParamVector& global, OuterOptState& outer,
                     ClusterSim& cluster, std::size_t t) {
  if (workers.empty()) throw std::invalid_argument("sync_round: empty worker list");
  const ParamVector delta =
      mean_by(workers, [&global](const WorkerState& w) { return global - w.x; });
  outer.apply(global, delta);
  for (auto& w : workers) {
    w.x = global;
    w.anchor = global;
    if (w.opt.config().reset_on_sync) w.opt.reset();
  }
  return cluster.all_reduce(t);
}

CommEvent ddp_step(std::span<WorkerState> workers, ParamVector& global, const Workload& workload,
                   const Schedule& schedule, ClusterSim& cluster, std::size_t t) {
  if (workers.empty()) throw std::invalid_argument("ddp_step: empty worker list");
  std::vector<ParamVector> grads;
  grads.reserve(workers.size());
  for (auto& w : workers) {
    const Sample sample = workload.draw_sample(w.sampler, w.data_rng);
    grads.push_back(workload.stochastic_gradient(w.x, sample));
    cluster.local_step(w.index, t, true);
  }
  const ParamVector mean_grad = mean_of(grads);
  const double alpha = schedule.alpha_at(t);
  for (auto& w : workers) {
    w.opt.apply(w.x, mean_grad, alpha);
    w.anchor = w.x;
    ++w.gradient_steps;
  }
  global = workers.front().x;
  return cluster.all_reduce(t);
}

ParamVector mean_model(std::span<const WorkerState> workers) {
  if (workers.empty()) throw std::invalid_argument("mean_model: empty worker list");
  const ParamVector& first = workers.front().x;
  bool identical = true;
  for (const auto& w : workers.subspan(1)) {
    if (!(w.x == first)) {
      identical = false;
      break;
    }
  }
  // The sum-then-divide mean of identical copies can be off by an ulp.
  if (identical) return first;
  return mean_by(workers, [](const WorkerState& w) -> const ParamVector& { return w.x; });
}

ConsensusProbe consensus_probe(std::span<const WorkerState> workers) {
  if (workers.empty()) return {};
  ConsensusProbe probe;
  const ParamVector mean = mean_model(workers);
  for (const auto& w : workers) {
    probe.xi += distance_sq(w.x, w.anchor);
    probe.mean_model_dist += distance_sq(w.x, mean);
  }
  const double k = static_cast<double>(workers.size());
  probe.xi /= k;
  probe.mean_model_dist /= k;
  return probe;
}

}  // namespace palsgd
