#include "palsgd/cluster_sim.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "palsgd/errors.hpp"
#include "palsgd/rng.hpp"

namespace palsgd {

double allreduce_time(std::uint64_t bytes, std::size_t workers, const AllReduceModel& model) {
  if (workers <= 1) return 0.0;
  const double k = static_cast<double>(workers);
  const double rounds = 2.0 * (k - 1.0);
  return model.latency_s * rounds + (rounds / k) * static_cast<double>(bytes) / model.bandwidth_bytes_per_s;
}

void ClusterSpec::validate() const {
  if (workers == 0) throw ConfigError("cluster.workers", "must be >= 1");
  if (!(compute_time_s >= 0.0)) throw ConfigError("cluster.compute_time_s", "must be >= 0");
  if (!worker_multipliers.empty()) {
    if (worker_multipliers.size() != workers)
      throw ConfigError("cluster.worker_multipliers", "length must equal cluster.workers");
    for (double m : worker_multipliers)
      if (!(m >= 0.0)) throw ConfigError("cluster.worker_multipliers", "entries must be >= 0");
  }
  if (!(jitter_s >= 0.0)) throw ConfigError("cluster.jitter_s", "must be >= 0");
  if (!(mixing_cost_fraction >= 0.0))
    throw ConfigError("cluster.mixing_cost_fraction", "must be >= 0");
  if (!(allreduce.latency_s >= 0.0)) throw ConfigError("cluster.latency_s", "must be >= 0");
  if (!(allreduce.bandwidth_bytes_per_s > 0.0))
    throw ConfigError("cluster.bandwidth_bytes_per_s", "must be > 0");
  if (bytes_per_param != 4 && bytes_per_param != 8)
    throw ConfigError("cluster.bytes_per_param", "must be 4 or 8");
}

double SimClock::now() const noexcept {
  double t = global_;
  for (double w : worker_) t = std::max(t, w);
  return t;
}

void SimClock::barrier(double duration) {
  const double top = worker_.empty() ? global_ : *std::max_element(worker_.begin(), worker_.end());
  const double t = std::max(top, global_) + duration;
  std::fill(worker_.begin(), worker_.end(), t);
  global_ = t;
}

double step_cost(const ClusterSpec& spec, std::size_t k, std::uint64_t t, bool is_gradient_step) {
  const double base = spec.compute_time_s * spec.multiplier(k);
  if (!is_gradient_step) return base * spec.mixing_cost_fraction;
  if (spec.jitter_s == 0.0) return base;
  // Keyed by (k, t) so the jitter sequence is independent of branch choices.
  RngStream rng(spec.jitter_seed, static_cast<std::uint32_t>(k), StreamPurpose::jitter, t);
  return base + spec.jitter_s * draw_uniform(rng);
}

void advance_step(SimClock& clock, const ClusterSpec& spec, std::size_t k, std::uint64_t t,
                  bool is_gradient_step) {
  clock.add(k, step_cost(spec, k, t, is_gradient_step));
}

void barrier(SimClock& clock, double duration) { clock.barrier(duration); }

ClusterSim::ClusterSim(ClusterSpec spec, std::size_t params)
    : spec_(std::move(spec)), clock_(spec_.workers),
      bytes_(static_cast<std::uint64_t>(params) * spec_.bytes_per_param) {
  spec_.validate();
}

const CommEvent& ClusterSim::all_reduce(std::uint64_t t) {
  const double d = allreduce_time(bytes_, spec_.workers, spec_.allreduce);
  clock_.barrier(d);
  comm_seconds_ += d;
  events_.push_back(CommEvent{t, bytes_, d, spec_.workers});
  return events_.back();
}

void write_events_jsonl(const std::vector<CommEvent>& events, std::ostream& out) {
  for (const auto& e : events) {
    nlohmann::ordered_json j;
    j["t"] = e.t;
    j["bytes"] = e.bytes;
    j["duration_s"] = e.duration_s;
    j["k"] = e.workers;
    out << j.dump() << '\n';
  }
}

}  // namespace palsgd
