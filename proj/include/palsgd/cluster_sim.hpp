#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

namespace palsgd {

/// Ring all-reduce: 2(K-1) latency-bound rounds, each moving 1/K of the
/// payload, so every byte crosses the ring 2(K-1)/K times.
struct AllReduceModel {
  double latency_s = 0.0;
  double bandwidth_bytes_per_s = 1e9;
};

double allreduce_time(std::uint64_t bytes, std::size_t workers, const AllReduceModel& model);

struct ClusterSpec {
  std::size_t workers = 1;
  double compute_time_s = 1.0;
  std::vector<double> worker_multipliers;  // empty means all 1
  double jitter_s = 0.0;                   // uniform extra [0, jitter_s) per gradient step
  std::uint64_t jitter_seed = 0;
  double mixing_cost_fraction = 0.01;
  AllReduceModel allreduce;
  std::size_t bytes_per_param = 4;

  void validate() const;
  double multiplier(std::size_t k) const noexcept {
    return worker_multipliers.empty() ? 1.0 : worker_multipliers[k];
  }
};

struct CommEvent {
  std::uint64_t t = 0;
  std::uint64_t bytes = 0;
  double duration_s = 0.0;
  std::size_t workers = 0;

  friend bool operator==(const CommEvent&, const CommEvent&) = default;
};

/// Per-worker and global logical time in seconds.
class SimClock {
 public:
  SimClock() = default;
  explicit SimClock(std::size_t workers) : worker_(workers, 0.0) {}

  std::size_t workers() const noexcept { return worker_.size(); }
  double worker_time(std::size_t k) const { return worker_.at(k); }
  double global_time() const noexcept { return global_; }
  /// Latest time any worker has reached (global time between barriers).
  double now() const noexcept;
  const std::vector<double>& worker_times() const noexcept { return worker_; }

  void add(std::size_t k, double seconds) { worker_.at(k) += seconds; }
  /// Every worker jumps to max(worker times) + duration.
  void barrier(double duration);

  friend bool operator==(const SimClock&, const SimClock&) = default;

 private:
  std::vector<double> worker_;
  double global_ = 0.0;
};

/// Cost of one local step of worker k at step t. Gradient steps pay the full
/// (multiplied, jittered) compute time; pseudo-sync steps pay
/// mixing_cost_fraction of the base time times the multiplier.
double step_cost(const ClusterSpec& spec, std::size_t k, std::uint64_t t, bool is_gradient_step);

void advance_step(SimClock& clock, const ClusterSpec& spec, std::size_t k, std::uint64_t t,
                  bool is_gradient_step);
void barrier(SimClock& clock, double duration);

/// Logical-clock cluster: one owner advances it; the event log is
/// append-only.
class ClusterSim {
 public:
  ClusterSim(ClusterSpec spec, std::size_t params);

  const ClusterSpec& spec() const noexcept { return spec_; }
  const SimClock& clock() const noexcept { return clock_; }
  const std::vector<CommEvent>& events() const noexcept { return events_; }
  double comm_seconds() const noexcept { return comm_seconds_; }
  std::uint64_t payload_bytes() const noexcept { return bytes_; }

  void local_step(std::size_t k, std::uint64_t t, bool is_gradient_step) {
    advance_step(clock_, spec_, k, t, is_gradient_step);
  }
  /// Barrier plus modelled all-reduce; returns the logged event.
  const CommEvent& all_reduce(std::uint64_t t);
  /// Final zero-cost barrier so global time covers every worker.
  void finish() { clock_.barrier(0.0); }

 private:
  ClusterSpec spec_;
  SimClock clock_;
  std::uint64_t bytes_;
  std::vector<CommEvent> events_;
  double comm_seconds_ = 0.0;
};

/// One JSON object per line: {"t","bytes","duration_s","k"}.
void write_events_jsonl(const std::vector<CommEvent>& events, std::ostream& out);

}  // namespace palsgd
