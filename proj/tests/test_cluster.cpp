#include <doctest.h>

#include <sstream>

#include "palsgd/cluster_sim.hpp"

using namespace palsgd;

TEST_CASE("allreduce_time examples") {
  CHECK(allreduce_time(1 << 20, 1, {1e-3, 1e9}) == 0.0);
  CHECK(allreduce_time(1000, 2, {0.0, 250.0}) == 4.0);
  CHECK(allreduce_time(0, 4, {1e-3, 1e9}) == doctest::Approx(6e-3).epsilon(1e-15));
  // 2(K-1)/K of the payload crosses each link.
  CHECK(allreduce_time(800, 8, {0.0, 100.0}) == 2.0 * 7.0 / 8.0 * 8.0);
}

TEST_CASE("advance_step examples") {
  ClusterSpec spec;
  spec.workers = 4;
  spec.compute_time_s = 1.0;
  spec.mixing_cost_fraction = 0.01;
  spec.worker_multipliers = {1, 1, 1, 2};
  SimClock clock(4);
  advance_step(clock, spec, 0, 0, true);
  CHECK(clock.worker_time(0) == 1.0);
  advance_step(clock, spec, 1, 0, false);
  CHECK(clock.worker_time(1) == 0.01);
  advance_step(clock, spec, 3, 0, true);
  CHECK(clock.worker_time(3) == 2.0);
}

TEST_CASE("barrier examples") {
  SimClock c(2);
  c.add(0, 2.0);
  c.add(1, 2.0);
  barrier(c, 0.0);
  CHECK(c.worker_times() == std::vector<double>{2.0, 2.0});

  SimClock d(2);
  d.add(0, 1.0);
  d.add(1, 3.0);
  SimClock e = d;
  barrier(d, 0.0);
  CHECK(d.worker_times() == std::vector<double>{3.0, 3.0});
  barrier(e, 2.0);
  CHECK(e.worker_times() == std::vector<double>{5.0, 5.0});
  CHECK(e.global_time() == 5.0);
}

TEST_CASE("jitter is deterministic and bounded") {
  ClusterSpec spec;
  spec.workers = 2;
  spec.compute_time_s = 1.0;
  spec.jitter_s = 0.5;
  spec.jitter_seed = 3;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const double c = step_cost(spec, 1, t, true);
    CHECK(c >= 1.0);
    CHECK(c < 1.5);
    CHECK(c == step_cost(spec, 1, t, true));
  }
  CHECK(step_cost(spec, 1, 0, false) == 1.0 * spec.mixing_cost_fraction);
}

TEST_CASE("cluster spec validation") {
  ClusterSpec spec;
  spec.workers = 0;
  CHECK_THROWS(spec.validate());
  spec.workers = 2;
  spec.worker_multipliers = {1.0};
  CHECK_THROWS(spec.validate());
  spec.worker_multipliers = {};
  spec.allreduce.bandwidth_bytes_per_s = 0.0;
  CHECK_THROWS(spec.validate());
}

TEST_CASE("event log and jsonl") {
  ClusterSpec spec;
  spec.workers = 2;
  spec.bytes_per_param = 8;
  spec.allreduce = {0.0, 16.0};
  ClusterSim sim(spec, 4);
  sim.local_step(0, 0, true);
  const CommEvent e = sim.all_reduce(0);
  CHECK(e.bytes == 32);
  CHECK(e.duration_s == 2.0);
  CHECK(sim.clock().global_time() == spec.compute_time_s + 2.0);
  std::ostringstream os;
  write_events_jsonl(sim.events(), os);
  CHECK(os.str() == "{\"t\":0,\"bytes\":32,\"duration_s\":2.0,\"k\":2}\n");
}
