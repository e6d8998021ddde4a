#include <algorithm>
#include <cmath>

#include "palsgd/experiments.hpp"

namespace palsgd {

GradcheckReport gradcheck(const Workload& workload, const GradcheckConfig& config,
                          std::uint64_t seed) {
  GradcheckReport report;
  RngStream rng(seed, 0, StreamPurpose::probe);
  Shard shard;
  for (std::size_t i = 0; i < workload.dataset_size(); ++i) shard.indices.push_back(i);
  ShardSampler sampler(std::move(shard), DrawPolicy::with_replacement);
  const ParamVector base = workload.initial_point();
  const double h = config.step;

  for (std::size_t probe = 0; probe < config.probes; ++probe) {
    ParamVector x = base;
    for (double& v : x) v += draw_gaussian(rng, config.perturbation);
    const Sample sample = workload.draw_sample(sampler, rng);
    const ParamVector g = workload.stochastic_gradient(x, sample);

    ParamVector fd(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
      ParamVector xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (workload.sample_loss(xp, sample) - workload.sample_loss(xm, sample)) / (2.0 * h);
    }
    GradcheckProbe p;
    p.analytic_norm = std::sqrt(l2_norm_sq(g));
    const double scale = std::max(p.analytic_norm, std::sqrt(l2_norm_sq(fd)));
    p.relative_error = scale == 0.0 ? 0.0 : std::sqrt(distance_sq(g, fd)) / scale;
    report.max_relative_error = std::max(report.max_relative_error, p.relative_error);
    report.probes.push_back(p);
  }
  report.pass = report.max_relative_error < config.tolerance;
  return report;
}

Json to_json(const GradcheckReport& r) {
  Json probes = Json::array();
  for (const auto& p : r.probes)
    probes.push_back({{"relative_error", p.relative_error}, {"analytic_norm", p.analytic_norm}});
  return Json{{"probes", probes}, {"max_relative_error", r.max_relative_error}, {"pass", r.pass}};
}

}  // namespace palsgd
