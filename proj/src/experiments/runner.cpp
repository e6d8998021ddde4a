#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "palsgd/experiments.hpp"

namespace palsgd {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

RunSummary summarize(const TrainResult& r) {
  RunSummary s;
  s.total_sim_seconds = r.sim_time_s;
  s.sync_count = r.events.size();
  s.steps_completed = r.steps_completed;
  s.diverged = r.diverged();
  if (s.diverged) s.divergence_step = r.divergence->step;
  const auto& recs = r.diagnostics.records;
  for (const auto& rec : recs)
    if (!s.best_loss || rec.loss < *s.best_loss) s.best_loss = rec.loss;
  if (!s.diverged && !recs.empty()) {
    s.final_loss = recs.back().loss;
    if (recs.back().eval) {
      s.final_eval_loss = recs.back().eval->loss;
      s.final_eval_accuracy = recs.back().eval->accuracy;
    }
  }
  return s;
}

}  // namespace

ExperimentOutput run_experiment(const RunConfig& config,
                                const std::optional<std::filesystem::path>& out_dir) {
  const auto workload = build_workload(config);
  TrainerOptions options = make_trainer_options(config, *workload);

  std::ofstream metrics;
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    auto cfg_out = open_out(*out_dir / "config.json");
    cfg_out << config_to_json(config).dump(2) << '\n';
    metrics = open_out(*out_dir / "metrics.jsonl");
    options.on_record = [&metrics](const StepRecord& rec) {
      metrics << emit_metrics_line(to_metrics_record(rec)) << '\n';
    };
  }

  ExperimentOutput out;
  out.result = run_training(*workload, options);
  out.summary = summarize(out.result);

  if (out_dir) {
    metrics.close();
    auto events = open_out(*out_dir / "events.jsonl");
    write_events_jsonl(out.result.events, events);
    auto summary = open_out(*out_dir / "summary.json");
    summary << to_json(out.summary).dump(2) << '\n';
  }
  return out;
}

}  // namespace palsgd
