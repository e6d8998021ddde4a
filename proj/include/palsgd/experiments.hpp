#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "palsgd/algorithms.hpp"

namespace palsgd {

using Json = nlohmann::ordered_json;

inline constexpr int kMetricsSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Configuration

enum class WorkloadKind { quadratic, logistic, mlp };

struct QuadraticConfig {
  std::vector<double> hessian_diag;
  double noise_sigma = 1.0;
  std::vector<double> x_star;  // empty means zeros
  double init_distance_sq = 1.0;
};

struct ClassificationConfig {
  ClassificationSpec data;
  std::size_t eval_samples_per_class = 0;
  std::vector<std::size_t> hidden;  // mlp only
  Activation activation = Activation::relu;
  double l2_reg = 0.0;  // logistic only
  std::size_t batch_size = 16;
};

struct WorkloadConfig {
  WorkloadKind kind = WorkloadKind::quadratic;
  QuadraticConfig quadratic;
  ClassificationConfig classification;
  std::uint64_t data_seed = 0;
};

struct TheoryCheckConfig {
  std::size_t seeds = 10;
  std::vector<std::size_t> worker_counts{1, 2, 4, 8};
  std::vector<std::size_t> sync_intervals{2, 4, 8};
  std::size_t interval_probe_steps = 2000;
  double slope_min = -1.15;
  double slope_max = -0.7;
  double doubling_min_ratio = 1.6;
  double noiseless_threshold = 1e-10;
};

struct GradcheckConfig {
  std::size_t probes = 10;
  double step = 1e-5;
  double tolerance = 1e-4;
  double perturbation = 0.5;
};

/// Fully validated run description.
struct RunConfig {
  WorkloadConfig workload;
  AlgoVariant algorithm;
  Schedule schedule;
  ClusterSpec cluster;
  DrawPolicy draw_policy = DrawPolicy::with_replacement;
  std::uint64_t seed = 0;
  std::size_t metrics_every = 1;
  std::string output_dir = "runs/default";
  TheoryCheckConfig theory;
  GradcheckConfig gradcheck;
};

/// Parses and validates a JSON config. Unknown keys and constraint
/// violations raise ConfigError naming the field.
RunConfig parse_config(const std::string& text);
RunConfig parse_config(const Json& doc);
inline RunConfig parse_config(const char* text) { return parse_config(std::string(text)); }

/// Normalized dump with every default filled in; parse_config(dump) gives
/// back an equal config.
Json config_to_json(const RunConfig& config);

/// Metrics cadence used when none is configured.
std::size_t default_metrics_every(std::size_t total_steps);

std::unique_ptr<Workload> build_workload(const RunConfig& config);

/// Trainer options for `config`, resolving the theory schedule when the
/// variant asks for it.
TrainerOptions make_trainer_options(const RunConfig& config, const Workload& workload);

// ---------------------------------------------------------------------------
// Metrics

struct MetricsRecord {
  int schema = kMetricsSchemaVersion;
  std::uint64_t t = 0;
  double sim_time_s = 0.0;
  double loss = 0.0;
  std::optional<double> eval_loss;
  std::optional<double> eval_accuracy;
  double xi = 0.0;
  std::uint64_t comm_events = 0;
  double comm_seconds = 0.0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

MetricsRecord to_metrics_record(const StepRecord& rec);
Json to_json(const MetricsRecord& rec);
MetricsRecord metrics_from_json(const Json& j);
std::string emit_metrics_line(const MetricsRecord& rec);
MetricsRecord parse_metrics_line(const std::string& line);

struct RunSummary {
  std::optional<double> final_loss;
  std::optional<double> best_loss;
  std::optional<double> final_eval_loss;
  std::optional<double> final_eval_accuracy;
  double total_sim_seconds = 0.0;
  std::uint64_t sync_count = 0;
  bool diverged = false;
  std::optional<std::uint64_t> divergence_step;
  std::uint64_t steps_completed = 0;
};

Json to_json(const RunSummary& s);
RunSummary summary_from_json(const Json& j);

// ---------------------------------------------------------------------------
// Execution

struct ExperimentOutput {
  RunSummary summary;
  TrainResult result;
};

/// Runs one experiment. When `out_dir` is set, writes config.json,
/// metrics.jsonl, events.jsonl and summary.json there.
ExperimentOutput run_experiment(const RunConfig& config,
                                const std::optional<std::filesystem::path>& out_dir);

/// Grid cell outcome; `error` is set when the cell's config was rejected or
/// the run threw.
struct SweepCell {
  std::vector<std::string> params;
  std::vector<Json> values;
  std::optional<RunSummary> summary;
  std::string error;
};

/// Cartesian product over `grid` (dotted config path -> list of values),
/// one run directory per cell under out_dir, plus sweep.csv. Failing cells
/// are recorded and the sweep continues.
std::vector<SweepCell> sweep(const Json& base, const Json& grid,
                             const std::optional<std::filesystem::path>& out_dir,
                             std::size_t jobs = 1);

void write_sweep_csv(const std::vector<SweepCell>& cells, std::ostream& out);

/// Sets `value` at a dotted path ("schedule.H") inside `doc`, creating
/// intermediate objects.
void set_dotted(Json& doc, const std::string& path, const Json& value);

// ---------------------------------------------------------------------------
// Theory verification and gradient checks

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares fit of ln(y) against ln(x).
LogLogFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y);

struct SeedStats {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

SeedStats seed_stats(const std::vector<double>& values);

/// Runs the K sweep, the H probe, the T-doubling probe (or the noiseless
/// check when sigma == 0) and returns a JSON report with a top-level "pass".
Json verify_theory(const RunConfig& config);

struct GradcheckProbe {
  double relative_error = 0.0;
  double analytic_norm = 0.0;
};

struct GradcheckReport {
  std::vector<GradcheckProbe> probes;
  double max_relative_error = 0.0;
  bool pass = false;
};

/// Central finite differences of f(x, xi) at random points against
/// stochastic_gradient. Error per probe is ||g_a - g_fd|| / max(||g_a||, ||g_fd||).
GradcheckReport gradcheck(const Workload& workload, const GradcheckConfig& config,
                          std::uint64_t seed);

Json to_json(const GradcheckReport& r);

}  // namespace palsgd
