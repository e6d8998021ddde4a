#include <stdexcept>

#include "palsgd/experiments.hpp"

namespace palsgd {
namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> read_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

MetricsRecord to_metrics_record(const StepRecord& rec) {
  MetricsRecord m;
  m.t = rec.t;
  m.sim_time_s = rec.sim_time_s;
  m.loss = rec.loss;
  if (rec.eval) {
    m.eval_loss = rec.eval->loss;
    m.eval_accuracy = rec.eval->accuracy;
  }
  m.xi = rec.xi;
  m.comm_events = rec.comm_events;
  m.comm_seconds = rec.comm_seconds;
  return m;
}

Json to_json(const MetricsRecord& rec) {
  Json j;
  j["schema"] = rec.schema;
  j["t"] = rec.t;
  j["sim_time_s"] = rec.sim_time_s;
  j["loss"] = rec.loss;
  j["eval_loss"] = optional_number(rec.eval_loss);
  j["eval_accuracy"] = optional_number(rec.eval_accuracy);
  j["xi"] = rec.xi;
  j["comm_events"] = rec.comm_events;
  j["comm_seconds"] = rec.comm_seconds;
  return j;
}

MetricsRecord metrics_from_json(const Json& j) {
  MetricsRecord m;
  m.schema = j.at("schema").get<int>();
  if (m.schema != kMetricsSchemaVersion)
    throw std::runtime_error("unsupported metrics schema " + std::to_string(m.schema));
  m.t = j.at("t").get<std::uint64_t>();
  m.sim_time_s = j.at("sim_time_s").get<double>();
  m.loss = j.at("loss").get<double>();
  m.eval_loss = read_optional(j, "eval_loss");
  m.eval_accuracy = read_optional(j, "eval_accuracy");
  m.xi = j.at("xi").get<double>();
  m.comm_events = j.at("comm_events").get<std::uint64_t>();
  m.comm_seconds = j.at("comm_seconds").get<double>();
  return m;
}

std::string emit_metrics_line(const MetricsRecord& rec) { return to_json(rec).dump(); }

MetricsRecord parse_metrics_line(const std::string& line) {
  return metrics_from_json(Json::parse(line));
}

Json to_json(const RunSummary& s) {
  Json j;
  j["final_loss"] = optional_number(s.final_loss);
  j["best_loss"] = optional_number(s.best_loss);
  j["final_eval_loss"] = optional_number(s.final_eval_loss);
  j["final_eval_accuracy"] = optional_number(s.final_eval_accuracy);
  j["total_sim_seconds"] = s.total_sim_seconds;
  j["sync_count"] = s.sync_count;
  j["diverged"] = s.diverged;
  j["divergence_step"] = s.divergence_step ? Json(*s.divergence_step) : Json(nullptr);
  j["steps_completed"] = s.steps_completed;
  return j;
}

RunSummary summary_from_json(const Json& j) {
  RunSummary s;
  s.final_loss = read_optional(j, "final_loss");
  s.best_loss = read_optional(j, "best_loss");
  s.final_eval_loss = read_optional(j, "final_eval_loss");
  s.final_eval_accuracy = read_optional(j, "final_eval_accuracy");
  s.total_sim_seconds = j.at("total_sim_seconds").get<double>();
  s.sync_count = j.at("sync_count").get<std::uint64_t>();
  s.diverged = j.at("diverged").get<bool>();
  if (j.contains("divergence_step") && !j.at("divergence_step").is_null())
    s.divergence_step = j.at("divergence_step").get<std::uint64_t>();
  s.steps_completed = j.at("steps_completed").get<std::uint64_t>();
  return s;
}

}  // namespace palsgd
