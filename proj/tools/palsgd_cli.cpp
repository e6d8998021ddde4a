// Command-line front end: run, sweep, verify-theory, gradcheck.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "palsgd/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kError = 1, kConfigError = 2, kDiverged = 3, kCheckFailed = 4 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> metrics_every;
};

palsgd::Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw palsgd::ConfigError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return palsgd::Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw palsgd::ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

palsgd::Json load_with_overrides(const std::string& path, const Overrides& o) {
  palsgd::Json doc = read_json(path);
  if (o.seed) doc["seed"] = *o.seed;
  if (o.out_dir) doc["output_dir"] = *o.out_dir;
  if (o.metrics_every) doc["metrics_every"] = *o.metrics_every;
  return doc;
}

int cmd_run(const std::string& path, const Overrides& o) {
  const palsgd::RunConfig cfg = palsgd::parse_config(load_with_overrides(path, o));
  const auto out = palsgd::run_experiment(cfg, std::filesystem::path(cfg.output_dir));
  std::cout << palsgd::to_json(out.summary).dump(2) << '\n';
  return out.summary.diverged ? kDiverged : kOk;
}

int cmd_sweep(const std::string& path, const std::string& grid_path, std::size_t jobs,
              const Overrides& o) {
  const palsgd::Json base = load_with_overrides(path, o);
  const palsgd::RunConfig cfg = palsgd::parse_config(base);
  const auto cells = palsgd::sweep(base, read_json(grid_path), std::filesystem::path(cfg.output_dir), jobs);
  palsgd::write_sweep_csv(cells, std::cout);
  for (const auto& c : cells)
    if (!c.error.empty()) std::cerr << "cell failed: " << c.error << '\n';
  return kOk;
}

int cmd_verify(const std::string& path, const Overrides& o) {
  const palsgd::RunConfig cfg = palsgd::parse_config(load_with_overrides(path, o));
  const palsgd::Json report = palsgd::verify_theory(cfg);
  std::cout << report.dump(2) << '\n';
  if (o.out_dir) {
    std::filesystem::create_directories(*o.out_dir);
    std::ofstream(std::filesystem::path(*o.out_dir) / "theory_report.json") << report.dump(2) << '\n';
  }
  return report.at("pass").get<bool>() ? kOk : kCheckFailed;
}

int cmd_gradcheck(const std::string& path, const Overrides& o) {
  const palsgd::RunConfig cfg = palsgd::parse_config(load_with_overrides(path, o));
  const auto workload = palsgd::build_workload(cfg);
  const auto report = palsgd::gradcheck(*workload, cfg.gradcheck, cfg.seed);
  std::cout << palsgd::to_json(report).dump(2) << '\n';
  return report.pass ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PALSGD desk-scale simulator"};
  app.require_subcommand(1);

  Overrides o;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t metrics_every = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "override the run seed");
    sub->add_option("--out-dir", out_dir, "override the output directory");
    sub->add_option("--metrics-every", metrics_every, "metrics cadence in steps")->check(CLI::PositiveNumber);
  };

  std::string config, grid;
  std::size_t jobs = 1;
  auto* run = app.add_subcommand("run", "train one configuration");
  run->add_option("config", config, "config JSON")->required();
  add_common(run);
  auto* sw = app.add_subcommand("sweep", "grid sweep over config parameters");
  sw->add_option("config", config, "base config JSON")->required();
  sw->add_option("--grid", grid, "grid JSON: dotted path -> list of values")->required();
  sw->add_option("--jobs", jobs, "cells run concurrently")->check(CLI::PositiveNumber);
  add_common(sw);
  auto* vt = app.add_subcommand("verify-theory", "convergence checks on the quadratic");
  vt->add_option("config", config, "config JSON")->required();
  add_common(vt);
  auto* gc = app.add_subcommand("gradcheck", "finite-difference gradient check");
  gc->add_option("config", config, "config JSON")->required();
  add_common(gc);

  CLI11_PARSE(app, argc, argv);
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) o.seed = seed;
    if (sub->count("--out-dir")) o.out_dir = out_dir;
    if (sub->count("--metrics-every")) o.metrics_every = metrics_every;
  }

  try {
    if (app.got_subcommand(run)) return cmd_run(config, o);
    if (app.got_subcommand(sw)) return cmd_sweep(config, grid, jobs, o);
    if (app.got_subcommand(vt)) return cmd_verify(config, o);
    return cmd_gradcheck(config, o);
  } catch (const palsgd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}
