#include <cmath>
#include <set>

#include "palsgd/experiments.hpp"

namespace palsgd {
namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Reads fields of one JSON object and rejects any key that was never asked
/// for.
class ObjectReader {
 public:
  ObjectReader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return convert<T>(key);
  }

  template <class T>
  std::optional<T> maybe(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return convert<T>(key);
  }

  const Json* child(const std::string& key) {
    if (!has(key)) return nullptr;
    return &obj_.at(key);
  }

  std::string field(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& [key, _] : obj_.items())
      if (!seen_.count(key)) throw ConfigError(join(path_, key), "unknown key");
  }

 private:
  template <class T>
  T convert(const std::string& key) {
    const Json& v = obj_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError(field(key), "expected a number");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
        if (std::is_unsigned_v<T> && v.get<long long>() < 0)
          throw ConfigError(field(key), "must be >= 0");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(field(key), "expected a string");
      }
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(field(key), "has the wrong type");
    }
  }

  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class T>
std::vector<T> read_list(ObjectReader& r, const std::string& key, std::vector<T> fallback) {
  const Json* j = r.child(key);
  if (!j) return fallback;
  if (!j->is_array()) throw ConfigError(r.field(key), "expected a list");
  std::vector<T> out;
  for (const auto& e : *j) {
    if constexpr (std::is_same_v<T, double>) {
      if (!e.is_number()) throw ConfigError(r.field(key), "entries must be numbers");
    } else {
      if (!e.is_number_integer() || e.get<long long>() < 0)
        throw ConfigError(r.field(key), "entries must be non-negative integers");
    }
    out.push_back(e.get<T>());
  }
  return out;
}

void require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw ConfigError(field, rule);
}

WorkloadConfig parse_workload(const Json& j) {
  ObjectReader r(j, "workload");
  WorkloadConfig w;
  const std::string type = r.get<std::string>("type", "quadratic");
  w.data_seed = r.get<std::uint64_t>("data_seed", 0);
  if (type == "quadratic") {
    w.kind = WorkloadKind::quadratic;
    auto& q = w.quadratic;
    q.hessian_diag = read_list<double>(r, "hessian_diag", {});
    if (q.hessian_diag.empty()) {
      const auto dim = r.get<std::size_t>("dim", 16);
      const double mu = r.get<double>("mu", 1.0);
      const double L = r.get<double>("L", 4.0);
      require(dim >= 1, "workload.dim", "must be >= 1");
      require(mu > 0.0, "workload.mu", "must be > 0 (strong convexity)");
      require(L >= mu, "workload.L", "must be >= workload.mu");
      q.hessian_diag = linear_spectrum(dim, mu, L);
    } else {
      require(!r.has("mu") && !r.has("L") && !r.has("dim"), "workload.hessian_diag",
              "give either hessian_diag or dim/mu/L, not both");
      for (double a : q.hessian_diag) require(a > 0.0, "workload.hessian_diag", "entries must be > 0");
    }
    q.noise_sigma = r.get<double>("noise_sigma", 1.0);
    require(q.noise_sigma >= 0.0, "workload.noise_sigma", "must be >= 0");
    if (const Json* xs = r.child("x_star")) {
      if (xs->is_string()) {
        require(xs->get<std::string>() == "zeros", "workload.x_star", "must be \"zeros\" or a list");
      } else {
        q.x_star = read_list<double>(r, "x_star", {});
        require(q.x_star.size() == q.hessian_diag.size(), "workload.x_star",
                "length must equal the dimension");
      }
    }
    q.init_distance_sq = r.get<double>("init_distance_sq", 1.0);
    require(q.init_distance_sq > 0.0, "workload.init_distance_sq", "must be > 0");
  } else if (type == "logistic" || type == "mlp") {
    const bool mlp = type == "mlp";
    w.kind = mlp ? WorkloadKind::mlp : WorkloadKind::logistic;
    auto& c = w.classification;
    c.data.classes = mlp ? r.get<int>("classes", 10) : 2;
    c.data.dim = r.get<std::size_t>("input_dim", 16);
    c.data.samples_per_class = r.get<std::size_t>("samples_per_class", 200);
    c.data.clusters_per_class = r.get<int>("clusters_per_class", 1);
    c.data.separation = r.get<double>("separation", 1.0);
    c.data.cluster_std = r.get<double>("cluster_std", 1.0);
    c.eval_samples_per_class = r.get<std::size_t>("eval_samples_per_class", 100);
    c.batch_size = r.get<std::size_t>("batch_size", mlp ? 16 : 8);
    require(c.data.classes >= 2, "workload.classes", "must be >= 2");
    require(c.data.dim >= 1, "workload.input_dim", "must be >= 1");
    require(c.data.samples_per_class >= 1, "workload.samples_per_class", "must be >= 1");
    require(c.data.clusters_per_class >= 1, "workload.clusters_per_class", "must be >= 1");
    require(c.data.separation > 0.0, "workload.separation", "must be > 0");
    require(c.data.cluster_std >= 0.0, "workload.cluster_std", "must be >= 0");
    require(c.batch_size >= 1, "workload.batch_size", "must be >= 1");
    if (mlp) {
      c.hidden = read_list<std::size_t>(r, "hidden", {32});
      for (auto h : c.hidden) require(h >= 1, "workload.hidden", "widths must be >= 1");
      c.activation = parse_activation(r.get<std::string>("activation", "relu"));
    } else {
      c.l2_reg = r.get<double>("l2_reg", 1e-3);
      require(c.l2_reg >= 0.0, "workload.l2_reg", "must be >= 0");
    }
  } else {
    throw ConfigError("workload.type", "must be one of quadratic, logistic, mlp");
  }
  r.finish();
  return w;
}

InnerOptConfig parse_inner(const Json* j, InnerKind fallback) {
  InnerOptConfig c;
  c.kind = fallback;
  if (!j) return c;
  ObjectReader r(*j, "algorithm.inner");
  if (r.has("type")) c.kind = parse_inner_kind(r.get<std::string>("type", ""));
  c.momentum = r.get<double>("momentum", c.momentum);
  c.beta1 = r.get<double>("beta1", c.beta1);
  c.beta2 = r.get<double>("beta2", c.beta2);
  c.eps = r.get<double>("eps", c.eps);
  c.weight_decay = r.get<double>("weight_decay", c.weight_decay);
  c.clip_norm = r.maybe<double>("clip_norm");
  c.reset_on_sync = r.get<bool>("reset_on_sync", false);
  r.finish();
  c.validate();
  return c;
}

OuterOptConfig parse_outer(const Json* j, OuterKind fallback) {
  OuterOptConfig c;
  c.kind = fallback;
  if (j) {
    ObjectReader r(*j, "algorithm.outer");
    if (r.has("type")) c.kind = parse_outer_kind(r.get<std::string>("type", ""));
    c.lr = r.get<double>("lr", c.kind == OuterKind::nesterov ? 0.7 : 1.0);
    c.momentum = r.get<double>("momentum", c.momentum);
    r.finish();
  } else {
    c.lr = c.kind == OuterKind::nesterov ? 0.7 : 1.0;
  }
  c.validate();
  return c;
}

AlgoVariant parse_algorithm(const Json* j) {
  AlgoVariant a;
  a.variant = Variant::palsgd;
  const Json* inner = nullptr;
  const Json* outer = nullptr;
  std::optional<ObjectReader> r;
  if (j) {
    r.emplace(*j, "algorithm");
    a.variant = parse_variant(r->get<std::string>("variant", "palsgd"));
    inner = r->child("inner");
    outer = r->child("outer");
  }
  const bool decoupled = a.variant == Variant::diloco || a.variant == Variant::palsgd;
  if (a.variant == Variant::local_sgd && outer)
    throw ConfigError("algorithm.outer", "local_sgd always averages (outer sgd, lr 1)");
  if (a.variant == Variant::palsgd_theory && (inner || outer))
    throw ConfigError("algorithm", "palsgd_theory fixes inner sgd and outer sgd with lr 1");
  a.inner = parse_inner(inner, decoupled ? InnerKind::adamw : InnerKind::sgd);
  a.outer = parse_outer(outer, decoupled ? OuterKind::nesterov : OuterKind::sgd);
  if (r) r->finish();
  return a.normalized();
}

ClusterSpec parse_cluster(const Json* j) {
  ClusterSpec c;
  c.compute_time_s = 0.05;
  c.allreduce.latency_s = 1e-4;
  c.allreduce.bandwidth_bytes_per_s = 1.25e9;
  c.workers = 4;
  if (j) {
    ObjectReader r(*j, "cluster");
    c.workers = r.get<std::size_t>("workers", c.workers);
    c.compute_time_s = r.get<double>("compute_time_s", c.compute_time_s);
    c.worker_multipliers = read_list<double>(r, "worker_multipliers", {});
    c.jitter_s = r.get<double>("jitter_s", 0.0);
    c.jitter_seed = r.get<std::uint64_t>("jitter_seed", 0);
    c.mixing_cost_fraction = r.get<double>("mixing_cost_fraction", c.mixing_cost_fraction);
    c.allreduce.latency_s = r.get<double>("latency_s", c.allreduce.latency_s);
    c.allreduce.bandwidth_bytes_per_s =
        r.get<double>("bandwidth_bytes_per_s", c.allreduce.bandwidth_bytes_per_s);
    c.bytes_per_param = r.get<std::size_t>("bytes_per_param", c.bytes_per_param);
    r.finish();
  }
  c.validate();
  return c;
}

std::size_t dataset_samples(const WorkloadConfig& w) {
  if (w.kind == WorkloadKind::quadratic) return 0;
  return static_cast<std::size_t>(w.classification.data.classes) *
         w.classification.data.samples_per_class;
}

Schedule parse_schedule(const Json* j, const RunConfig& cfg, bool theory) {
  Schedule s;
  s.p = 0.05;
  s.sync_interval = 16;
  s.alpha = 0.01;
  s.eta = 1.0;
  s.total_steps = 1000;
  const bool local = cfg.algorithm.variant == Variant::local_sgd || cfg.algorithm.variant == Variant::diloco;
  if (local || cfg.algorithm.variant == Variant::ddp) s.p = 0.0;
  std::optional<ObjectReader> holder;
  if (j) {
    holder.emplace(*j, "schedule");
    ObjectReader& r = *holder;
    if (theory && (r.has("alpha") || r.has("eta")))
      throw ConfigError("schedule.alpha", "alpha and eta are derived by the theory schedule");
    s.alpha = r.get<double>("alpha", s.alpha);
    s.eta = r.get<double>("eta", s.eta);
    s.p = r.get<double>("p", s.p);
    s.sync_interval = r.get<std::size_t>("H", s.sync_interval);
    s.warmup_steps = r.get<std::size_t>("warmup_steps", 0);
    const auto steps = r.maybe<std::size_t>("total_steps");
    const auto epochs = r.maybe<double>("epochs");
    if (steps && epochs) throw ConfigError("schedule.epochs", "give total_steps or epochs, not both");
    if (steps) s.total_steps = *steps;
    if (epochs) {
      const std::size_t n = dataset_samples(cfg.workload);
      if (n == 0) throw ConfigError("schedule.epochs", "needs a dataset workload");
      require(*epochs > 0.0, "schedule.epochs", "must be > 0");
      const double per_step = static_cast<double>(cfg.cluster.workers * cfg.workload.classification.batch_size);
      s.total_steps = static_cast<std::size_t>(std::ceil(*epochs * static_cast<double>(n) / per_step));
    }
    s.lr_shape = parse_lr_shape(r.get<std::string>("lr_schedule", "constant"));
    s.lr_warmup_steps = r.get<std::size_t>("lr_warmup_steps", 0);
    s.min_lr_ratio = r.get<double>("min_lr_ratio", 0.0);
    r.finish();
  }
  if (!(s.p >= 0.0 && s.p < 1.0)) throw ConfigError("schedule.p", "must satisfy p in [0, 1)");
  if (theory && !(s.p > 0.0 && s.p <= 0.5))
    throw ConfigError("schedule.p", "theory mode requires 0 < p <= 1/2 (convergence theorem bound)");
  if (local && s.p != 0.0)
    throw ConfigError("schedule.p", std::string(variant_name(cfg.algorithm.variant)) + " requires p == 0");
  if (theory) {
    // Placeholder that satisfies validate(); the real values come from theory_schedule.
    s.alpha = 1.0;
    s.eta = s.p / (2.0 * static_cast<double>(s.sync_interval == 0 ? 1 : s.sync_interval));
    s.averaging_mu = 1.0;
  }
  s.validate(false);
  if (theory && s.warmup_steps != 0) throw ConfigError("schedule.warmup_steps", "theory mode has no warmup");
  return s;
}

TheoryCheckConfig parse_theory(const Json* j) {
  TheoryCheckConfig t;
  if (!j) return t;
  ObjectReader r(*j, "theory");
  t.seeds = r.get<std::size_t>("seeds", t.seeds);
  t.worker_counts = read_list<std::size_t>(r, "worker_counts", t.worker_counts);
  t.sync_intervals = read_list<std::size_t>(r, "sync_intervals", t.sync_intervals);
  t.interval_probe_steps = r.get<std::size_t>("interval_probe_steps", t.interval_probe_steps);
  t.slope_min = r.get<double>("slope_min", t.slope_min);
  t.slope_max = r.get<double>("slope_max", t.slope_max);
  t.doubling_min_ratio = r.get<double>("doubling_min_ratio", t.doubling_min_ratio);
  t.noiseless_threshold = r.get<double>("noiseless_threshold", t.noiseless_threshold);
  r.finish();
  require(!t.worker_counts.empty(), "theory.worker_counts", "must not be empty");
  for (auto k : t.worker_counts) require(k >= 1, "theory.worker_counts", "entries must be >= 1");
  for (auto h : t.sync_intervals) require(h >= 1, "theory.sync_intervals", "entries must be >= 1");
  require(t.slope_min < t.slope_max, "theory.slope_min", "must be < theory.slope_max");
  return t;
}

GradcheckConfig parse_gradcheck(const Json* j) {
  GradcheckConfig g;
  if (!j) return g;
  ObjectReader r(*j, "gradcheck");
  g.probes = r.get<std::size_t>("probes", g.probes);
  g.step = r.get<double>("step", g.step);
  g.tolerance = r.get<double>("tolerance", g.tolerance);
  g.perturbation = r.get<double>("perturbation", g.perturbation);
  r.finish();
  require(g.probes >= 1, "gradcheck.probes", "must be >= 1");
  require(g.step > 0.0, "gradcheck.step", "must be > 0");
  require(g.tolerance > 0.0, "gradcheck.tolerance", "must be > 0");
  return g;
}

}  // namespace

std::size_t default_metrics_every(std::size_t total_steps) {
  return total_steps <= 10000 ? 1 : 10;
}

RunConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig parse_config(const Json& doc) {
  ObjectReader root(doc, "");
  RunConfig cfg;
  const Json* workload = root.child("workload");
  cfg.workload = workload ? parse_workload(*workload) : parse_workload(Json::object());
  cfg.algorithm = parse_algorithm(root.child("algorithm"));
  cfg.cluster = parse_cluster(root.child("cluster"));
  const bool theory = cfg.algorithm.variant == Variant::palsgd_theory;
  if (theory && cfg.workload.kind != WorkloadKind::quadratic)
    throw ConfigError("workload.type", "palsgd_theory needs the quadratic workload (known mu, L, sigma)");
  cfg.schedule = parse_schedule(root.child("schedule"), cfg, theory);
  cfg.seed = root.get<std::uint64_t>("seed", 0);
  const auto every = root.maybe<std::size_t>("metrics_every");
  cfg.metrics_every = every ? *every : default_metrics_every(cfg.schedule.total_steps);
  require(cfg.metrics_every >= 1, "metrics_every", "must be >= 1");
  cfg.output_dir = root.get<std::string>("output_dir", cfg.output_dir);
  const std::string sampling = root.get<std::string>("sampling", "with_replacement");
  if (sampling == "with_replacement")
    cfg.draw_policy = DrawPolicy::with_replacement;
  else if (sampling == "epoch_shuffle")
    cfg.draw_policy = DrawPolicy::epoch_shuffle;
  else
    throw ConfigError("sampling", "must be with_replacement or epoch_shuffle");
  cfg.theory = parse_theory(root.child("theory"));
  cfg.gradcheck = parse_gradcheck(root.child("gradcheck"));
  root.finish();
  if (cfg.workload.kind != WorkloadKind::quadratic) {
    const std::size_t n = dataset_samples(cfg.workload);
    require(cfg.cluster.workers <= n, "cluster.workers", "must not exceed the training-set size");
  }
  return cfg;
}

Json config_to_json(const RunConfig& c) {
  Json j;
  Json w;
  const auto& wl = c.workload;
  if (wl.kind == WorkloadKind::quadratic) {
    w["type"] = "quadratic";
    w["hessian_diag"] = wl.quadratic.hessian_diag;
    w["noise_sigma"] = wl.quadratic.noise_sigma;
    if (wl.quadratic.x_star.empty())
      w["x_star"] = "zeros";
    else
      w["x_star"] = wl.quadratic.x_star;
    w["init_distance_sq"] = wl.quadratic.init_distance_sq;
  } else {
    const auto& cc = wl.classification;
    const bool mlp = wl.kind == WorkloadKind::mlp;
    w["type"] = mlp ? "mlp" : "logistic";
    if (mlp) w["classes"] = cc.data.classes;
    w["input_dim"] = cc.data.dim;
    w["samples_per_class"] = cc.data.samples_per_class;
    w["clusters_per_class"] = cc.data.clusters_per_class;
    w["separation"] = cc.data.separation;
    w["cluster_std"] = cc.data.cluster_std;
    w["eval_samples_per_class"] = cc.eval_samples_per_class;
    w["batch_size"] = cc.batch_size;
    if (mlp) {
      w["hidden"] = cc.hidden;
      w["activation"] = activation_name(cc.activation);
    } else {
      w["l2_reg"] = cc.l2_reg;
    }
  }
  w["data_seed"] = wl.data_seed;
  j["workload"] = w;

  Json a;
  a["variant"] = variant_name(c.algorithm.variant);
  if (c.algorithm.variant != Variant::palsgd_theory) {
    const auto& in = c.algorithm.inner;
    Json ij;
    ij["type"] = inner_kind_name(in.kind);
    ij["momentum"] = in.momentum;
    ij["beta1"] = in.beta1;
    ij["beta2"] = in.beta2;
    ij["eps"] = in.eps;
    ij["weight_decay"] = in.weight_decay;
    ij["clip_norm"] = in.clip_norm ? Json(*in.clip_norm) : Json(nullptr);
    ij["reset_on_sync"] = in.reset_on_sync;
    a["inner"] = ij;
    if (c.algorithm.variant != Variant::local_sgd) {
      Json oj;
      oj["type"] = outer_kind_name(c.algorithm.outer.kind);
      oj["lr"] = c.algorithm.outer.lr;
      oj["momentum"] = c.algorithm.outer.momentum;
      a["outer"] = oj;
    }
  }
  j["algorithm"] = a;

  Json s;
  if (c.algorithm.variant != Variant::palsgd_theory) {
    s["alpha"] = c.schedule.alpha;
    s["eta"] = c.schedule.eta;
  }
  s["p"] = c.schedule.p;
  s["H"] = c.schedule.sync_interval;
  s["warmup_steps"] = c.schedule.warmup_steps;
  s["total_steps"] = c.schedule.total_steps;
  s["lr_schedule"] = lr_shape_name(c.schedule.lr_shape);
  s["lr_warmup_steps"] = c.schedule.lr_warmup_steps;
  s["min_lr_ratio"] = c.schedule.min_lr_ratio;
  j["schedule"] = s;

  Json cl;
  cl["workers"] = c.cluster.workers;
  cl["compute_time_s"] = c.cluster.compute_time_s;
  cl["worker_multipliers"] = c.cluster.worker_multipliers;
  cl["jitter_s"] = c.cluster.jitter_s;
  cl["jitter_seed"] = c.cluster.jitter_seed;
  cl["mixing_cost_fraction"] = c.cluster.mixing_cost_fraction;
  cl["latency_s"] = c.cluster.allreduce.latency_s;
  cl["bandwidth_bytes_per_s"] = c.cluster.allreduce.bandwidth_bytes_per_s;
  cl["bytes_per_param"] = c.cluster.bytes_per_param;
  j["cluster"] = cl;

  j["seed"] = c.seed;
  j["metrics_every"] = c.metrics_every;
  j["output_dir"] = c.output_dir;
  j["sampling"] = c.draw_policy == DrawPolicy::with_replacement ? "with_replacement" : "epoch_shuffle";

  Json th;
  th["seeds"] = c.theory.seeds;
  th["worker_counts"] = c.theory.worker_counts;
  th["sync_intervals"] = c.theory.sync_intervals;
  th["interval_probe_steps"] = c.theory.interval_probe_steps;
  th["slope_min"] = c.theory.slope_min;
  th["slope_max"] = c.theory.slope_max;
  th["doubling_min_ratio"] = c.theory.doubling_min_ratio;
  th["noiseless_threshold"] = c.theory.noiseless_threshold;
  j["theory"] = th;

  Json g;
  g["probes"] = c.gradcheck.probes;
  g["step"] = c.gradcheck.step;
  g["tolerance"] = c.gradcheck.tolerance;
  g["perturbation"] = c.gradcheck.perturbation;
  j["gradcheck"] = g;
  return j;
}

std::unique_ptr<Workload> build_workload(const RunConfig& config) {
  const auto& w = config.workload;
  if (w.kind == WorkloadKind::quadratic) {
    QuadraticSpec spec;
    spec.hessian_diag = w.quadratic.hessian_diag;
    spec.noise_sigma = w.quadratic.noise_sigma;
    const std::size_t d = spec.hessian_diag.size();
    spec.x_star = w.quadratic.x_star.empty() ? ParamVector(d) : ParamVector(w.quadratic.x_star);
    // x0 = x* + sqrt(d0) u with u uniform on the unit sphere.
    RngStream rng(w.data_seed, 0, StreamPurpose::init);
    ParamVector u(d);
    double norm_sq = 0.0;
    while (norm_sq == 0.0) {
      for (double& v : u) v = draw_gaussian(rng, 1.0);
      norm_sq = l2_norm_sq(u);
    }
    const double scale = std::sqrt(w.quadratic.init_distance_sq / norm_sq);
    ParamVector x0 = axpy(scale, u, spec.x_star);
    return std::make_unique<QuadraticWorkload>(std::move(spec), std::move(x0));
  }

  const auto& c = w.classification;
  Dataset train = generate_synthetic_classification(c.data, w.data_seed, 0);
  std::optional<Dataset> eval;
  if (c.eval_samples_per_class > 0) {
    ClassificationSpec es = c.data;
    es.samples_per_class = c.eval_samples_per_class;
    eval = generate_synthetic_classification(es, w.data_seed, 1);
  }
  if (w.kind == WorkloadKind::logistic) {
    LogisticSpec spec{std::move(train), std::move(eval), c.l2_reg, c.batch_size};
    return std::make_unique<LogisticWorkload>(std::move(spec));
  }
  MlpSpec spec;
  spec.widths.push_back(c.data.dim);
  for (auto h : c.hidden) spec.widths.push_back(h);
  spec.widths.push_back(static_cast<std::size_t>(c.data.classes));
  spec.activation = c.activation;
  spec.train = std::move(train);
  spec.eval = std::move(eval);
  spec.batch_size = c.batch_size;
  spec.init_seed = config.seed;
  return std::make_unique<MlpWorkload>(std::move(spec));
}

TrainerOptions make_trainer_options(const RunConfig& config, const Workload& workload) {
  TrainerOptions opt;
  opt.algorithm = config.algorithm;
  opt.schedule = config.schedule;
  opt.cluster = config.cluster;
  opt.seed = config.seed;
  opt.draw_policy = config.draw_policy;
  opt.metrics_every = config.metrics_every;
  if (config.algorithm.variant == Variant::palsgd_theory) {
    const auto* quad = dynamic_cast<const QuadraticWorkload*>(&workload);
    if (!quad) throw ConfigError("workload.type", "palsgd_theory needs the quadratic workload");
    const auto& spec = quad->spec();
    const double d0 = distance_sq(quad->initial_point(), spec.x_star);
    Schedule s = theory_schedule(spec.mu(), spec.smoothness(), config.schedule.p,
                                 config.schedule.sync_interval, config.schedule.total_steps,
                                 config.cluster.workers, spec.noise_sigma, d0);
    opt.schedule = s;
  }
  return opt;
}

}  // namespace palsgd
