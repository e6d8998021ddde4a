#include <cmath>
#include <numbers>
#include <string>

#include "palsgd/algorithms.hpp"

namespace palsgd {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::ddp: return "ddp";
    case Variant::local_sgd: return "local_sgd";
    case Variant::diloco: return "diloco";
    case Variant::palsgd: return "palsgd";
    case Variant::palsgd_theory: return "palsgd_theory";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "ddp") return Variant::ddp;
  if (name == "local_sgd") return Variant::local_sgd;
  if (name == "diloco") return Variant::diloco;
  if (name == "palsgd") return Variant::palsgd;
  if (name == "palsgd_theory") return Variant::palsgd_theory;
  throw ConfigError("algorithm.variant",
                    "must be one of ddp, local_sgd, diloco, palsgd, palsgd_theory");
}

std::string_view lr_shape_name(LrShape s) {
  return s == LrShape::constant ? "constant" : "warmup_cosine";
}

LrShape parse_lr_shape(std::string_view name) {
  if (name == "constant") return LrShape::constant;
  if (name == "warmup_cosine") return LrShape::warmup_cosine;
  throw ConfigError("schedule.lr_schedule", "must be one of constant, warmup_cosine");
}

double Schedule::alpha_at(std::size_t t) const {
  if (lr_shape == LrShape::constant) return alpha;
  if (t < lr_warmup_steps)
    return alpha * static_cast<double>(t + 1) / static_cast<double>(lr_warmup_steps);
  const std::size_t span = total_steps > lr_warmup_steps ? total_steps - lr_warmup_steps : 1;
  const double progress = std::min(1.0, static_cast<double>(t - lr_warmup_steps) / static_cast<double>(span));
  const double cosine = 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
  // Keep the rate strictly positive at the very end of the run.
  return std::max(alpha * (min_lr_ratio + (1.0 - min_lr_ratio) * cosine), alpha * 1e-6);
}

std::size_t Schedule::effective_warmup() const {
  if (warmup_steps == 0 || sync_interval == 0) return 0;
  const std::size_t rounded = (warmup_steps + sync_interval - 1) / sync_interval * sync_interval;
  return std::min(rounded, total_steps);
}

void Schedule::validate(bool theory) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("schedule.alpha", "must be finite and > 0");
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("schedule.p", "must satisfy p in [0, 1)");
  if (p > 0.0 && !(eta > 0.0)) throw ConfigError("schedule.eta", "must be > 0 when p > 0");
  if (sync_interval == 0) throw ConfigError("schedule.H", "must be >= 1");
  if (total_steps == 0) throw ConfigError("schedule.total_steps", "must be >= 1");
  if (!(min_lr_ratio >= 0.0 && min_lr_ratio <= 1.0))
    throw ConfigError("schedule.min_lr_ratio", "must be in [0, 1]");
  if (!theory) return;
  if (!(p > 0.0 && p <= 0.5))
    throw ConfigError("schedule.p", "theory mode requires 0 < p <= 1/2 (convergence theorem bound)");
  if (lr_shape != LrShape::constant)
    throw ConfigError("schedule.lr_schedule", "theory mode uses a constant step size");
  const double target = p / (2.0 * static_cast<double>(sync_interval));
  if (alpha * eta != target)
    throw ConfigError("schedule.eta", "theory mode requires alpha * eta == p / (2H)");
}

Schedule theory_schedule(double mu, double smoothness, double p, std::size_t sync_interval,
                         std::size_t total_steps, std::size_t workers, double sigma, double d0) {
  if (!(mu > 0.0)) throw std::invalid_argument("theory_schedule: mu must be > 0");
  if (!(smoothness >= mu)) throw std::invalid_argument("theory_schedule: L must be >= mu");
  if (!(p > 0.0 && p <= 0.5)) throw std::invalid_argument("theory_schedule: p must be in (0, 1/2]");
  if (sync_interval == 0 || total_steps == 0 || workers == 0)
    throw std::invalid_argument("theory_schedule: H, T, K must be >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("theory_schedule: sigma must be >= 0");
  if (!(d0 > 0.0)) throw std::invalid_argument("theory_schedule: d0 must be > 0");

  const double H = static_cast<double>(sync_interval);
  const double T = static_cast<double>(total_steps);
  const double cap = p / (48.0 * smoothness * H);
  double alpha = cap;
  if (sigma > 0.0) {
    const double arg = mu * mu * d0 * T * T * static_cast<double>(workers) / (sigma * sigma);
    if (arg > 1.0) alpha = std::min(cap, std::log(arg) / (mu * T));
  }

  const double target = p / (2.0 * H);
  double eta = target / alpha;
  for (int nudge = 0; nudge < 256 && alpha * eta != target; ++nudge) {
    bool found = false;
    for (double e : {eta, std::nextafter(eta, 0.0), std::nextafter(eta, HUGE_VAL)}) {
      if (alpha * e == target) {
        eta = e;
        found = true;
        break;
      }
    }
    if (found) break;
    alpha = std::nextafter(alpha, 0.0);
    eta = target / alpha;
  }

  Schedule s;
  s.alpha = alpha;
  s.eta = eta;
  s.p = p;
  s.sync_interval = sync_interval;
  s.total_steps = total_steps;
  s.averaging_mu = mu;
  return s;
}

double averaging_increment(double rate, std::size_t t) {
  if (rate <= 0.0) return 1.0 / static_cast<double>(t + 1);
  // (1-q) / (1 - q^(t+1)) with q = 1 - rate
  const double denom = -std::expm1(static_cast<double>(t + 1) * std::log1p(-rate));
  return rate / denom;
}

AlgoVariant AlgoVariant::normalized() const {
  AlgoVariant out = *this;
  switch (variant) {
    case Variant::palsgd_theory:
      out.inner = InnerOptConfig{};
      out.inner.kind = InnerKind::sgd;
      [[fallthrough]];
    case Variant::local_sgd:
      out.outer = OuterOptConfig{};
      out.outer.kind = OuterKind::sgd;
      out.outer.lr = 1.0;
      break;
    default:
      break;
  }
  return out;
}

}  // namespace palsgd
