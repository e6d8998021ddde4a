#include <cmath>
#include <string>

#include "palsgd/optimizers.hpp"

namespace palsgd {

std::string_view inner_kind_name(InnerKind k) {
  switch (k) {
    case InnerKind::sgd: return "sgd";
    case InnerKind::sgd_momentum: return "sgd_momentum";
    case InnerKind::adamw: return "adamw";
  }
  return "?";
}

InnerKind parse_inner_kind(std::string_view name) {
  if (name == "sgd") return InnerKind::sgd;
  if (name == "sgd_momentum") return InnerKind::sgd_momentum;
  if (name == "adamw") return InnerKind::adamw;
  throw ConfigError("algorithm.inner.type", "must be one of sgd, sgd_momentum, adamw");
}

void InnerOptConfig::validate() const {
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw ConfigError("algorithm.inner.momentum", "must be in [0, 1)");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("algorithm.inner.beta1", "must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("algorithm.inner.beta2", "must be in [0, 1)");
  if (!(eps > 0.0)) throw ConfigError("algorithm.inner.eps", "must be > 0");
  if (!(weight_decay >= 0.0)) throw ConfigError("algorithm.inner.weight_decay", "must be >= 0");
  if (clip_norm && !(*clip_norm > 0.0))
    throw ConfigError("algorithm.inner.clip_norm", "must be > 0 or null");
}

double clip_global_norm(ParamVector& g, double max_norm) {
  const double norm = std::sqrt(l2_norm_sq(g));
  if (norm > max_norm) kernels::active_kernels().scale(g.data(), max_norm / norm, g.dim());
  return norm;
}

void InnerOptState::reset() {
  m_.assign(m_.size(), 0.0);
  v_.assign(v_.size(), 0.0);
  step_ = 0;
}

void InnerOptState::apply(ParamVector& x, const ParamVector& g_in, double lr) {
  require_same_dim("inner_step", x.dim(), g_in.dim());
  if (!(lr > 0.0)) throw std::invalid_argument("inner_step: lr must be > 0, got " + std::to_string(lr));
  const auto& k = kernels::active_kernels();
  const std::size_t n = x.dim();

  const ParamVector* g = &g_in;
  ParamVector adjusted;
  const bool coupled_decay = config_.kind != InnerKind::adamw && config_.weight_decay > 0.0;
  if (config_.clip_norm || coupled_decay) {
    adjusted = g_in;
    if (config_.clip_norm) clip_global_norm(adjusted, *config_.clip_norm);
    if (coupled_decay) k.axpy(config_.weight_decay, x.data(), adjusted.data(), adjusted.data(), n);
    g = &adjusted;
  }

  ++step_;
  switch (config_.kind) {
    case InnerKind::sgd:
      k.axpy(-lr, g->data(), x.data(), x.data(), n);
      break;
    case InnerKind::sgd_momentum:
      if (m_.size() != n) m_.assign(n, 0.0);
      k.momentum_step(x.data(), m_.data(), g->data(), config_.momentum, lr, n);
      break;
    case InnerKind::adamw: {
      if (m_.size() != n) m_.assign(n, 0.0);
      if (v_.size() != n) v_.assign(n, 0.0);
      const double t = static_cast<double>(step_);
      const double bc1 = 1.0 - std::pow(config_.beta1, t);
      const double bc2 = 1.0 - std::pow(config_.beta2, t);
      k.adamw_step(x.data(), m_.data(), v_.data(), g->data(), lr, config_.beta1, config_.beta2, bc1,
                   bc2, config_.eps, config_.weight_decay, n);
      break;
    }
  }
}

std::pair<ParamVector, InnerOptState> inner_step(InnerOptState state, ParamVector x,
                                                 const ParamVector& g, double lr) {
  state.apply(x, g, lr);
  return {std::move(x), std::move(state)};
}

}  // namespace palsgd
