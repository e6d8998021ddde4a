#include "palsgd/optimizers.hpp"

namespace palsgd {

std::string_view outer_kind_name(OuterKind k) {
  return k == OuterKind::sgd ? "sgd" : "nesterov";
}

OuterKind parse_outer_kind(std::string_view name) {
  if (name == "sgd") return OuterKind::sgd;
  if (name == "nesterov") return OuterKind::nesterov;
  throw ConfigError("algorithm.outer.type", "must be one of sgd, nesterov");
}

void OuterOptConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("algorithm.outer.lr", "must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw ConfigError("algorithm.outer.momentum", "must be in [0, 1)");
}

void OuterOptState::apply(ParamVector& x, const ParamVector& delta) {
  require_same_dim("outer_step", x.dim(), delta.dim());
  const auto& k = kernels::active_kernels();
  const std::size_t n = x.dim();
  if (config_.kind == OuterKind::sgd) {
    k.axpy(-config_.lr, delta.data(), x.data(), x.data(), n);
    return;
  }
  if (v_.size() != n) v_.assign(n, 0.0);
  k.nesterov_step(x.data(), v_.data(), delta.data(), config_.momentum, config_.lr, n);
}

std::pair<ParamVector, OuterOptState> outer_step(OuterOptState state, ParamVector x_global,
                                                 const ParamVector& delta, double lr) {
  OuterOptConfig cfg = state.config();
  cfg.lr = lr;
  OuterOptState stepped(cfg);
  stepped.v_ = std::move(state.v_);
  stepped.apply(x_global, delta);
  return {std::move(x_global), std::move(stepped)};
}

}  // namespace palsgd
