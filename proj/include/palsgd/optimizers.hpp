#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "palsgd/vecmath.hpp"

namespace palsgd {

enum class InnerKind { sgd, sgd_momentum, adamw };
enum class OuterKind { sgd, nesterov };

std::string_view inner_kind_name(InnerKind k);
std::string_view outer_kind_name(OuterKind k);
InnerKind parse_inner_kind(std::string_view name);
OuterKind parse_outer_kind(std::string_view name);

struct InnerOptConfig {
  InnerKind kind = InnerKind::sgd;
  double momentum = 0.9;  // sgd_momentum only
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // adamw: decoupled decay. sgd / sgd_momentum: added to the gradient.
  double weight_decay = 0.0;
  std::optional<double> clip_norm;  // global-norm clip applied to g first
  bool reset_on_sync = false;

  void validate() const;
  friend bool operator==(const InnerOptConfig&, const InnerOptConfig&) = default;
};

/// Worker-resident inner optimizer. Buffers are allocated lazily on the
/// first step so one config can serve models of any dimension.
class InnerOptState {
 public:
  InnerOptState() = default;
  explicit InnerOptState(InnerOptConfig config) : config_(config) { config_.validate(); }

  const InnerOptConfig& config() const noexcept { return config_; }
  std::uint64_t step_count() const noexcept { return step_; }
  const std::vector<double>& first_moment() const noexcept { return m_; }
  const std::vector<double>& second_moment() const noexcept { return v_; }

  /// One update of x in place with learning rate lr.
  void apply(ParamVector& x, const ParamVector& g, double lr);

  /// Back to a fresh state (step count 0, zero buffers).
  void reset();

  friend bool operator==(const InnerOptState&, const InnerOptState&) = default;

 private:
  InnerOptConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t step_ = 0;
};

/// Value-returning form of InnerOptState::apply.
std::pair<ParamVector, InnerOptState> inner_step(InnerOptState state, ParamVector x,
                                                 const ParamVector& g, double lr);

/// Scale g so that ||g|| <= max_norm. Returns the pre-clip norm.
double clip_global_norm(ParamVector& g, double max_norm);

struct OuterOptConfig {
  OuterKind kind = OuterKind::sgd;
  double lr = 1.0;
  double momentum = 0.9;  // nesterov only

  void validate() const;
  friend bool operator==(const OuterOptConfig&, const OuterOptConfig&) = default;
};

/// Outer optimizer applied to the averaged outer gradient
/// delta = mean_k(x_global - x_k). Nesterov uses v <- mu v + delta,
/// x <- x - lr (delta + mu v).
class OuterOptState {
 public:
  OuterOptState() = default;
  explicit OuterOptState(OuterOptConfig config) : config_(config) { config_.validate(); }

  const OuterOptConfig& config() const noexcept { return config_; }
  const std::vector<double>& momentum_buffer() const noexcept { return v_; }

  void apply(ParamVector& x_global, const ParamVector& delta);

  friend bool operator==(const OuterOptState&, const OuterOptState&) = default;
  friend std::pair<ParamVector, OuterOptState> outer_step(OuterOptState, ParamVector,
                                                          const ParamVector&, double);

 private:
  OuterOptConfig config_;
  std::vector<double> v_;
};

/// Value-returning form of OuterOptState::apply, with an explicit lr that
/// overrides the configured one.
std::pair<ParamVector, OuterOptState> outer_step(OuterOptState state, ParamVector x_global,
                                                 const ParamVector& delta, double lr);

}  // namespace palsgd
