#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adamd/schedule.hpp"

namespace adamd {

/// The step rules. AdamHatForm applies the bias corrections to the moments
/// (m-hat, v-hat); the scheduled forms fold them into the learning rate and
/// are numerically equivalent at epsilon = 0. W-variants add decoupled
/// weight decay; Lamb-variants scale the step by a trust ratio.
enum class AlgorithmFamily {
  AdamHatForm,
  AdamLrForm,
  AdamD,
  AdamW,
  AdamWD,
  Lamb,
  LambD,
};

inline std::string_view to_string(AlgorithmFamily family) {
  switch (family) {
    case AlgorithmFamily::AdamHatForm: return "adam-hat";
    case AlgorithmFamily::AdamLrForm: return "adam-lr";
    case AlgorithmFamily::AdamD: return "adamd";
    case AlgorithmFamily::AdamW: return "adamw";
    case AlgorithmFamily::AdamWD: return "adamwd";
    case AlgorithmFamily::Lamb: return "lamb";
    case AlgorithmFamily::LambD: return "lambd";
  }
  return "?";
}

inline std::optional<AlgorithmFamily> parse_family(std::string_view s) {
  if (s == "adam-hat") return AlgorithmFamily::AdamHatForm;
  if (s == "adam-lr" || s == "adam") return AlgorithmFamily::AdamLrForm;
  if (s == "adamd") return AlgorithmFamily::AdamD;
  if (s == "adamw") return AlgorithmFamily::AdamW;
  if (s == "adamwd") return AlgorithmFamily::AdamWD;
  if (s == "lamb") return AlgorithmFamily::Lamb;
  if (s == "lambd") return AlgorithmFamily::LambD;
  return std::nullopt;
}

inline bool uses_weight_decay(AlgorithmFamily family) noexcept {
  switch (family) {
    case AlgorithmFamily::AdamW:
    case AlgorithmFamily::AdamWD:
    case AlgorithmFamily::Lamb:
    case AlgorithmFamily::LambD:
      return true;
    default:
      return false;
  }
}

/// Debias mode governing the effective learning rate of each family.
inline DebiasMode debias_mode_of(AlgorithmFamily family) noexcept {
  switch (family) {
    case AlgorithmFamily::AdamD:
    case AlgorithmFamily::AdamWD:
    case AlgorithmFamily::LambD:
      return DebiasMode::SecondMomentOnly;
    default:
      return DebiasMode::Original;
  }
}

/// Bounds on the Lamb trust ratio.
struct TrustClip {
  double lo;
  double hi;
};

// Applied when a Lamb-family config leaves trust_clip unset: an essentially
// open lower bound and a cap of 10 on the ratio.
inline constexpr TrustClip kDefaultTrustClip{std::numeric_limits<double>::denorm_min(), 10.0};

struct OptimizerConfig {
  double alpha = 1e-3;
  BetaPair betas{0.9, 0.999};
  double epsilon = 1e-8;
  double weight_decay = 0.0;
  AlgorithmFamily family = AlgorithmFamily::AdamLrForm;
  std::optional<TrustClip> trust_clip;

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    if (!(weight_decay >= 0.0)) throw std::invalid_argument("weight_decay must be >= 0");
    if (trust_clip) {
      if (!(trust_clip->lo > 0.0 && trust_clip->lo <= trust_clip->hi)) {
        throw std::invalid_argument("trust_clip requires 0 < lo <= hi");
      }
    }
  }
};

/// First/second moment estimates plus the step counter. Fresh state is all
/// zeros with t = 0; t advances by exactly one per step.
struct OptimizerState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;
};

inline OptimizerState init_state(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("init_state: dim must be >= 1");
  return OptimizerState{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0), 0};
}

/// m' = beta1 m + (1-beta1) g, v' = beta2 v + (1-beta2) g^2, t' = t+1.
inline OptimizerState update_moments(const OptimizerState& state, std::span<const double> grad,
                                     const BetaPair& betas) {
  if (grad.size() != state.m.size()) {
    throw std::invalid_argument("update_moments: gradient has dimension " +
                                std::to_string(grad.size()) + ", state has " +
                                std::to_string(state.m.size()));
  }
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i])) {
      throw std::invalid_argument("update_moments: non-finite gradient entry at index " +
                                  std::to_string(i));
    }
  }
  OptimizerState next = state;
  const double b1 = betas.beta1();
  const double b2 = betas.beta2();
  for (std::size_t i = 0; i < grad.size(); ++i) {
    next.m[i] = b1 * next.m[i] + (1.0 - b1) * grad[i];
    next.v[i] = b2 * next.v[i] + (1.0 - b2) * grad[i] * grad[i];
  }
  next.t = state.t + 1;
  return next;
}

struct StepOutcome {
  std::vector<double> params;
  double effective_lr;
  double update_inf_norm;
  double update_l2_norm;
};

struct StepResult {
  OptimizerState state;
  StepOutcome outcome;
};

namespace detail {

// With epsilon = 0 a coordinate that has only ever seen zero gradients
// produces 0/0; its update contribution is defined as zero.
inline double moment_ratio(double num, double den) noexcept {
  if (den == 0.0 && num == 0.0) return 0.0;
  return num / den;
}

inline double l2_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

inline double inf_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double xi : x) s = std::max(s, std::abs(xi));
  return s;
}

}  // namespace detail

/// One optimizer step: moments advance, then the family rule updates the
/// parameters. Returns the new state plus the updated parameters, the
/// effective learning rate applied, and the norms of the applied update.
inline StepResult step(const OptimizerState& state, std::span<const double> params,
                       std::span<const double> grad, const OptimizerConfig& config) {
  config.validate();
  if (params.size() != state.m.size()) {
    throw std::invalid_argument("step: params dimension does not match optimizer state");
  }
  OptimizerState next = update_moments(state, grad, config.betas);
  const std::int64_t t = next.t;
  const std::size_t n = params.size();
  const double alpha = config.alpha;
  const double eps = config.epsilon;

  std::vector<double> delta(n);
  double effective_lr = alpha;

  switch (config.family) {
    case AlgorithmFamily::AdamHatForm: {
      const double bc1 = 1.0 - std::pow(config.betas.beta1(), static_cast<double>(t));
      const double bc2 = 1.0 - std::pow(config.betas.beta2(), static_cast<double>(t));
      for (std::size_t i = 0; i < n; ++i) {
        const double m_hat = next.m[i] / bc1;
        const double v_hat = next.v[i] / bc2;
        delta[i] = alpha * detail::moment_ratio(m_hat, std::sqrt(v_hat) + eps);
      }
      break;
    }
    case AlgorithmFamily::AdamLrForm:
    case AlgorithmFamily::AdamD:
    case AlgorithmFamily::AdamW:
    case AlgorithmFamily::AdamWD: {
      effective_lr = alpha * debias_factor(debias_mode_of(config.family), config.betas, t);
      const bool decay = uses_weight_decay(config.family);
      for (std::size_t i = 0; i < n; ++i) {
        delta[i] =
            effective_lr * detail::moment_ratio(next.m[i], std::sqrt(next.v[i]) + eps);
        if (decay) {
          // Decoupled decay keeps the base step size, independent of the
          // debias schedule.
          delta[i] += alpha * config.weight_decay * params[i];
        }
      }
      break;
    }
    case AlgorithmFamily::Lamb:
    case AlgorithmFamily::LambD: {
      effective_lr = alpha * debias_factor(debias_mode_of(config.family), config.betas, t);
      std::vector<double> direction(n);
      for (std::size_t i = 0; i < n; ++i) {
        direction[i] = detail::moment_ratio(next.m[i], std::sqrt(next.v[i]) + eps) +
                       config.weight_decay * params[i];
      }
      const double param_norm = detail::l2_norm(params);
      const double dir_norm = detail::l2_norm(direction);
      double ratio = (param_norm == 0.0 || dir_norm == 0.0) ? 1.0 : param_norm / dir_norm;
      const TrustClip clip = config.trust_clip.value_or(kDefaultTrustClip);
      ratio = std::clamp(ratio, clip.lo, clip.hi);
      for (std::size_t i = 0; i < n; ++i) {
        delta[i] = effective_lr * ratio * direction[i];
      }
      break;
    }
  }

  StepOutcome outcome{std::vector<double>(n), effective_lr, detail::inf_norm(delta),
                      detail::l2_norm(delta)};
  for (std::size_t i = 0; i < n; ++i) {
    outcome.params[i] = params[i] - delta[i];
  }
  return StepResult{std::move(next), std::move(outcome)};
}

}  // namespace adamd
