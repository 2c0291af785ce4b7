#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace adamd {

/// Exponential decay rates (beta1, beta2) for the moment estimates.
/// Both must lie in [0, 1); anything else is rejected at construction.
class BetaPair {
 public:
  BetaPair(double beta1, double beta2) : beta1_(beta1), beta2_(beta2) {
    if (!(beta1 >= 0.0 && beta1 < 1.0)) {
      throw std::invalid_argument("beta1 must be in [0, 1), got " + std::to_string(beta1));
    }
    if (!(beta2 >= 0.0 && beta2 < 1.0)) {
      throw std::invalid_argument("beta2 must be in [0, 1), got " + std::to_string(beta2));
    }
  }

  double beta1() const noexcept { return beta1_; }
  double beta2() const noexcept { return beta2_; }

 private:
  double beta1_;
  double beta2_;
};

/// Which bias-correction terms feed the per-step learning-rate factor.
///   Original         -> sqrt(1 - beta2^t) / (1 - beta1^t)   (both moments)
///   SecondMomentOnly -> sqrt(1 - beta2^t)                   (AdamD)
///   None             -> 1                                   (constant rate)
enum class DebiasMode { Original, SecondMomentOnly, None };

/// Multiplier that turns the base step size into the effective learning
/// rate at step t >= 1. Powers are taken directly from t each call, so the
/// result is a pure function of (mode, betas, t).
inline double debias_factor(DebiasMode mode, const BetaPair& betas, std::int64_t t) {
  if (t < 1) {
    throw std::invalid_argument("debias_factor requires t >= 1, got " + std::to_string(t));
  }
  switch (mode) {
    case DebiasMode::Original: {
      const double bc1 = 1.0 - std::pow(betas.beta1(), static_cast<double>(t));
      const double bc2 = 1.0 - std::pow(betas.beta2(), static_cast<double>(t));
      return std::sqrt(bc2) / bc1;
    }
    case DebiasMode::SecondMomentOnly: {
      const double bc2 = 1.0 - std::pow(betas.beta2(), static_cast<double>(t));
      return std::sqrt(bc2);
    }
    case DebiasMode::None:
      return 1.0;
  }
  throw std::logic_error("unreachable debias mode");
}

/// Scan summary of the factor sequence over t = 1..t_max.
struct ScheduleReport {
  DebiasMode mode;
  BetaPair betas;
  std::int64_t t_max;
  bool is_nondecreasing;
  // Smallest t with factor(t) < factor(t-1), absent if the sequence never drops.
  std::optional<std::int64_t> first_decrease_step;
  // Smallest t attaining the minimum factor.
  std::int64_t min_step;
  double min_value;
  // Every t with factor(t) > 1.
  std::vector<std::int64_t> overshoot_steps;
  // First t with |factor(t) - 1| <= tolerance, absent if never reached.
  std::optional<std::int64_t> convergence_step;
};

inline constexpr double kDefaultConvergenceTolerance = 0.01;

inline ScheduleReport analyze_schedule(DebiasMode mode, const BetaPair& betas,
                                       std::int64_t t_max,
                                       double tolerance = kDefaultConvergenceTolerance) {
  if (t_max < 2) {
    throw std::invalid_argument("analyze_schedule requires t_max >= 2, got " +
                                std::to_string(t_max));
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("analyze_schedule requires tolerance > 0");
  }
  ScheduleReport report{mode, betas, t_max, true, std::nullopt, 1,
                        debias_factor(mode, betas, 1), {}, std::nullopt};
  double prev = report.min_value;
  if (prev > 1.0) report.overshoot_steps.push_back(1);
  if (std::abs(prev - 1.0) <= tolerance) report.convergence_step = 1;
  for (std::int64_t t = 2; t <= t_max; ++t) {
    const double f = debias_factor(mode, betas, t);
    if (f < prev && !report.first_decrease_step) {
      report.is_nondecreasing = false;
      report.first_decrease_step = t;
    }
    if (f < report.min_value) {
      report.min_value = f;
      report.min_step = t;
    }
    if (f > 1.0) report.overshoot_steps.push_back(t);
    if (!report.convergence_step && std::abs(f - 1.0) <= tolerance) {
      report.convergence_step = t;
    }
    prev = f;
  }
  return report;
}

/// The factor sampled at every t = 1..t_max, in order.
inline std::vector<std::pair<std::int64_t, double>> factor_curve(DebiasMode mode,
                                                                 const BetaPair& betas,
                                                                 std::int64_t t_max) {
  if (t_max < 1) {
    throw std::invalid_argument("factor_curve requires t_max >= 1, got " +
                                std::to_string(t_max));
  }
  std::vector<std::pair<std::int64_t, double>> curve;
  curve.reserve(static_cast<std::size_t>(t_max));
  for (std::int64_t t = 1; t <= t_max; ++t) {
    curve.emplace_back(t, debias_factor(mode, betas, t));
  }
  return curve;
}

inline std::string_view to_string(DebiasMode mode) {
  switch (mode) {
    case DebiasMode::Original: return "original";
    case DebiasMode::SecondMomentOnly: return "second-moment-only";
    case DebiasMode::None: return "none";
  }
  return "?";
}

inline std::optional<DebiasMode> parse_debias_mode(std::string_view s) {
  if (s == "original" || s == "adam") return DebiasMode::Original;
  if (s == "second-moment-only" || s == "adamd") return DebiasMode::SecondMomentOnly;
  if (s == "none" || s == "const") return DebiasMode::None;
  return std::nullopt;
}

}  // namespace adamd
