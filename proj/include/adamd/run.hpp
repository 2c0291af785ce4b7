#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "adamd/optim.hpp"
#include "adamd/problems.hpp"
#include "adamd/rng.hpp"

namespace adamd {

/// One step of a training trace. Loss is the objective value at which the
/// step's gradient was taken; param_l2_norm is taken after the update.
struct TraceRow {
  std::int64_t step;
  double loss;
  double effective_lr;
  double update_l2_norm;
  double update_inf_norm;
  double param_l2_norm;
};

/// Drives the optimizer for `steps` steps from the problem's initial point.
/// Fully deterministic given (problem, config, steps, seed); the per-step
/// seed handed to the problem is rng::mix64(seed, t). Errors raised by a
/// step are rethrown with the failing step index attached.
inline std::vector<TraceRow> run(const Problem& problem, const OptimizerConfig& config,
                                 std::int64_t steps, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("run: steps must be >= 1");
  config.validate();

  OptimizerState state = init_state(problem.dim());
  std::vector<double> params = problem.initial_point();
  std::vector<TraceRow> trace;
  trace.reserve(static_cast<std::size_t>(steps));

  for (std::int64_t t = 1; t <= steps; ++t) {
    try {
      const Evaluation eval =
          problem.evaluate(params, rng::mix64(seed, static_cast<std::uint64_t>(t)));
      StepResult result = step(state, params, eval.grad, config);
      state = std::move(result.state);
      params = std::move(result.outcome.params);
      trace.push_back(TraceRow{t, eval.loss, result.outcome.effective_lr,
                               result.outcome.update_l2_norm, result.outcome.update_inf_norm,
                               detail::l2_norm(params)});
    } catch (const std::exception& e) {
      throw std::runtime_error("run: step " + std::to_string(t) + ": " + e.what());
    }
  }
  return trace;
}

}  // namespace adamd
