#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adamd/csv.hpp"
#include "adamd/optim.hpp"
#include "adamd/problems.hpp"
#include "adamd/run.hpp"
#include "adamd/schedule.hpp"
#include "adamd/svg.hpp"

namespace adamd::harness {

// Stable exit-code contract shared by every subcommand.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNumericalFailure = 2;
inline constexpr int kExitMalformedInput = 3;

/// Invalid configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemSpec {
  std::string name = "quadratic";
  std::int64_t dim = 10;
  double condition = 100.0;
  double noise_scale = 0.1;  // only used by noisy-quadratic

  bool operator==(const ProblemSpec&) const = default;
};

struct RunConfig {
  AlgorithmFamily family = AlgorithmFamily::AdamLrForm;
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;
  std::int64_t steps = 1000;
  std::uint64_t seed = 0;
  ProblemSpec problem;
  std::string out;
};

inline void validate(const RunConfig& config) {
  if (!(std::isfinite(config.alpha) && config.alpha > 0.0)) {
    throw ConfigError("alpha must be a positive finite number");
  }
  if (!(config.beta1 >= 0.0 && config.beta1 < 1.0)) throw ConfigError("beta1 must be in [0, 1)");
  if (!(config.beta2 >= 0.0 && config.beta2 < 1.0)) throw ConfigError("beta2 must be in [0, 1)");
  if (!(config.epsilon >= 0.0)) throw ConfigError("eps must be >= 0");
  if (!(config.weight_decay >= 0.0)) throw ConfigError("weight-decay must be >= 0");
  if (config.steps < 1) throw ConfigError("steps must be >= 1");
  if (config.problem.dim < 1) throw ConfigError("dim must be >= 1");
  if (!(config.problem.condition >= 1.0)) throw ConfigError("condition must be >= 1");
  if (!(config.problem.noise_scale >= 0.0)) throw ConfigError("noise-scale must be >= 0");
  if (config.problem.name != "quadratic" && config.problem.name != "rosenbrock" &&
      config.problem.name != "noisy-quadratic") {
    throw ConfigError("problem must be one of quadratic, rosenbrock, noisy-quadratic; got '" +
                      config.problem.name + "'");
  }
  if (config.out.empty()) throw ConfigError("out is required");
}

/// Instantiates the named problem; the run seed doubles as the noise base
/// seed for noisy-quadratic.
inline Problem make_problem(const ProblemSpec& spec, std::uint64_t seed) {
  const auto dim = static_cast<std::size_t>(spec.dim);
  if (spec.name == "quadratic") return quadratic(dim, spec.condition);
  if (spec.name == "rosenbrock") return rosenbrock2d();
  if (spec.name == "noisy-quadratic") {
    return noisy_quadratic(dim, spec.condition, spec.noise_scale, seed);
  }
  throw ConfigError("problem must be one of quadratic, rosenbrock, noisy-quadratic; got '" +
                    spec.name + "'");
}

inline OptimizerConfig optimizer_config(const RunConfig& config) {
  OptimizerConfig oc;
  oc.alpha = config.alpha;
  oc.betas = BetaPair(config.beta1, config.beta2);
  oc.epsilon = config.epsilon;
  oc.weight_decay = config.weight_decay;
  oc.family = config.family;
  return oc;
}

namespace detail {

inline std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace detail

inline csv::Table trace_to_table(const std::vector<TraceRow>& trace) {
  csv::Table table;
  table.header = {"step", "loss", "effective_lr", "update_l2_norm", "update_inf_norm",
                  "param_l2_norm"};
  table.rows.reserve(trace.size());
  for (const auto& r : trace) {
    table.rows.push_back({static_cast<double>(r.step), r.loss, r.effective_lr, r.update_l2_norm,
                          r.update_inf_norm, r.param_l2_norm});
  }
  return table;
}

/// One curve of cmd_schedule: a debias mode evaluated at a beta pair.
struct SeriesSpec {
  DebiasMode mode;
  double beta1;
  double beta2;
};

inline std::string series_label(const SeriesSpec& spec) {
  switch (spec.mode) {
    case DebiasMode::Original:
      return "adam_b1_" + detail::format_g(spec.beta1) + "_b2_" + detail::format_g(spec.beta2);
    case DebiasMode::SecondMomentOnly:
      return "adamd_b1_" + detail::format_g(spec.beta1) + "_b2_" + detail::format_g(spec.beta2);
    case DebiasMode::None:
      return "const";
  }
  return "?";
}

// Commands that emit a CSV/SVG pair derive both names from --out: a path
// ending in .csv gets a sibling .svg, anything else gets both extensions
// appended.
struct OutputPair {
  std::string csv;
  std::string svg;
};

inline OutputPair output_pair(const std::string& out) {
  if (out.size() > 4 && out.substr(out.size() - 4) == ".csv") {
    return {out, out.substr(0, out.size() - 4) + ".svg"};
  }
  return {out + ".csv", out + ".svg"};
}

/// Tabulates the debias factor for each series over t = 1..t_max and writes
/// the CSV/SVG pair. The chart carries a dashed reference line at factor 1
/// (a constant learning rate) and a log-scaled x-axis when log_x is set.
inline int cmd_schedule(const std::vector<SeriesSpec>& series, std::int64_t t_max,
                        const std::string& out_path, bool log_x, std::ostream& out,
                        std::ostream& err) {
  csv::Table table;
  std::vector<svg::Series> chart;
  try {
    if (series.empty()) throw ConfigError("at least one series is required");
    if (t_max < 1) throw ConfigError("steps must be >= 1, got " + std::to_string(t_max));
    if (out_path.empty()) throw ConfigError("out is required");

    table.header.push_back("t");
    table.rows.assign(static_cast<std::size_t>(t_max), {});
    for (std::int64_t t = 1; t <= t_max; ++t) {
      table.rows[static_cast<std::size_t>(t - 1)].push_back(static_cast<double>(t));
    }
    for (const auto& spec : series) {
      const BetaPair betas(spec.beta1, spec.beta2);
      table.header.push_back(series_label(spec));
      svg::Series curve{series_label(spec), {}};
      curve.points.reserve(static_cast<std::size_t>(t_max));
      for (const auto& [t, f] : factor_curve(spec.mode, betas, t_max)) {
        table.rows[static_cast<std::size_t>(t - 1)].push_back(f);
        curve.points.emplace_back(static_cast<double>(t), f);
      }
      chart.push_back(std::move(curve));
    }
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  const OutputPair paths = output_pair(out_path);
  try {
    svg::ChartOptions opts;
    opts.title = "effective learning rate factor";
    opts.x_label = "step t";
    opts.y_label = "debias factor";
    opts.log_x = log_x;
    opts.ref_y = 1.0;
    csv::write_file(paths.csv, csv::to_csv(table));
    csv::write_file(paths.svg, svg::line_chart(chart, opts));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  out << "wrote " << paths.csv << " and " << paths.svg << "\n";
  return kExitSuccess;
}

/// Runs one optimizer configuration and writes its trace CSV to config.out.
inline int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<TraceRow> trace;
  try {
    validate(config);
    const Problem problem = make_problem(config.problem, config.seed);
    trace = run(problem, optimizer_config(config), config.steps, config.seed);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  for (const auto& row : trace) {
    if (!std::isfinite(row.loss)) {
      err << "numerical failure: non-finite loss at step " << row.step << "\n";
      return kExitNumericalFailure;
    }
  }
  try {
    csv::write_file(config.out, csv::to_csv(trace_to_table(trace)));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  out << "wrote " << config.out << "\n";
  return kExitSuccess;
}

/// Runs two configurations on the same problem/seed/steps and writes a
/// side-by-side CSV plus a stacked SVG (loss on top, effective lr below).
inline int cmd_compare(const RunConfig& a, const RunConfig& b, const std::string& out_path,
                       std::ostream& out, std::ostream& err) {
  std::vector<TraceRow> trace_a, trace_b;
  try {
    validate(a);
    validate(b);
    if (!(a.problem == b.problem)) {
      throw ConfigError("compare requires both runs to use the same problem settings");
    }
    if (a.seed != b.seed) throw ConfigError("compare requires both runs to use the same seed");
    if (a.steps != b.steps) {
      throw ConfigError("compare requires both runs to use the same steps");
    }
    if (out_path.empty()) throw ConfigError("out is required");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    trace_a = run(make_problem(a.problem, a.seed), optimizer_config(a), a.steps, a.seed);
    trace_b = run(make_problem(b.problem, b.seed), optimizer_config(b), b.steps, b.seed);
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }

  csv::Table table;
  table.header = {"step",
                  "loss_a",
                  "effective_lr_a",
                  "update_l2_norm_a",
                  "update_inf_norm_a",
                  "param_l2_norm_a",
                  "loss_b",
                  "effective_lr_b",
                  "update_l2_norm_b",
                  "update_inf_norm_b",
                  "param_l2_norm_b"};
  table.rows.reserve(trace_a.size());
  for (std::size_t i = 0; i < trace_a.size(); ++i) {
    const TraceRow& ra = trace_a[i];
    const TraceRow& rb = trace_b[i];
    table.rows.push_back({static_cast<double>(ra.step), ra.loss, ra.effective_lr,
                          ra.update_l2_norm, ra.update_inf_norm, ra.param_l2_norm, rb.loss,
                          rb.effective_lr, rb.update_l2_norm, rb.update_inf_norm,
                          rb.param_l2_norm});
  }

  const std::string label_a = std::string(to_string(a.family)) + " (a)";
  const std::string label_b = std::string(to_string(b.family)) + " (b)";
  std::vector<svg::Series> loss_chart{{label_a, {}}, {label_b, {}}};
  std::vector<svg::Series> lr_chart{{label_a, {}}, {label_b, {}}};
  for (std::size_t i = 0; i < trace_a.size(); ++i) {
    const auto t = static_cast<double>(trace_a[i].step);
    loss_chart[0].points.emplace_back(t, trace_a[i].loss);
    loss_chart[1].points.emplace_back(t, trace_b[i].loss);
    lr_chart[0].points.emplace_back(t, trace_a[i].effective_lr);
    lr_chart[1].points.emplace_back(t, trace_b[i].effective_lr);
  }
  svg::ChartOptions loss_opts;
  loss_opts.title = "loss";
  loss_opts.x_label = "step t";
  loss_opts.y_label = "loss";
  svg::ChartOptions lr_opts;
  lr_opts.title = "effective learning rate";
  lr_opts.x_label = "step t";
  lr_opts.y_label = "effective lr";

  const OutputPair paths = output_pair(out_path);
  try {
    csv::write_file(paths.csv, csv::to_csv(table));
    csv::write_file(paths.svg, svg::stacked_chart(loss_chart, loss_opts, lr_chart, lr_opts));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  out << "wrote " << paths.csv << " and " << paths.svg << "\n";
  return kExitSuccess;
}

struct ReportOptions {
  // Base step size used for the overshoot and convergence checks; inferred
  // from the final row of the column when absent.
  std::optional<double> alpha;
  double tolerance = 0.01;
  std::string column = "effective_lr";
};

/// Summarizes one column of a trace CSV: monotonicity, overshoot steps
/// (value > alpha), minimum, and the first step within tolerance of alpha.
inline int cmd_report(const std::string& csv_path, const ReportOptions& options,
                      std::ostream& out, std::ostream& err) {
  csv::Table table;
  try {
    table = csv::read_csv_file(csv_path);
  } catch (const csv::ParseError& e) {
    err << "malformed input: " << e.what() << "\n";
    return kExitMalformedInput;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  auto step_col = table.column("step");
  if (!step_col) step_col = table.column("t");
  const auto value_col = table.column(options.column);
  if (!step_col || !value_col) {
    err << "malformed input: missing required column '" << (!step_col ? "step" : options.column)
        << "'\n";
    return kExitMalformedInput;
  }
  if (table.rows.empty()) {
    err << "malformed input: no data rows\n";
    return kExitMalformedInput;
  }
  if (!(options.tolerance > 0.0)) {
    err << "config error: tolerance must be > 0\n";
    return kExitConfigError;
  }

  const auto step_at = [&](std::size_t i) {
    return static_cast<std::int64_t>(std::llround(table.rows[i][*step_col]));
  };
  const auto value_at = [&](std::size_t i) { return table.rows[i][*value_col]; };

  const std::size_t n = table.rows.size();
  const double alpha = options.alpha ? *options.alpha : value_at(n - 1);

  bool nondecreasing = true;
  std::optional<std::int64_t> first_decrease;
  std::size_t min_index = 0;
  std::vector<std::int64_t> overshoot;
  std::optional<std::int64_t> convergence;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = value_at(i);
    if (i > 0 && v < value_at(i - 1) && !first_decrease) {
      nondecreasing = false;
      first_decrease = step_at(i);
    }
    if (v < value_at(min_index)) min_index = i;
    if (v > alpha) overshoot.push_back(step_at(i));
    if (!convergence && std::abs(v - alpha) <= options.tolerance * std::abs(alpha)) {
      convergence = step_at(i);
    }
  }

  out << "rows: " << n << "\n";
  out << "column: " << options.column << "\n";
  out << "alpha: " << detail::format_g(alpha)
      << (options.alpha ? " (from flag)" : " (inferred from final row)") << "\n";
  out << "nondecreasing: " << (nondecreasing ? "yes" : "no") << "\n";
  if (first_decrease) out << "first decrease step: " << *first_decrease << "\n";
  out << "min step: " << step_at(min_index) << " (value " << csv::format_double(value_at(min_index))
      << ")\n";
  if (overshoot.empty()) {
    out << "overshoot: none\n";
  } else {
    out << "overshoot: " << overshoot.size() << " steps, first at step " << overshoot.front()
        << "\n";
  }
  if (convergence) {
    out << "convergence step: " << *convergence << " (tolerance "
        << detail::format_g(options.tolerance) << ")\n";
  } else {
    out << "convergence step: none (tolerance " << detail::format_g(options.tolerance) << ")\n";
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// Config files: flat `key = value` lines, '#' comments, blank lines ignored.
// CLI flags override file values (the file only supplies defaults).

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace detail

/// Syntax errors surface as csv::ParseError with the 1-based line number.
inline std::vector<ConfigEntry> parse_config_file(const std::string& path) {
  const std::string text = csv::read_file(path);
  std::vector<ConfigEntry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string_view raw(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw csv::ParseError(line_no, "expected 'key = value'");
    }
    const std::string_view key = detail::trim(line.substr(0, eq));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw csv::ParseError(line_no, "missing key before '='");
    if (value.empty()) {
      throw csv::ParseError(line_no, "missing value for key '" + std::string(key) + "'");
    }
    entries.push_back(ConfigEntry{std::string(key), std::string(value), line_no});
  }
  return entries;
}

// Typed config-value parsers; failures raise ConfigError naming the key.

inline double config_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value for '" + key + "': expected a number, got '" + value + "'");
  }
  return v;
}

inline std::int64_t config_int(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value for '" + key + "': expected an integer, got '" + value +
                      "'");
  }
  return v;
}

inline std::uint64_t config_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value for '" + key + "': expected a non-negative integer, got '" +
                      value + "'");
  }
  return v;
}

inline bool config_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("invalid value for '" + key + "': expected true or false, got '" + value +
                    "'");
}

/// Applies `key = value` entries to a RunConfig (the train/compare key set).
/// Unknown keys and unparsable values raise ConfigError naming the key.
inline void apply_run_config(RunConfig& config, const std::vector<ConfigEntry>& entries) {
  for (const auto& e : entries) {
    if (e.key == "family") {
      const auto family = parse_family(e.value);
      if (!family) throw ConfigError("invalid value for 'family': '" + e.value + "'");
      config.family = *family;
    } else if (e.key == "alpha") {
      config.alpha = config_double(e.key, e.value);
    } else if (e.key == "beta1") {
      config.beta1 = config_double(e.key, e.value);
    } else if (e.key == "beta2") {
      config.beta2 = config_double(e.key, e.value);
    } else if (e.key == "eps") {
      config.epsilon = config_double(e.key, e.value);
    } else if (e.key == "weight-decay") {
      config.weight_decay = config_double(e.key, e.value);
    } else if (e.key == "steps") {
      config.steps = config_int(e.key, e.value);
    } else if (e.key == "seed") {
      config.seed = config_uint(e.key, e.value);
    } else if (e.key == "problem") {
      config.problem.name = e.value;
    } else if (e.key == "dim") {
      config.problem.dim = config_int(e.key, e.value);
    } else if (e.key == "condition") {
      config.problem.condition = config_double(e.key, e.value);
    } else if (e.key == "noise-scale") {
      config.problem.noise_scale = config_double(e.key, e.value);
    } else if (e.key == "out") {
      config.out = e.value;
    } else {
      throw ConfigError("unknown config key '" + e.key + "'");
    }
  }
}

}  // namespace adamd::harness
