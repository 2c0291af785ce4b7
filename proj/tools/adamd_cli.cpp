#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "adamd/harness.hpp"

namespace {

namespace harness = adamd::harness;

bool flag_given(const CLI::App* sub, const std::string& key) {
  const CLI::Option* opt = sub->get_option_no_throw("--" + key);
  return opt != nullptr && opt->count() > 0;
}

// Seed resolution order: --seed flag, config file, ADAMD_SEED, then 0.
std::optional<std::uint64_t> env_seed() {
  const char* value = std::getenv("ADAMD_SEED");
  if (value == nullptr) return std::nullopt;
  return harness::config_uint("ADAMD_SEED", value);
}

adamd::AlgorithmFamily parse_family_or_throw(const std::string& key, const std::string& value) {
  const auto family = adamd::parse_family(value);
  if (!family) {
    throw harness::ConfigError(
        "invalid value for '" + key + "': '" + value +
        "' (expected adam-hat, adam-lr, adamd, adamw, adamwd, lamb, or lambd)");
  }
  return *family;
}

// "mode:beta1:beta2", or just "none" for the constant series.
harness::SeriesSpec parse_series(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, colon - start));
    start = colon + 1;
  }
  const auto mode = adamd::parse_debias_mode(parts[0]);
  if (!mode) {
    throw harness::ConfigError("invalid series '" + text + "': unknown mode '" + parts[0] +
                               "' (expected original, second-moment-only, or none)");
  }
  if (*mode == adamd::DebiasMode::None && parts.size() == 1) {
    return harness::SeriesSpec{*mode, 0.9, 0.999};
  }
  if (parts.size() != 3) {
    throw harness::ConfigError("invalid series '" + text + "': expected mode:beta1:beta2");
  }
  return harness::SeriesSpec{*mode, harness::config_double("series beta1", parts[1]),
                             harness::config_double("series beta2", parts[2])};
}

struct ScheduleArgs {
  double beta1 = 0.9;
  double beta2 = 0.999;
  std::int64_t steps = 100;
  std::string out = "schedule";
  bool log_x = false;
  std::vector<std::string> series;
  std::string config;
};

int run_schedule(const CLI::App* sub, ScheduleArgs& args) {
  bool betas_given = flag_given(sub, "beta1") || flag_given(sub, "beta2");
  if (!args.config.empty()) {
    for (const auto& e : harness::parse_config_file(args.config)) {
      if (flag_given(sub, e.key)) continue;
      if (e.key == "beta1") {
        args.beta1 = harness::config_double(e.key, e.value);
        betas_given = true;
      } else if (e.key == "beta2") {
        args.beta2 = harness::config_double(e.key, e.value);
        betas_given = true;
      } else if (e.key == "steps") {
        args.steps = harness::config_int(e.key, e.value);
      } else if (e.key == "out") {
        args.out = e.value;
      } else if (e.key == "log-x") {
        args.log_x = harness::config_bool(e.key, e.value);
      } else {
        throw harness::ConfigError("unknown config key '" + e.key + "'");
      }
    }
  }

  std::vector<harness::SeriesSpec> series;
  if (!args.series.empty()) {
    for (const auto& text : args.series) series.push_back(parse_series(text));
  } else if (betas_given) {
    series = {{adamd::DebiasMode::Original, args.beta1, args.beta2},
              {adamd::DebiasMode::SecondMomentOnly, args.beta1, args.beta2}};
  } else {
    // Default curves: both modes at beta1 = 0.9 with beta2 in {0.999, 0.95}.
    series = {{adamd::DebiasMode::Original, 0.9, 0.999},
              {adamd::DebiasMode::Original, 0.9, 0.95},
              {adamd::DebiasMode::SecondMomentOnly, 0.9, 0.999},
              {adamd::DebiasMode::SecondMomentOnly, 0.9, 0.95}};
  }
  return harness::cmd_schedule(series, args.steps, args.out, args.log_x, std::cout, std::cerr);
}

void add_run_options(CLI::App* sub, harness::RunConfig& run, std::string& family) {
  sub->add_option("--family", family,
                  "algorithm family: adam-hat, adam-lr, adamd, adamw, adamwd, lamb, lambd")
      ->capture_default_str();
  sub->add_option("--alpha", run.alpha, "base step size")->capture_default_str();
  sub->add_option("--beta1", run.beta1, "first-moment decay")->capture_default_str();
  sub->add_option("--beta2", run.beta2, "second-moment decay")->capture_default_str();
  sub->add_option("--eps", run.epsilon, "denominator guard")->capture_default_str();
  sub->add_option("--weight-decay", run.weight_decay, "decoupled weight decay")
      ->capture_default_str();
  sub->add_option("--steps", run.steps, "number of optimizer steps")->capture_default_str();
  sub->add_option("--seed", run.seed, "run seed (ADAMD_SEED is the fallback)");
  sub->add_option("--problem", run.problem.name,
                  "objective: quadratic, rosenbrock, noisy-quadratic")
      ->capture_default_str();
  sub->add_option("--dim", run.problem.dim, "quadratic dimension")->capture_default_str();
  sub->add_option("--condition", run.problem.condition, "quadratic condition number")
      ->capture_default_str();
  sub->add_option("--noise-scale", run.problem.noise_scale,
                  "gradient noise std-dev (noisy-quadratic)")
      ->capture_default_str();
}

int run_train(const CLI::App* sub, harness::RunConfig& run, const std::string& family,
              const std::string& config_path) {
  run.family = parse_family_or_throw("family", family);
  bool seed_set = flag_given(sub, "seed");
  if (!config_path.empty()) {
    std::vector<harness::ConfigEntry> kept;
    for (const auto& e : harness::parse_config_file(config_path)) {
      if (flag_given(sub, e.key)) continue;
      if (e.key == "seed") seed_set = true;
      kept.push_back(e);
    }
    harness::apply_run_config(run, kept);
  }
  if (!seed_set) {
    if (const auto seed = env_seed()) run.seed = *seed;
  }
  return harness::cmd_train(run, std::cout, std::cerr);
}

struct CompareBArgs {
  std::string family;
  double alpha = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double epsilon = 0.0;
  double weight_decay = 0.0;
};

int run_compare(const CLI::App* sub, harness::RunConfig& a, const std::string& family_a,
                const CompareBArgs& b_args, const std::string& out,
                const std::string& config_path) {
  a.family = parse_family_or_throw("family", family_a);
  bool seed_set = flag_given(sub, "seed");
  std::vector<harness::ConfigEntry> a_entries;
  std::vector<harness::ConfigEntry> b_entries;
  if (!config_path.empty()) {
    for (const auto& e : harness::parse_config_file(config_path)) {
      if (flag_given(sub, e.key)) continue;
      if (e.key.size() > 2 && e.key.substr(e.key.size() - 2) == "-b") {
        const std::string stripped = e.key.substr(0, e.key.size() - 2);
        if (stripped != "family" && stripped != "alpha" && stripped != "beta1" &&
            stripped != "beta2" && stripped != "eps" && stripped != "weight-decay") {
          throw harness::ConfigError("unknown config key '" + e.key + "'");
        }
        b_entries.push_back(harness::ConfigEntry{stripped, e.value, e.line});
      } else {
        if (e.key == "seed") seed_set = true;
        a_entries.push_back(e);
      }
    }
  }
  harness::apply_run_config(a, a_entries);
  if (!seed_set) {
    if (const auto seed = env_seed()) a.seed = *seed;
  }
  a.out = out;

  // Side B inherits every resolved side-A value, then applies its overrides.
  harness::RunConfig b = a;
  harness::apply_run_config(b, b_entries);
  if (flag_given(sub, "family-b")) b.family = parse_family_or_throw("family-b", b_args.family);
  if (flag_given(sub, "alpha-b")) b.alpha = b_args.alpha;
  if (flag_given(sub, "beta1-b")) b.beta1 = b_args.beta1;
  if (flag_given(sub, "beta2-b")) b.beta2 = b_args.beta2;
  if (flag_given(sub, "eps-b")) b.epsilon = b_args.epsilon;
  if (flag_given(sub, "weight-decay-b")) b.weight_decay = b_args.weight_decay;

  return harness::cmd_compare(a, b, out, std::cout, std::cerr);
}

int run_report(const CLI::App* sub, const std::string& path, double alpha, double tolerance,
               std::string column, const std::string& config_path) {
  harness::ReportOptions options;
  if (flag_given(sub, "alpha")) options.alpha = alpha;
  options.tolerance = tolerance;
  options.column = std::move(column);
  if (!config_path.empty()) {
    for (const auto& e : harness::parse_config_file(config_path)) {
      if (flag_given(sub, e.key)) continue;
      if (e.key == "alpha") {
        options.alpha = harness::config_double(e.key, e.value);
      } else if (e.key == "tolerance") {
        options.tolerance = harness::config_double(e.key, e.value);
      } else if (e.key == "column") {
        options.column = e.value;
      } else {
        throw harness::ConfigError("unknown config key '" + e.key + "'");
      }
    }
  }
  return harness::cmd_report(path, options, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"debias-schedule analysis and optimizer benchmark traces", "adamd"};
  app.require_subcommand(1);

  ScheduleArgs sched_args;
  auto* sched = app.add_subcommand("schedule", "tabulate debias factors as CSV + SVG");
  sched->add_option("--beta1", sched_args.beta1, "first-moment decay")->capture_default_str();
  sched->add_option("--beta2", sched_args.beta2, "second-moment decay")->capture_default_str();
  sched->add_option("--steps", sched_args.steps, "largest step t to tabulate")
      ->capture_default_str();
  sched->add_option("--out", sched_args.out, "output path (writes <out>.csv and <out>.svg)")
      ->capture_default_str();
  sched->add_flag("--log-x", sched_args.log_x, "log-scale the x axis");
  sched->add_option("--series", sched_args.series,
                    "series as mode:beta1:beta2 (repeatable; modes: original, "
                    "second-moment-only, none)");
  sched->add_option("--config", sched_args.config, "key = value defaults file");

  harness::RunConfig train_run;
  train_run.out = "trace.csv";
  std::string train_family = "adam-lr";
  std::string train_config;
  auto* train = app.add_subcommand("train", "run one optimizer and write its trace CSV");
  add_run_options(train, train_run, train_family);
  train->add_option("--out", train_run.out, "trace CSV path")->capture_default_str();
  train->add_option("--config", train_config, "key = value defaults file");

  harness::RunConfig cmp_run;
  std::string cmp_family = "adam-lr";
  CompareBArgs cmp_b;
  std::string cmp_out = "compare";
  std::string cmp_config;
  auto* cmp = app.add_subcommand("compare", "run two optimizers on one problem side by side");
  add_run_options(cmp, cmp_run, cmp_family);
  cmp->add_option("--family-b", cmp_b.family, "side-B family (defaults to side A)");
  cmp->add_option("--alpha-b", cmp_b.alpha, "side-B step size");
  cmp->add_option("--beta1-b", cmp_b.beta1, "side-B first-moment decay");
  cmp->add_option("--beta2-b", cmp_b.beta2, "side-B second-moment decay");
  cmp->add_option("--eps-b", cmp_b.epsilon, "side-B denominator guard");
  cmp->add_option("--weight-decay-b", cmp_b.weight_decay, "side-B weight decay");
  cmp->add_option("--out", cmp_out, "output path (writes <out>.csv and <out>.svg)")
      ->capture_default_str();
  cmp->add_option("--config", cmp_config, "key = value defaults file");

  std::string report_path;
  double report_alpha = 0.0;
  double report_tolerance = 0.01;
  std::string report_column = "effective_lr";
  std::string report_config;
  auto* rep = app.add_subcommand("report", "summarize one column of a trace CSV");
  rep->add_option("trace", report_path, "trace CSV path")->required();
  rep->add_option("--alpha", report_alpha,
                  "base step size for overshoot/convergence checks (default: inferred "
                  "from the final row)");
  rep->add_option("--tolerance", report_tolerance, "relative convergence band around alpha")
      ->capture_default_str();
  rep->add_option("--column", report_column, "trace column to analyze")->capture_default_str();
  rep->add_option("--config", report_config, "key = value defaults file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : harness::kExitConfigError;
  }

  try {
    if (sched->parsed()) return run_schedule(sched, sched_args);
    if (train->parsed()) return run_train(train, train_run, train_family, train_config);
    if (cmp->parsed()) return run_compare(cmp, cmp_run, cmp_family, cmp_b, cmp_out, cmp_config);
    if (rep->parsed()) {
      return run_report(rep, report_path, report_alpha, report_tolerance, report_column,
                        report_config);
    }
  } catch (const adamd::csv::ParseError& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return harness::kExitMalformedInput;
  } catch (const harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return harness::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitConfigError;
  }
  return harness::kExitConfigError;
}
