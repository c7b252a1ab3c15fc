#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "compeval/errors.hpp"
#include "compeval/pipeline.hpp"
#include "compeval/version.hpp"

namespace {

using compeval::pipeline::RunConfig;

// Flag storage plus the CLI11 option handles, so only flags the user
// actually passed override the config file.
struct Flags {
  std::string config_path;
  std::int64_t timestamp = 0;
  std::string model, predictions, ground_truth, labels;
  std::string power, resources, baseline_resources, latency;
  std::uint64_t inferences = 0;
  unsigned cores = 1;
  int topk = 1;
  std::string iou_profile;
  std::string integration;
  std::string window;
  std::string name;
  std::string out_dir;
  double zeta = 1.0;
  std::string hw_profile;
  std::string bindings;
  bool dense_only = false;
  int radar_top = 4;
  std::string baseline;
  std::vector<std::string> candidates;

  CLI::Option* config_opt = nullptr;
  CLI::Option* timestamp_opt = nullptr;
  CLI::Option* inferences_opt = nullptr;
  CLI::Option* cores_opt = nullptr;
  CLI::Option* topk_opt = nullptr;
  CLI::Option* iou_opt = nullptr;
  CLI::Option* integration_opt = nullptr;
  CLI::Option* window_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* zeta_opt = nullptr;
  CLI::Option* hw_opt = nullptr;
  CLI::Option* bindings_opt = nullptr;
  CLI::Option* radar_top_opt = nullptr;
};

void add_common(CLI::App* cmd, Flags& f) {
  f.config_opt = cmd->add_option(
      "--config", f.config_path,
      "JSON config file; default taken from $COMPEVAL_CONFIG");
  f.timestamp_opt = cmd->add_option(
      "--timestamp", f.timestamp,
      "Fix report timestamps to this UNIX epoch (reproducible output)");
}

void add_analysis_inputs(CLI::App* cmd, Flags& f) {
  cmd->add_option("--model", f.model, "Model descriptor (JSON)");
  cmd->add_option("--predictions", f.predictions,
                  "Prediction log (JSON Lines)");
  cmd->add_option("--ground-truth", f.ground_truth,
                  "Ground-truth boxes for detection logs (JSON Lines)");
  cmd->add_option("--labels", f.labels,
                  "True-label sidecar for classification logs (JSON Lines)");
  cmd->add_option("--power", f.power, "Power trace (CSV: t_s,power_w)");
  cmd->add_option("--resources", f.resources,
                  "Resource trace (CSV: t_s,cpu_rt_s,ram_bytes[,gpu_util_pct])");
  cmd->add_option("--baseline-resources", f.baseline_resources,
                  "Idle-baseline resource trace to subtract");
  cmd->add_option("--latency", f.latency,
                  "Per-inference wall times (CSV: latency_s)");
  f.inferences_opt =
      cmd->add_option("--inferences", f.inferences,
                      "Inference count for per-inference energy")
          ->check(CLI::PositiveNumber);
  f.cores_opt = cmd->add_option("--cores", f.cores,
                                "Core count for CPU utilization (default 1)")
                    ->check(CLI::PositiveNumber);
  f.topk_opt = cmd->add_option("--topk", f.topk,
                               "k for top-k classification accuracy")
                   ->check(CLI::PositiveNumber);
  f.iou_opt = cmd->add_option("--iou-profile", f.iou_profile,
                              "IoU thresholds: voc, coco, or a comma list");
  f.integration_opt =
      cmd->add_option("--integration", f.integration,
                      "Energy integration: trapezoid or rectangular");
  f.window_opt = cmd->add_option(
      "--window", f.window, "Clip the power trace to START:END seconds");
}

void add_comparison_knobs(CLI::App* cmd, Flags& f) {
  f.zeta_opt = cmd->add_option("--zeta", f.zeta,
                               "Hardware speed constant (default 1.0)");
  f.hw_opt = cmd->add_option("--hw-profile", f.hw_profile,
                             "Named hardware profile supplying the constant");
  f.zeta_opt->excludes(f.hw_opt);
  f.hw_opt->excludes(f.zeta_opt);
  f.bindings_opt = cmd->add_option(
      "--bindings", f.bindings,
      "Metric bindings, e.g. speed=latency,size=params,efficiency=power");
  cmd->add_flag("--dense-only", f.dense_only,
                "Ignore sparsity-scaled effective counts");
}

RunConfig build_config(const Flags& f) {
  RunConfig cfg;
  if (f.config_opt->count()) {
    compeval::pipeline::apply_config_file(cfg, f.config_path);
  } else if (const auto path = compeval::pipeline::default_config_path()) {
    compeval::pipeline::apply_config_file(cfg, *path);
  }
  if (f.timestamp_opt->count()) cfg.timestamp_epoch = f.timestamp;

  const auto set_path = [](const std::string& value,
                           std::optional<std::string>& dest) {
    if (!value.empty()) dest = value;
  };
  set_path(f.model, cfg.model_path);
  set_path(f.predictions, cfg.predictions_path);
  set_path(f.ground_truth, cfg.ground_truth_path);
  set_path(f.labels, cfg.labels_path);
  set_path(f.power, cfg.power_path);
  set_path(f.resources, cfg.resources_path);
  set_path(f.baseline_resources, cfg.baseline_resources_path);
  set_path(f.latency, cfg.latency_path);

  if (f.inferences_opt && f.inferences_opt->count()) {
    cfg.inferences = f.inferences;
  }
  if (f.cores_opt && f.cores_opt->count()) cfg.cores = f.cores;
  if (f.topk_opt && f.topk_opt->count()) cfg.topk = f.topk;
  if (f.iou_opt && f.iou_opt->count()) {
    cfg.iou_thresholds = compeval::pipeline::parse_iou_profile(f.iou_profile);
  }
  if (f.integration_opt && f.integration_opt->count()) {
    if (f.integration == "trapezoid" || f.integration == "trapezoidal") {
      cfg.integration = compeval::energy::IntegrationMethod::kTrapezoid;
    } else if (f.integration == "rectangular") {
      cfg.integration = compeval::energy::IntegrationMethod::kRectangular;
    } else {
      throw compeval::ParseError("unknown integration method '" +
                                 f.integration +
                                 "' (want trapezoid or rectangular)");
    }
  }
  if (f.window_opt && f.window_opt->count()) {
    const std::size_t sep = f.window.find(':');
    if (sep == std::string::npos) {
      throw compeval::ParseError("window must be START:END seconds, got '" +
                                 f.window + "'");
    }
    try {
      compeval::energy::TimeWindow w;
      std::size_t used = 0;
      w.start_s = std::stod(f.window.substr(0, sep), &used);
      if (used != sep) throw std::invalid_argument("");
      const std::string rest = f.window.substr(sep + 1);
      w.end_s = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("");
      cfg.window = w;
    } catch (const std::exception&) {
      throw compeval::ParseError("window must be START:END seconds, got '" +
                                 f.window + "'");
    }
  }
  if (f.out_opt && f.out_opt->count()) cfg.out_dir = f.out_dir;
  if (!f.name.empty()) cfg.model_name_override = f.name;

  if (f.bindings_opt && f.bindings_opt->count()) {
    cfg.bindings = compeval::combined::parse_bindings(f.bindings);
  }
  if (f.dense_only) cfg.bindings.dense_only = true;
  if (f.hw_opt && f.hw_opt->count()) {
    cfg.zeta = compeval::pipeline::resolve_hw_profile(cfg, f.hw_profile);
  } else if (f.zeta_opt && f.zeta_opt->count()) {
    if (!(f.zeta > 0.0)) {
      throw compeval::ParseError("--zeta must be positive");
    }
    cfg.zeta = f.zeta;
  }
  if (f.radar_top_opt && f.radar_top_opt->count()) {
    cfg.radar_top = f.radar_top;
  }

  cfg.report_paths.clear();
  if (!f.baseline.empty()) cfg.report_paths.push_back(f.baseline);
  cfg.report_paths.insert(cfg.report_paths.end(), f.candidates.begin(),
                          f.candidates.end());
  return cfg;
}

int run_analyze(const Flags& f) {
  const RunConfig cfg = build_config(f);
  const auto report = compeval::pipeline::analyze(cfg);
  const std::string path =
      compeval::pipeline::write_analyze_output(cfg, report);
  for (const auto& warning : report.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  std::cout << "wrote " << path << "\n";
  return 0;
}

int run_compare(const Flags& f) {
  const RunConfig cfg = build_config(f);
  const auto report = compeval::pipeline::compare(cfg);
  const auto outputs = compeval::pipeline::write_compare_outputs(cfg, report);
  for (const auto& note : report.notes) {
    std::cerr << "note: " << note << "\n";
  }
  std::cout << "wrote " << outputs.log_path << "\n";
  std::cout << "wrote " << outputs.radar_path << "\n";
  std::cout << "wrote " << outputs.bar_path << "\n";
  if (outputs.scatter_path) {
    std::cout << "wrote " << *outputs.scatter_path << "\n";
  }
  return 0;
}

int run_rank(const Flags& f) {
  const RunConfig cfg = build_config(f);
  const auto report = compeval::pipeline::compare(cfg);
  std::cout << compeval::pipeline::format_ranking(report);
  if (f.out_opt && f.out_opt->count()) {
    const std::string path =
        compeval::pipeline::write_ranking_output(cfg, report);
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int run_validate(const Flags& f) {
  const RunConfig cfg = build_config(f);
  const bool has_any = cfg.model_path || cfg.predictions_path ||
                       cfg.ground_truth_path || cfg.labels_path ||
                       cfg.power_path || cfg.resources_path ||
                       cfg.baseline_resources_path || cfg.latency_path ||
                       !cfg.report_paths.empty();
  if (!has_any) {
    std::cerr << "error: nothing to validate; name at least one input\n";
    return 1;
  }
  const auto summary = compeval::pipeline::validate(cfg);
  for (const auto& line : summary.checked) {
    std::cout << "ok: " << line << "\n";
  }
  for (const auto& problem : summary.problems) {
    std::cout << "problem: " << problem.path << ": " << problem.message
              << "\n";
  }
  if (!summary.problems.empty()) {
    std::cout << summary.problems.size() << " problem(s) found\n";
    return 2;
  }
  std::cout << "all inputs valid\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Evaluate and compare compressed neural networks from offline "
      "artifacts: model descriptors, prediction logs, and measurement "
      "traces."};
  app.set_version_flag("--version", compeval::kVersion);
  app.require_subcommand(1);

  Flags analyze_flags, compare_flags, rank_flags, validate_flags;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Evaluate one model into a metric report");
  add_common(analyze, analyze_flags);
  add_analysis_inputs(analyze, analyze_flags);
  analyze->get_option("--model")->required();
  analyze->add_option("--name", analyze_flags.name,
                      "Override the model name in the report");
  analyze_flags.out_opt = analyze->add_option(
      "--out", analyze_flags.out_dir, "Output directory (default .)");

  CLI::App* compare = app.add_subcommand(
      "compare",
      "Compare candidate metric reports against a baseline report");
  add_common(compare, compare_flags);
  compare->add_option("--baseline", compare_flags.baseline,
                      "Baseline metric report (JSON)")
      ->required();
  compare->add_option("candidates", compare_flags.candidates,
                      "Candidate metric reports (JSON)")
      ->required();
  add_comparison_knobs(compare, compare_flags);
  compare_flags.radar_top_opt =
      compare->add_option("--top", compare_flags.radar_top,
                          "Radar series cap when candidates overflow it")
          ->check(CLI::Range(1, 6));
  compare_flags.out_opt = compare->add_option(
      "--out", compare_flags.out_dir, "Output directory (default .)");

  CLI::App* rank = app.add_subcommand(
      "rank", "Rank candidate reports by overall compression success");
  add_common(rank, rank_flags);
  rank->add_option("--baseline", rank_flags.baseline,
                   "Baseline metric report (JSON)")
      ->required();
  rank->add_option("candidates", rank_flags.candidates,
                   "Candidate metric reports (JSON)")
      ->required();
  add_comparison_knobs(rank, rank_flags);
  rank_flags.out_opt = rank->add_option(
      "--out", rank_flags.out_dir,
      "Also write the comparison log into this directory");

  CLI::App* validate = app.add_subcommand(
      "validate", "Check inputs for format problems without evaluating");
  add_common(validate, validate_flags);
  add_analysis_inputs(validate, validate_flags);
  validate->add_option("reports", validate_flags.candidates,
                       "Metric reports to check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are one exit class
  }

  try {
    if (app.got_subcommand(analyze)) return run_analyze(analyze_flags);
    if (app.got_subcommand(compare)) return run_compare(compare_flags);
    if (app.got_subcommand(rank)) return run_rank(rank_flags);
    if (app.got_subcommand(validate)) return run_validate(validate_flags);
  } catch (const compeval::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const compeval::MetricError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const compeval::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 1;
}
