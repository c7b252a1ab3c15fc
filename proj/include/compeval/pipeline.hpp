#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "compeval/accuracy.hpp"
#include "compeval/combined.hpp"
#include "compeval/energy.hpp"
#include "compeval/model_graph.hpp"
#include "compeval/report.hpp"

namespace compeval::pipeline {

// One subcommand invocation after merging defaults, config file, and flags
// (flags win). The CLI owns the merging; everything below consumes the
// already-resolved struct.
struct RunConfig {
  // analyze / validate inputs
  std::optional<std::string> model_path;
  std::optional<std::string> predictions_path;
  std::optional<std::string> ground_truth_path;
  std::optional<std::string> labels_path;
  std::optional<std::string> power_path;
  std::optional<std::string> resources_path;
  std::optional<std::string> baseline_resources_path;
  std::optional<std::string> latency_path;

  // compare / rank inputs: metric-report files, first one is the baseline
  std::vector<std::string> report_paths;

  std::optional<std::uint64_t> inferences;
  double zeta = 1.0;
  std::map<std::string, double> hw_profiles{{"cpu", 1.0}, {"turing", 4.0}};
  combined::RatioBindings bindings;
  std::vector<double> iou_thresholds{0.5};
  accuracy::ApIntegration ap_integration = accuracy::ApIntegration::kExact;
  int topk = 1;
  energy::IntegrationMethod integration = energy::IntegrationMethod::kTrapezoid;
  std::optional<energy::TimeWindow> window;
  model::CostOptions cost;
  unsigned cores = 1;
  std::optional<std::int64_t> timestamp_epoch;  // forces report timestamps
  int radar_top = 4;  // radar series cap when ranking overflows it
  std::string out_dir = ".";
  std::string model_name_override;
};

// Config file is JSON; recognized keys: zeta, hw_profiles, bindings,
// iou_profile, integration, ops_basis, bitwidth_exponent, ap_integration,
// topk, cores, radar_top. Unknown keys are errors. Mutates only the fields
// the file mentions.
void apply_config_file(RunConfig& config, const std::string& path);

// Path from $COMPEVAL_CONFIG, if set and non-empty.
std::optional<std::string> default_config_path();

// Named IoU threshold sets: "voc" = {0.5}, "coco" = {0.50,0.55,...,0.95};
// anything else is a comma-separated list of thresholds in (0,1].
std::vector<double> parse_iou_profile(const std::string& spec);

// Look up a named hardware speed constant; ParseError on unknown names.
double resolve_hw_profile(const RunConfig& config, const std::string& name);

// Build a MetricReport from whatever inputs the config names. The model
// descriptor is required; every other input is optional and its metrics are
// simply absent when the file is not given. Predictions without ground
// truth (detection mode) is a hard error rather than a silently empty mAP.
combined::MetricReport analyze(const RunConfig& config);

// Write the report into out_dir as <model_name>.report.json; returns the
// path actually written.
std::string write_analyze_output(const RunConfig& config,
                                 const combined::MetricReport& report);

// Load config.report_paths (baseline first), compute ratios and scores for
// every candidate, and rank them.
report::ComparisonReport compare(const RunConfig& config);

struct CompareOutputs {
  std::string log_path;
  std::string radar_path;
  std::string bar_path;
  // present only when every report carried the fields the scatter needs
  std::optional<std::string> scatter_path;
};

CompareOutputs write_compare_outputs(const RunConfig& config,
                                     const report::ComparisonReport& report);

// Write only the comparison log (the rank subcommand's optional --out);
// returns the path written.
std::string write_ranking_output(const RunConfig& config,
                                 const report::ComparisonReport& report);

// Fixed-width text table of a ranking, for terminal output.
std::string format_ranking(const report::ComparisonReport& report);

struct ValidationFinding {
  std::string path;
  std::string message;
};

struct ValidationSummary {
  std::vector<std::string> checked;  // "<path>: <what it parsed as>"
  std::vector<ValidationFinding> problems;
};

// Lint every input the config names without computing metrics. Collects
// problems instead of stopping at the first one.
ValidationSummary validate(const RunConfig& config);

}  // namespace compeval::pipeline
