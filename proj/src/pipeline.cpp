#include "compeval/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "compeval/errors.hpp"
#include "compeval/trace_io.hpp"
#include "compeval/version.hpp"
#include "format.hpp"
#include "json.hpp"

namespace compeval::pipeline {

namespace {

namespace fs = std::filesystem;
using detail::format_double;
using detail::format_fixed;
using nlohmann::json;

double take_positive_number(const json& value, const std::string& key) {
  if (!value.is_number()) {
    throw ParseError("config: '" + key + "' must be a number");
  }
  const double v = value.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParseError("config: '" + key + "' must be positive and finite");
  }
  return v;
}

int take_positive_int(const json& value, const std::string& key) {
  if (!value.is_number_integer() || value.get<std::int64_t>() < 1) {
    throw ParseError("config: '" + key + "' must be a positive integer");
  }
  return value.get<int>();
}

energy::IntegrationMethod parse_integration(const std::string& name) {
  if (name == "trapezoid" || name == "trapezoidal") {
    return energy::IntegrationMethod::kTrapezoid;
  }
  if (name == "rectangular") {
    return energy::IntegrationMethod::kRectangular;
  }
  throw ParseError("unknown integration method '" + name +
                   "' (want trapezoid or rectangular)");
}

model::OpsBasis parse_ops_basis(const std::string& name) {
  if (name == "macs") return model::OpsBasis::kMacs;
  if (name == "ops_with_elementwise" || name == "ops") {
    return model::OpsBasis::kOpsWithElementwise;
  }
  throw ParseError("unknown ops basis '" + name +
                   "' (want macs or ops_with_elementwise)");
}

accuracy::ApIntegration parse_ap_integration(const std::string& name) {
  if (name == "exact") return accuracy::ApIntegration::kExact;
  if (name == "eleven_point") return accuracy::ApIntegration::kElevenPoint;
  throw ParseError("unknown AP integration '" + name +
                   "' (want exact or eleven_point)");
}

// First JSON object of a prediction log decides how to read the file.
bool looks_like_detection_log(const std::string& text) {
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t pos = text.find('\n', start);
    if (pos == std::string::npos) pos = text.size();
    const std::string line = text.substr(start, pos - start);
    start = pos + 1;
    if (line.empty() || line == "\r") continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error&) {
      return false;  // let the real parser produce the error message
    }
    return doc.is_object() && doc.contains("detections");
  }
  return false;
}

std::string sanitize_file_stem(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (const char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' ||
                    c == '-';
    out.push_back(ok ? c : '_');
  }
  return out;
}

struct LoadedInput {
  std::string text;
  combined::InputRecord record;
};

LoadedInput load_input(const std::string& path) {
  LoadedInput in;
  in.text = io::read_file(path);
  in.record = {path, io::sha256_hex(in.text)};
  return in;
}

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + out_dir +
                  "': " + ec.message());
  }
}

// Outputs must never silently overwrite an input of the same run.
void check_not_an_input(const RunConfig& config, const std::string& target) {
  std::vector<const std::optional<std::string>*> inputs = {
      &config.model_path,     &config.predictions_path,
      &config.ground_truth_path, &config.labels_path,
      &config.power_path,     &config.resources_path,
      &config.baseline_resources_path, &config.latency_path};
  std::error_code ec;
  const fs::path target_norm = fs::weakly_canonical(target, ec);
  const auto clashes = [&](const std::string& input) {
    std::error_code ec2;
    const fs::path input_norm = fs::weakly_canonical(input, ec2);
    return !ec && !ec2 && input_norm == target_norm;
  };
  for (const auto* input : inputs) {
    if (*input && clashes(**input)) {
      throw MetricError("output path '" + target +
                        "' collides with input '" + **input + "'");
    }
  }
  for (const auto& path : config.report_paths) {
    if (clashes(path)) {
      throw MetricError("output path '" + target +
                        "' collides with input report '" + path + "'");
    }
  }
}

combined::LatencyStats latency_stats(std::vector<double> values) {
  combined::LatencyStats stats;
  stats.count = values.size();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  stats.median_s = n % 2 == 1 ? values[n / 2]
                              : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  double sum = 0.0;
  for (const double v : values) sum += v;
  stats.mean_s = sum / static_cast<double>(n);
  // Nearest-rank 95th percentile.
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(n)));
  stats.p95_s = values[std::max<std::size_t>(rank, 1) - 1];
  return stats;
}

std::string thresholds_to_string(const std::vector<double>& thresholds) {
  std::string out;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (i) out += ",";
    out += format_double(thresholds[i]);
  }
  return out;
}

void embed_effective_config(const RunConfig& config,
                            std::map<std::string, std::string>& dest) {
  dest["ops_basis"] = config.cost.ops_basis == model::OpsBasis::kMacs
                          ? "macs"
                          : "ops_with_elementwise";
  dest["bitwidth_exponent"] = format_double(config.cost.bitwidth_exponent);
  dest["integration"] =
      config.integration == energy::IntegrationMethod::kTrapezoid
          ? "trapezoid"
          : "rectangular";
  dest["iou_thresholds"] = thresholds_to_string(config.iou_thresholds);
  dest["ap_integration"] =
      config.ap_integration == accuracy::ApIntegration::kExact
          ? "exact"
          : "eleven_point";
  dest["topk"] = std::to_string(config.topk);
  dest["cores"] = std::to_string(config.cores);
  dest["zeta"] = format_double(config.zeta);
  dest["bindings"] = combined::bindings_to_string(config.bindings);
  if (config.inferences) {
    dest["inferences"] = std::to_string(*config.inferences);
  }
  if (config.window) {
    dest["window"] = format_double(config.window->start_s) + ":" +
                     format_double(config.window->end_s);
  }
}

std::vector<combined::MetricReport> load_reports(const RunConfig& config) {
  if (config.report_paths.size() < 2) {
    throw MetricError(
        "comparison needs a baseline report and at least one candidate");
  }
  std::vector<combined::MetricReport> reports;
  reports.reserve(config.report_paths.size());
  for (const auto& path : config.report_paths) {
    const LoadedInput in = load_input(path);
    combined::MetricReport report;
    try {
      report = combined::metric_report_from_json(in.text);
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
    if (report.schema_version != kSchemaVersion) {
      throw ParseError(path + ": report schema version " +
                       std::to_string(report.schema_version) +
                       " does not match this tool's version " +
                       std::to_string(kSchemaVersion));
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace

void apply_config_file(RunConfig& config, const std::string& path) {
  const std::string text = io::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": malformed config: " + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError(path + ": config root must be an object");
  }
  static const std::set<std::string> known = {
      "zeta",        "hw_profiles",       "bindings",
      "iou_profile", "integration",       "ops_basis",
      "bitwidth_exponent", "ap_integration", "topk",
      "cores",       "radar_top"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) {
      throw ParseError(path + ": unknown config key '" + key + "'");
    }
    if (key == "zeta") {
      config.zeta = take_positive_number(value, key);
    } else if (key == "hw_profiles") {
      if (!value.is_object()) {
        throw ParseError(path + ": 'hw_profiles' must map names to numbers");
      }
      for (const auto& [name, zeta] : value.items()) {
        config.hw_profiles[name] = take_positive_number(zeta, name);
      }
    } else if (key == "bindings") {
      config.bindings = combined::parse_bindings(value.get<std::string>());
    } else if (key == "iou_profile") {
      config.iou_thresholds = parse_iou_profile(value.get<std::string>());
    } else if (key == "integration") {
      config.integration = parse_integration(value.get<std::string>());
    } else if (key == "ops_basis") {
      config.cost.ops_basis = parse_ops_basis(value.get<std::string>());
    } else if (key == "bitwidth_exponent") {
      config.cost.bitwidth_exponent = take_positive_number(value, key);
    } else if (key == "ap_integration") {
      config.ap_integration = parse_ap_integration(value.get<std::string>());
    } else if (key == "topk") {
      config.topk = take_positive_int(value, key);
    } else if (key == "cores") {
      config.cores = static_cast<unsigned>(take_positive_int(value, key));
    } else if (key == "radar_top") {
      const int top = take_positive_int(value, key);
      if (top > 6) {
        throw ParseError(path + ": 'radar_top' must lie in [1, 6]");
      }
      config.radar_top = top;
    }
  }
}

std::optional<std::string> default_config_path() {
  if (const char* env = std::getenv("COMPEVAL_CONFIG"); env && *env) {
    return std::string(env);
  }
  return std::nullopt;
}

std::vector<double> parse_iou_profile(const std::string& spec) {
  if (spec == "voc") return {0.5};
  if (spec == "coco") {
    std::vector<double> out;
    for (int i = 0; i < 10; ++i) {
      out.push_back(static_cast<double>(50 + 5 * i) / 100.0);
    }
    return out;
  }
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t pos = spec.find(',', start);
    if (pos == std::string::npos) pos = spec.size();
    const std::string token = spec.substr(start, pos - start);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() || !(v > 0.0) ||
        v > 1.0) {
      throw ParseError("bad IoU profile '" + spec +
                       "' (want voc, coco, or thresholds in (0,1])");
    }
    out.push_back(v);
    if (pos == spec.size()) break;
    start = pos + 1;
  }
  if (out.empty()) {
    throw ParseError("empty IoU profile");
  }
  return out;
}

double resolve_hw_profile(const RunConfig& config, const std::string& name) {
  const auto it = config.hw_profiles.find(name);
  if (it == config.hw_profiles.end()) {
    std::string known;
    for (const auto& [profile, zeta] : config.hw_profiles) {
      (void)zeta;
      if (!known.empty()) known += ", ";
      known += profile;
    }
    throw ParseError("unknown hardware profile '" + name + "' (known: " +
                     known + ")");
  }
  return it->second;
}

combined::MetricReport analyze(const RunConfig& config) {
  if (!config.model_path) {
    throw MetricError("analyze needs a model descriptor");
  }
  if (config.ground_truth_path && !config.predictions_path) {
    throw MetricError("ground truth given without a prediction log");
  }

  combined::MetricReport report;
  report.schema_version = kSchemaVersion;
  report.tool_version = kVersion;
  report.generated_at = io::report_timestamp(config.timestamp_epoch);

  const LoadedInput model_in = load_input(*config.model_path);
  const model::ModelDescriptor descriptor =
      model::parse_model_descriptor(model_in.text);
  report.inputs["model"] = model_in.record;
  report.model_name = config.model_name_override.empty()
                          ? descriptor.name
                          : config.model_name_override;

  const model::ParamStats params = model::count_params(descriptor);
  report.total_params = params.total_params;
  report.nonzero_params = params.nonzero_params;
  report.sparsity = params.sparsity;
  const model::CostStats cost = model::count_cost(descriptor, config.cost);
  report.macs_dense = cost.macs_dense;
  report.macs_effective = cost.macs_effective;
  report.chats_dense = cost.chats_dense;
  report.chats_effective = cost.chats_effective;
  const model::DiskSize disk = model::disk_size(descriptor);
  report.disk_size_bytes = disk.bytes;
  report.disk_size_source =
      disk.source == model::SizeSource::kMeasured ? "measured" : "estimated";
  for (const char* field :
       {"total_params", "nonzero_params", "sparsity", "disk_size_bytes",
        "macs_dense", "macs_effective", "chats_dense", "chats_effective"}) {
    report.provenance[field] = "model";
  }

  if (config.predictions_path) {
    const LoadedInput pred_in = load_input(*config.predictions_path);
    report.inputs["predictions"] = pred_in.record;
    if (looks_like_detection_log(pred_in.text)) {
      if (!config.ground_truth_path) {
        throw MetricError(
            "detection predictions need --ground-truth boxes to score "
            "against");
      }
      const LoadedInput gt_in = load_input(*config.ground_truth_path);
      report.inputs["ground_truth"] = gt_in.record;
      const auto predictions =
          io::parse_detections_jsonl(pred_in.text, *config.predictions_path);
      const auto truths = io::parse_ground_truth_jsonl(
          gt_in.text, *config.ground_truth_path);
      const auto joined = io::join_detections(predictions, truths);
      const accuracy::MapResult result = accuracy::mean_average_precision(
          joined, config.iou_thresholds, config.ap_integration);
      report.accuracy = combined::AccuracyValue{"map", result.map};
    } else {
      auto records = io::parse_classification_jsonl(
          pred_in.text, *config.predictions_path);
      if (config.labels_path) {
        const LoadedInput labels_in = load_input(*config.labels_path);
        report.inputs["labels"] = labels_in.record;
        io::apply_label_map(records, labels_in.text, *config.labels_path);
      }
      for (const auto& rec : records) {
        if (rec.true_label < 0) {
          throw MetricError("sample '" + rec.sample_id +
                            "' has no true label (provide it in the log or "
                            "via --labels)");
        }
      }
      const double acc = accuracy::top_k_accuracy(records, config.topk);
      const std::string kind =
          config.topk == 1 ? "top1" : "top" + std::to_string(config.topk);
      report.accuracy = combined::AccuracyValue{kind, acc};
    }
    report.provenance["accuracy"] = "predictions";
  }

  if (config.baseline_resources_path && !config.resources_path) {
    throw MetricError(
        "baseline resource trace given without a workload trace");
  }
  if (config.resources_path) {
    const LoadedInput res_in = load_input(*config.resources_path);
    report.inputs["resources"] = res_in.record;
    const auto samples =
        io::parse_resources_csv(res_in.text, *config.resources_path);
    const resources::ResourceSummary summary =
        resources::summarize(samples, config.cores);
    report.cpu_utilization_pct = summary.cpu.mean_pct;
    report.cpu_peak_pct = summary.cpu.peak_pct;
    report.ram_peak_bytes = summary.ram.peak_bytes;
    report.ram_mean_bytes = summary.ram.mean_bytes;
    if (summary.gpu) {
      report.gpu_utilization_pct = summary.gpu->mean_pct;
    }
    if (summary.cpu.clamped_intervals > 0) {
      report.warnings.push_back(
          std::to_string(summary.cpu.clamped_intervals) +
          " CPU interval(s) fell outside [0,100]% and were clamped");
    }
    for (const char* field :
         {"cpu_utilization_pct", "cpu_peak_pct", "ram_peak_bytes",
          "ram_mean_bytes"}) {
      report.provenance[field] = "resources";
    }
    if (summary.gpu) report.provenance["gpu_utilization_pct"] = "resources";

    if (config.baseline_resources_path) {
      const LoadedInput base_in = load_input(*config.baseline_resources_path);
      report.inputs["baseline_resources"] = base_in.record;
      const auto base_samples = io::parse_resources_csv(
          base_in.text, *config.baseline_resources_path);
      const resources::ResourceSummary base =
          resources::summarize(base_samples, config.cores);
      const resources::ResourceSummary net =
          resources::baseline_subtract(summary, base);
      report.cpu_utilization_net_pct = net.cpu.mean_pct;
      report.ram_peak_net_bytes = static_cast<double>(net.ram.peak_bytes);
      if (net.floored) {
        report.warnings.push_back(
            "idle baseline exceeded the workload on some resource fields; "
            "net values were floored at zero");
      }
      report.provenance["cpu_utilization_net_pct"] = "baseline_resources";
      report.provenance["ram_peak_net_bytes"] = "baseline_resources";
    }
  }

  if (config.power_path) {
    const LoadedInput power_in = load_input(*config.power_path);
    report.inputs["power"] = power_in.record;
    const auto samples =
        io::parse_power_csv(power_in.text, *config.power_path);
    const energy::EnergyResult result =
        energy::integrate(samples, config.integration, config.window);
    report.energy_total_j = result.joules;
    report.mean_power_w = result.mean_power_w;
    if (result.coarse_sampling) {
      report.warnings.push_back(
          "power trace sampling is coarse (largest gap " +
          format_double(result.max_gap_s) + " s over " +
          format_double(result.duration_s) +
          " s); integrated energy may be inaccurate");
    }
    if (config.inferences) {
      report.energy_per_inference_j =
          energy::energy_per_inference(result, *config.inferences);
      report.provenance["energy_per_inference_j"] = "power";
    }
    report.provenance["energy_total_j"] = "power";
    report.provenance["mean_power_w"] = "power";
  }

  if (config.latency_path) {
    const LoadedInput lat_in = load_input(*config.latency_path);
    report.inputs["latency"] = lat_in.record;
    const auto values =
        io::parse_latency_csv(lat_in.text, *config.latency_path);
    if (values.empty()) {
      throw MetricError("latency file '" + *config.latency_path +
                        "' has no measurements");
    }
    report.latency = latency_stats(values);
    report.provenance["latency"] = "latency";
  }

  embed_effective_config(config, report.config);
  return report;
}

std::string write_analyze_output(const RunConfig& config,
                                 const combined::MetricReport& report) {
  ensure_out_dir(config.out_dir);
  const std::string path =
      (fs::path(config.out_dir) /
       (sanitize_file_stem(report.model_name) + ".report.json"))
          .string();
  check_not_an_input(config, path);
  io::write_file_atomic(path, combined::metric_report_to_json(report));
  return path;
}

report::ComparisonReport compare(const RunConfig& config) {
  const std::vector<combined::MetricReport> reports = load_reports(config);
  const combined::MetricReport& baseline = reports.front();
  const std::vector<combined::MetricReport> candidates(reports.begin() + 1,
                                                       reports.end());
  const combined::RankOutcome outcome = combined::rank_by_ocs(
      baseline, candidates, config.bindings, config.zeta);
  if (outcome.ranked.empty()) {
    throw MetricError("no candidate could be compared: " +
                      outcome.skipped.front().message);
  }

  report::ComparisonReport out;
  out.schema_version = kSchemaVersion;
  out.tool_version = kVersion;
  out.generated_at = io::report_timestamp(config.timestamp_epoch);
  out.baseline_name = baseline.model_name;
  out.zeta = config.zeta;
  out.bindings = config.bindings;
  for (const auto& entry : outcome.ranked) {
    out.candidates.push_back(
        {entry.model_name, entry.score.ratio_set, entry.score.value});
  }
  for (std::size_t i = 0; i < config.report_paths.size(); ++i) {
    const std::string role =
        i == 0 ? "baseline" : "candidate_" + std::to_string(i);
    const std::string text = io::read_file(config.report_paths[i]);
    out.inputs[role] = {config.report_paths[i], io::sha256_hex(text)};
  }
  for (const auto& skipped : outcome.skipped) {
    out.notes.push_back("skipped candidate '" + skipped.model_name +
                        "': " + skipped.message);
  }
  embed_effective_config(config, out.config);
  out.config["radar_top"] = std::to_string(config.radar_top);
  return out;
}

namespace {

// Best-effort scatter of raw (speed, accuracy, size) per report; emitted
// only when every report carries the bound fields.
std::optional<std::string> try_accuracy_speed_chart(
    const RunConfig& config, const report::ComparisonReport& comparison) {
  try {
    const std::vector<combined::MetricReport> reports = load_reports(config);
    report::ChartSpec spec;
    spec.kind = report::ChartKind::kAccuracySpeed;
    std::string kind = config.bindings.performance_source;
    if (kind == "auto" && reports.front().accuracy) {
      kind = reports.front().accuracy->kind;
    }
    spec.axes = {std::string(
                     combined::speed_source_name(config.bindings.speed)),
                 "accuracy (" + kind + ")"};
    spec.title = "Accuracy vs speed (marker area = " +
                 std::string(combined::size_source_name(config.bindings.size)) +
                 ")";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      if (!r.accuracy) return std::nullopt;
      report::ChartSeries series;
      series.name = i == 0 ? r.model_name + " (baseline)" : r.model_name;
      series.values = {combined::speed_metric(r, config.bindings),
                       r.accuracy->value,
                       combined::size_metric(r, config.bindings)};
      spec.series.push_back(std::move(series));
    }
    (void)comparison;
    return report::render_accuracy_speed(spec);
  } catch (const Error&) {
    return std::nullopt;  // auxiliary chart; missing fields just skip it
  }
}

}  // namespace

CompareOutputs write_compare_outputs(const RunConfig& config,
                                     const report::ComparisonReport& report) {
  ensure_out_dir(config.out_dir);
  CompareOutputs outputs;
  outputs.log_path = (fs::path(config.out_dir) / "comparison.json").string();
  outputs.radar_path = (fs::path(config.out_dir) / "radar.svg").string();
  outputs.bar_path = (fs::path(config.out_dir) / "ocs_bar.svg").string();
  for (const auto& path :
       {outputs.log_path, outputs.radar_path, outputs.bar_path}) {
    check_not_an_input(config, path);
  }
  // Render everything before writing anything, so a render failure leaves
  // no partial output set behind.
  const std::string log = report::comparison_to_json(report);
  const std::string radar =
      report::comparison_radar(report, config.radar_top);
  const std::string bar = report::comparison_bar(report);
  const std::optional<std::string> scatter =
      try_accuracy_speed_chart(config, report);
  io::write_file_atomic(outputs.log_path, log);
  io::write_file_atomic(outputs.radar_path, radar);
  io::write_file_atomic(outputs.bar_path, bar);
  if (scatter) {
    const std::string scatter_path =
        (fs::path(config.out_dir) / "accuracy_speed.svg").string();
    check_not_an_input(config, scatter_path);
    io::write_file_atomic(scatter_path, *scatter);
    outputs.scatter_path = scatter_path;
  }
  return outputs;
}

std::string write_ranking_output(const RunConfig& config,
                                 const report::ComparisonReport& report) {
  ensure_out_dir(config.out_dir);
  const std::string path =
      (fs::path(config.out_dir) / "comparison.json").string();
  check_not_an_input(config, path);
  io::write_file_atomic(path, report::comparison_to_json(report));
  return path;
}

std::string format_ranking(const report::ComparisonReport& report) {
  std::string out = "baseline: " + report.baseline_name + "\n";
  out += "rank  model                             OCS         P        S"
         "        C        E\n";
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    const auto& entry = report.candidates[i];
    char line[160];
    std::snprintf(line, sizeof(line),
                  "%4zu  %-30s %10.4f  %7.4f  %7.4f  %7.4f  %7.4f\n", i + 1,
                  entry.model_name.c_str(), entry.ocs, entry.ratios.p,
                  entry.ratios.s, entry.ratios.c, entry.ratios.e);
    out += line;
  }
  for (const auto& note : report.notes) {
    out += "note: " + note + "\n";
  }
  return out;
}

ValidationSummary validate(const RunConfig& config) {
  ValidationSummary summary;
  const auto check = [&summary](const std::optional<std::string>& path,
                                auto&& fn) {
    if (!path) return;
    try {
      summary.checked.push_back(*path + ": " + fn(io::read_file(*path)));
    } catch (const Error& e) {
      summary.problems.push_back({*path, e.what()});
    }
  };

  bool detection_predictions = false;
  check(config.model_path, [](const std::string& text) {
    const auto m = model::parse_model_descriptor(text);
    return "model descriptor '" + m.name + "' with " +
           std::to_string(m.layers.size()) + " layer(s)";
  });
  check(config.predictions_path,
        [&config, &detection_predictions](const std::string& text) {
          if (looks_like_detection_log(text)) {
            detection_predictions = true;
            const auto records =
                io::parse_detections_jsonl(text, *config.predictions_path);
            return "detection log with " + std::to_string(records.size()) +
                   " image(s)";
          }
          const auto records = io::parse_classification_jsonl(
              text, *config.predictions_path);
          std::size_t labeled = 0;
          for (const auto& r : records) {
            if (r.true_label >= 0) ++labeled;
          }
          return "classification log with " + std::to_string(records.size()) +
                 " record(s), " + std::to_string(labeled) + " labeled";
        });
  check(config.ground_truth_path, [&config](const std::string& text) {
    const auto records =
        io::parse_ground_truth_jsonl(text, *config.ground_truth_path);
    return "ground truth for " + std::to_string(records.size()) + " image(s)";
  });
  check(config.labels_path, [&config](const std::string& text) {
    std::vector<accuracy::ClassificationRecord> none;
    io::apply_label_map(none, text, *config.labels_path);
    return std::string("label map");
  });
  check(config.power_path, [&config](const std::string& text) {
    const auto samples = io::parse_power_csv(text, *config.power_path);
    return "power trace with " + std::to_string(samples.size()) +
           " sample(s)";
  });
  check(config.resources_path, [&config](const std::string& text) {
    const auto samples =
        io::parse_resources_csv(text, *config.resources_path);
    return "resource trace with " + std::to_string(samples.size()) +
           " sample(s)";
  });
  check(config.baseline_resources_path, [&config](const std::string& text) {
    const auto samples =
        io::parse_resources_csv(text, *config.baseline_resources_path);
    return "baseline resource trace with " + std::to_string(samples.size()) +
           " sample(s)";
  });
  check(config.latency_path, [&config](const std::string& text) {
    const auto values = io::parse_latency_csv(text, *config.latency_path);
    return "latency list with " + std::to_string(values.size()) +
           " measurement(s)";
  });
  for (const auto& path : config.report_paths) {
    try {
      const auto report =
          combined::metric_report_from_json(io::read_file(path));
      summary.checked.push_back(path + ": metric report for '" +
                                report.model_name + "'");
    } catch (const Error& e) {
      summary.problems.push_back({path, e.what()});
    }
  }

  if (detection_predictions && !config.ground_truth_path) {
    summary.problems.push_back(
        {*config.predictions_path,
         "detection predictions have no ground truth to score against"});
  }
  if (config.ground_truth_path && !config.predictions_path) {
    summary.problems.push_back(
        {*config.ground_truth_path,
         "ground truth given without a prediction log"});
  }
  if (config.baseline_resources_path && !config.resources_path) {
    summary.problems.push_back(
        {*config.baseline_resources_path,
         "baseline resource trace given without a workload trace"});
  }
  return summary;
}

}  // namespace compeval::pipeline
