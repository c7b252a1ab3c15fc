#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "compeval/accuracy.hpp"
#include "compeval/combined.hpp"
#include "compeval/energy.hpp"
#include "compeval/errors.hpp"
#include "compeval/model_graph.hpp"
#include "compeval/pipeline.hpp"
#include "compeval/report.hpp"
#include "compeval/trace_io.hpp"
#include "compeval/version.hpp"

namespace py = pybind11;
using namespace compeval;

namespace {

energy::IntegrationMethod integration_from_name(const std::string& name) {
  if (name.empty() || name == "trapezoid" || name == "trapezoidal") {
    return energy::IntegrationMethod::kTrapezoid;
  }
  if (name == "rectangular") return energy::IntegrationMethod::kRectangular;
  throw ParseError("unknown integration method '" + name +
                   "' (want trapezoid or rectangular)");
}

// The analyze pipeline wants file paths; the keyword surface mirrors the
// CLI flags. Empty strings mean "not given".
std::string analyze_json(
    const std::string& model, const std::string& predictions,
    const std::string& ground_truth, const std::string& labels,
    const std::string& power, const std::string& resources,
    const std::string& baseline_resources, const std::string& latency,
    std::optional<std::uint64_t> inferences, int topk, unsigned cores,
    const std::string& iou_profile, const std::string& integration,
    std::optional<std::pair<double, double>> window,
    std::optional<std::int64_t> timestamp, const std::string& name,
    const std::string& ops_basis, double bitwidth_exponent) {
  pipeline::RunConfig cfg;
  const auto set = [](const std::string& value,
                      std::optional<std::string>& dest) {
    if (!value.empty()) dest = value;
  };
  set(model, cfg.model_path);
  set(predictions, cfg.predictions_path);
  set(ground_truth, cfg.ground_truth_path);
  set(labels, cfg.labels_path);
  set(power, cfg.power_path);
  set(resources, cfg.resources_path);
  set(baseline_resources, cfg.baseline_resources_path);
  set(latency, cfg.latency_path);
  cfg.inferences = inferences;
  cfg.topk = topk;
  cfg.cores = cores;
  if (!iou_profile.empty()) {
    cfg.iou_thresholds = pipeline::parse_iou_profile(iou_profile);
  }
  cfg.integration = integration_from_name(integration);
  if (window) cfg.window = energy::TimeWindow{window->first, window->second};
  cfg.timestamp_epoch = timestamp;
  cfg.model_name_override = name;
  if (ops_basis == "ops_with_elementwise") {
    cfg.cost.ops_basis = model::OpsBasis::kOpsWithElementwise;
  } else if (!ops_basis.empty() && ops_basis != "macs") {
    throw ParseError("unknown ops basis '" + ops_basis +
                     "' (want macs or ops_with_elementwise)");
  }
  cfg.cost.bitwidth_exponent = bitwidth_exponent;
  return combined::metric_report_to_json(pipeline::analyze(cfg));
}

pipeline::RunConfig comparison_config(const std::vector<std::string>& reports,
                                      double zeta, const std::string& bindings,
                                      std::optional<std::int64_t> timestamp,
                                      int radar_top) {
  pipeline::RunConfig cfg;
  cfg.report_paths = reports;
  if (!(zeta > 0.0)) throw ParseError("zeta must be positive");
  cfg.zeta = zeta;
  if (!bindings.empty()) cfg.bindings = combined::parse_bindings(bindings);
  cfg.timestamp_epoch = timestamp;
  cfg.radar_top = radar_top;
  return cfg;
}

std::string compare_json(const std::vector<std::string>& reports, double zeta,
                         const std::string& bindings,
                         std::optional<std::int64_t> timestamp,
                         int radar_top) {
  const auto cfg =
      comparison_config(reports, zeta, bindings, timestamp, radar_top);
  return report::comparison_to_json(pipeline::compare(cfg));
}

std::string rank_text(const std::vector<std::string>& reports, double zeta,
                      const std::string& bindings) {
  const auto cfg = comparison_config(reports, zeta, bindings, 0, 4);
  return pipeline::format_ranking(pipeline::compare(cfg));
}

py::dict ratio_dict(const std::string& baseline_json,
                    const std::string& candidate_json,
                    const std::string& bindings, double zeta) {
  const auto base = combined::metric_report_from_json(baseline_json);
  const auto cand = combined::metric_report_from_json(candidate_json);
  combined::RatioBindings b;
  if (!bindings.empty()) b = combined::parse_bindings(bindings);
  const auto ratios = combined::compute_ratios(base, cand, b, zeta);
  const auto score = combined::ocs(ratios);
  py::dict out;
  out["p"] = ratios.p;
  out["s"] = ratios.s;
  out["c"] = ratios.c;
  out["e"] = ratios.e;
  out["zeta"] = ratios.zeta;
  out["ocs"] = score.value;
  return out;
}

double top_k_from_text(const std::string& jsonl, int k,
                       const std::string& labels_jsonl) {
  auto records = io::parse_classification_jsonl(jsonl, "<predictions>");
  if (!labels_jsonl.empty()) {
    io::apply_label_map(records, labels_jsonl, "<labels>");
  }
  return accuracy::top_k_accuracy(records, k);
}

double map_from_text(const std::string& predictions_jsonl,
                     const std::string& ground_truth_jsonl,
                     const std::vector<double>& thresholds,
                     const std::string& integration) {
  const auto preds =
      io::parse_detections_jsonl(predictions_jsonl, "<predictions>");
  const auto gts =
      io::parse_ground_truth_jsonl(ground_truth_jsonl, "<ground_truth>");
  const auto joined = io::join_detections(preds, gts);
  accuracy::ApIntegration method = accuracy::ApIntegration::kExact;
  if (integration == "eleven_point") {
    method = accuracy::ApIntegration::kElevenPoint;
  } else if (!integration.empty() && integration != "exact") {
    throw ParseError("unknown AP integration '" + integration +
                     "' (want exact or eleven_point)");
  }
  return accuracy::mean_average_precision(joined, thresholds, method).map;
}

py::dict energy_dict(const std::string& csv, const std::string& method,
                     std::optional<std::pair<double, double>> window) {
  const auto samples = io::parse_power_csv(csv, "<power>");
  std::optional<energy::TimeWindow> w;
  if (window) w = energy::TimeWindow{window->first, window->second};
  const auto result =
      energy::integrate(samples, integration_from_name(method), w);
  py::dict out;
  out["joules"] = result.joules;
  out["duration_s"] = result.duration_s;
  out["mean_power_w"] = result.mean_power_w;
  out["max_gap_s"] = result.max_gap_s;
  out["coarse_sampling"] = result.coarse_sampling;
  return out;
}

std::string radar_svg(const std::string& comparison_json, int max_series) {
  const auto comparison = report::comparison_from_json(comparison_json);
  return report::comparison_radar(comparison, max_series);
}

std::string bar_svg(const std::string& comparison_json) {
  const auto comparison = report::comparison_from_json(comparison_json);
  return report::comparison_bar(comparison);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Core bindings for evaluating and comparing compressed neural-network "
      "models from offline artifacts";
  m.attr("__version__") = kVersion;

  const auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<MetricError>(m, "MetricError", base);
  py::register_exception<IoError>(m, "IoError", base);

  m.def("chats_from_ops", &model::chats_from_ops, py::arg("ops"),
        py::arg("bitwidth_bits"),
        "Theoretical speed: operations times bit width, integer exact");
  m.def("ocs_value", &combined::ocs_value, py::arg("p"), py::arg("s"),
        py::arg("c"), py::arg("e"),
        "Overall compression success of four improvement ratios");

  m.def("analyze_json", &analyze_json, py::arg("model") = "",
        py::arg("predictions") = "", py::arg("ground_truth") = "",
        py::arg("labels") = "", py::arg("power") = "",
        py::arg("resources") = "", py::arg("baseline_resources") = "",
        py::arg("latency") = "", py::arg("inferences") = std::nullopt,
        py::arg("topk") = 1, py::arg("cores") = 1,
        py::arg("iou_profile") = "", py::arg("integration") = "",
        py::arg("window") = std::nullopt, py::arg("timestamp") = std::nullopt,
        py::arg("name") = "", py::arg("ops_basis") = "",
        py::arg("bitwidth_exponent") = 1.0,
        "Evaluate one model from file paths into a metric-report JSON string");
  m.def("compare_json", &compare_json, py::arg("reports"),
        py::arg("zeta") = 1.0, py::arg("bindings") = "",
        py::arg("timestamp") = std::nullopt, py::arg("radar_top") = 4,
        "Compare candidate reports (baseline first) into a comparison JSON "
        "string");
  m.def("rank_text", &rank_text, py::arg("reports"), py::arg("zeta") = 1.0,
        py::arg("bindings") = "",
        "Fixed-width ranking table for a list of report paths");
  m.def("compute_ratios", &ratio_dict, py::arg("baseline_json"),
        py::arg("candidate_json"), py::arg("bindings") = "",
        py::arg("zeta") = 1.0,
        "Improvement ratios and combined score of two report JSON strings");

  m.def("top_k_accuracy", &top_k_from_text, py::arg("predictions_jsonl"),
        py::arg("k") = 1, py::arg("labels_jsonl") = "",
        "Top-k accuracy of a classification log given as JSONL text");
  m.def("mean_average_precision", &map_from_text,
        py::arg("predictions_jsonl"), py::arg("ground_truth_jsonl"),
        py::arg("thresholds") = std::vector<double>{0.5},
        py::arg("integration") = "exact",
        "Mean average precision of detection JSONL text against ground truth");
  m.def("integrate_power", &energy_dict, py::arg("csv"),
        py::arg("method") = "trapezoid", py::arg("window") = std::nullopt,
        "Integrate a power trace given as CSV text into joules");

  m.def("render_radar", &radar_svg, py::arg("comparison_json"),
        py::arg("max_series") = 4,
        "Radar chart SVG of a comparison JSON string");
  m.def("render_bar", &bar_svg, py::arg("comparison_json"),
        "Score bar chart SVG of a comparison JSON string");
}
