#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace compeval::combined {

// Accuracy with its kind ("top1", "top5", ..., "map"). Values are fractions
// in [0,1]; percent formatting happens only at display time.
struct AccuracyValue {
  std::string kind;
  double value = 0.0;
  friend bool operator==(const AccuracyValue&, const AccuracyValue&) = default;
};

// Latency is kept as summary statistics over per-inference wall times,
// since single measurements are noisy. Seconds per inference.
struct LatencyStats {
  double median_s = 0.0;
  double mean_s = 0.0;
  double p95_s = 0.0;
  std::uint64_t count = 0;
  friend bool operator==(const LatencyStats&, const LatencyStats&) = default;
};

struct InputRecord {
  std::string path;
  std::string sha256;
  friend bool operator==(const InputRecord&, const InputRecord&) = default;
};

// Everything `analyze` can say about one model. Absent metrics stay absent
// (nullopt) rather than being zeroed, so downstream ratio code can tell
// "not measured" from "measured zero".
struct MetricReport {
  std::string model_name;

  std::optional<AccuracyValue> accuracy;

  std::optional<LatencyStats> latency;
  std::optional<std::uint64_t> macs_dense;
  std::optional<double> macs_effective;
  std::optional<double> chats_dense;
  std::optional<double> chats_effective;

  std::optional<std::uint64_t> disk_size_bytes;
  std::optional<std::string> disk_size_source;  // "measured" | "estimated"
  std::optional<std::uint64_t> total_params;
  std::optional<std::uint64_t> nonzero_params;
  std::optional<double> sparsity;

  std::optional<double> cpu_utilization_pct;  // time-weighted mean
  std::optional<double> cpu_peak_pct;
  std::optional<std::uint64_t> ram_peak_bytes;
  std::optional<double> ram_mean_bytes;
  std::optional<double> gpu_utilization_pct;
  // idle-baseline-subtracted variants, present when a baseline trace was
  // supplied; the raw values above always stay as measured
  std::optional<double> cpu_utilization_net_pct;
  std::optional<double> ram_peak_net_bytes;

  std::optional<double> energy_total_j;
  std::optional<double> energy_per_inference_j;
  std::optional<double> mean_power_w;

  // role ("model", "power", ...) -> file that filled it
  std::map<std::string, InputRecord> inputs;
  // field name -> role, so every number is traceable to an input digest
  std::map<std::string, std::string> provenance;
  // effective settings the run used (integration method, ops basis, ...)
  std::map<std::string, std::string> config;
  std::vector<std::string> warnings;

  std::string generated_at;  // ISO 8601 UTC
  std::string tool_version;
  int schema_version = 0;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

std::string metric_report_to_json(const MetricReport& report);
MetricReport metric_report_from_json(const std::string& text);

enum class SpeedSource { kChats, kLatency, kMacs };
enum class SizeSource { kDisk, kParams, kRam, kCpuUtil };
enum class EfficiencySource { kEnergy, kPower };

// Which report field feeds each improvement ratio. The defaults mirror the
// most common reporting convention: accuracy kind inferred from the reports,
// theoretical speed, disk size, energy.
struct RatioBindings {
  std::string performance_source = "auto";  // accuracy kind, or "auto"
  SpeedSource speed = SpeedSource::kChats;
  SizeSource size = SizeSource::kDisk;
  EfficiencySource efficiency = EfficiencySource::kEnergy;
  bool dense_only = false;  // ignore sparsity-scaled effective counts
  friend bool operator==(const RatioBindings&, const RatioBindings&) = default;
};

const char* speed_source_name(SpeedSource s);
const char* size_source_name(SizeSource s);
const char* efficiency_source_name(EfficiencySource s);

// Parse "speed=latency,size=params,efficiency=power,performance=top1".
// Unknown keys or values raise ParseError.
RatioBindings parse_bindings(const std::string& spec);
std::string bindings_to_string(const RatioBindings& bindings);

// Value of the bound metric in one report. Throws MetricError naming the
// missing or zero field.
double speed_metric(const MetricReport& report, const RatioBindings& bindings);
double size_metric(const MetricReport& report, const RatioBindings& bindings);
double efficiency_metric(const MetricReport& report,
                         const RatioBindings& bindings);

// The four improvement ratios of a candidate against a baseline:
//   P = candidate accuracy / baseline accuracy
//   S = zeta * baseline speed / candidate speed
//   C = baseline size / candidate size
//   E = baseline energy / candidate energy
struct RatioSet {
  double p = 1.0;
  double s = 1.0;
  double c = 1.0;
  double e = 1.0;
  double zeta = 1.0;
  RatioBindings bindings;
  friend bool operator==(const RatioSet&, const RatioSet&) = default;
};

struct OcsScore {
  double value = 0.0;
  RatioSet ratio_set;
};

double ocs_value(double p, double s, double c, double e);
OcsScore ocs(const RatioSet& ratios);

// Throws MetricError when a bound field is absent or sits at zero in a
// denominator position, or when the two reports carry different accuracy
// kinds (comparing top-1 against mAP is an error, not a silent ratio).
RatioSet compute_ratios(const MetricReport& baseline,
                        const MetricReport& candidate,
                        const RatioBindings& bindings, double zeta);

struct RankedEntry {
  std::string model_name;
  OcsScore score;
};

// A candidate whose ratios could not be computed; the batch keeps going.
struct RankDiagnostic {
  std::string model_name;
  std::string message;
};

struct RankOutcome {
  std::vector<RankedEntry> ranked;  // descending score, ties by P then name
  std::vector<RankDiagnostic> skipped;
};

RankOutcome rank_by_ocs(const MetricReport& baseline,
                        const std::vector<MetricReport>& candidates,
                        const RatioBindings& bindings, double zeta);

}  // namespace compeval::combined
