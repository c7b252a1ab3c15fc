#pragma once

#include <map>
#include <string>
#include <vector>

#include "compeval/combined.hpp"

namespace compeval::report {

// Result of one baseline-vs-candidates comparison: everything needed to
// audit the numbers later (bindings, zeta, input digests) travels with them.
struct ComparisonEntry {
  std::string model_name;
  combined::RatioSet ratios;
  double ocs = 0.0;
  friend bool operator==(const ComparisonEntry&, const ComparisonEntry&) = default;
};

struct ComparisonReport {
  std::string baseline_name;
  std::vector<ComparisonEntry> candidates;  // ranked, best first
  combined::RatioBindings bindings;
  double zeta = 1.0;
  std::string generated_at;  // ISO 8601 UTC
  std::string tool_version;
  int schema_version = 0;
  std::map<std::string, combined::InputRecord> inputs;
  std::map<std::string, std::string> config;  // effective settings
  std::vector<std::string> notes;  // skipped candidates, warnings

  friend bool operator==(const ComparisonReport&, const ComparisonReport&) =
      default;
};

// Serialized form is JSON with stable key order; parse(write(r)) == r.
// Construction-time validation: at least one candidate, unique names.
std::string comparison_to_json(const ComparisonReport& report);
ComparisonReport comparison_from_json(const std::string& text);

enum class ChartKind { kRadar, kBar, kAccuracySpeed };
enum class AxisScale { kLinear, kLog };

struct ChartSeries {
  std::string name;
  std::vector<double> values;  // one per axis
};

struct ChartSpec {
  ChartKind kind = ChartKind::kRadar;
  std::vector<std::string> axes;
  std::vector<ChartSeries> series;
  std::string title;
  int width = 640;
  int height = 480;
  AxisScale scale = AxisScale::kLinear;
};

// All renderers produce standalone SVG text, byte-deterministic for a given
// spec: no timestamps, no randomness, locale-independent number formatting.

// Radar: 3-8 axes, 1-6 series. Axes fan out clockwise from 12 o'clock; each
// axis scales linearly from 0 to its own max value plus 10% headroom.
std::string render_radar(const ChartSpec& spec);

// Bars sorted by value descending; negative values hang below the zero line.
std::string render_bar(const ChartSpec& spec);

// Scatter of (speed, accuracy) with marker radius proportional to
// sqrt(size), so marker area tracks model size. Series values are the
// triple (speed, accuracy, size).
std::string render_accuracy_speed(const ChartSpec& spec);

// Radar chart of P,S,C,E plus a min-max-normalized score axis for a ranked
// comparison (raw scores go in the legend). At most max_series candidates
// are drawn, best first.
std::string comparison_radar(const ComparisonReport& report,
                             int max_series = 4);

std::string comparison_bar(const ComparisonReport& report);

}  // namespace compeval::report
