#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace compeval::resources {

// One row of a resource trace: monotonic timestamp, cumulative process CPU
// time, resident memory, optional accelerator utilization percentage.
struct ResourceSample {
  double t_s = 0.0;
  double cpu_rt_s = 0.0;
  std::uint64_t ram_bytes = 0;
  std::optional<double> gpu_util_pct;
};

// Utilization of one sampling interval:
//   100 * (rt_b - rt_a) / ((t_b - t_a) * cores)
// clamped into [0,100]. Sampler jitter can push the raw value outside the
// range; that is clamped and flagged, not treated as an error.
struct IntervalUtilization {
  double t_start = 0.0;
  double t_end = 0.0;
  double pct = 0.0;  // clamped
  bool clamped = false;
};

std::vector<IntervalUtilization> cpu_intervals(
    const std::vector<ResourceSample>& samples, unsigned cores);

struct CpuUtilization {
  double mean_pct = 0.0;  // time-weighted over clamped intervals
  double peak_pct = 0.0;
  std::uint64_t clamped_intervals = 0;
};

// Needs >= 2 samples; throws MetricError on short or non-monotone traces.
CpuUtilization cpu_utilization(const std::vector<ResourceSample>& samples,
                               unsigned cores);

struct RamUsage {
  std::uint64_t peak_bytes = 0;
  // Left-hold time-weighted mean: each sample's value holds until the next
  // sample, so the last sample carries zero weight. A single-sample trace
  // degenerates to mean = peak.
  double mean_bytes = 0.0;
};

// Works from a single sample upward.
RamUsage ram_summary(const std::vector<ResourceSample>& samples);

struct GpuUtilization {
  double mean_pct = 0.0;  // left-hold time-weighted, like RAM
  double peak_pct = 0.0;
};

struct ResourceSummary {
  CpuUtilization cpu;
  RamUsage ram;
  std::optional<GpuUtilization> gpu;
  double duration_s = 0.0;
  std::uint64_t samples = 0;
  bool floored = false;  // baseline subtraction hit the zero floor
};

// Full summary of one trace; >= 2 samples. GPU stats appear only when every
// sample has the optional column (a partial column is an error).
ResourceSummary summarize(const std::vector<ResourceSample>& samples,
                          unsigned cores);

// Workload minus idle-baseline, each field floored at zero; `floored` is
// set when any field actually hit the floor.
ResourceSummary baseline_subtract(const ResourceSummary& workload,
                                  const ResourceSummary& baseline);

}  // namespace compeval::resources
