#include "compeval/resources.hpp"

#include <algorithm>
#include <cmath>

#include "compeval/errors.hpp"

namespace compeval::resources {

namespace {

void check_time_order(const std::vector<ResourceSample>& samples) {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t_s > samples[i - 1].t_s)) {
      throw MetricError("resource trace timestamps must strictly increase "
                        "(violated at sample " + std::to_string(i) + ")");
    }
  }
}

}  // namespace

std::vector<IntervalUtilization> cpu_intervals(
    const std::vector<ResourceSample>& samples, unsigned cores) {
  if (cores == 0) {
    throw MetricError("core count must be positive");
  }
  if (samples.size() < 2) {
    throw MetricError("CPU utilization needs at least 2 samples, got " +
                      std::to_string(samples.size()));
  }
  check_time_order(samples);
  std::vector<IntervalUtilization> intervals;
  intervals.reserve(samples.size() - 1);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double dt = samples[i].t_s - samples[i - 1].t_s;
    const double drt = samples[i].cpu_rt_s - samples[i - 1].cpu_rt_s;
    const double raw = 100.0 * drt / (dt * static_cast<double>(cores));
    IntervalUtilization iv;
    iv.t_start = samples[i - 1].t_s;
    iv.t_end = samples[i].t_s;
    // Sampler jitter can make RT deltas negative or larger than wall time x
    // cores; clamp and flag instead of aborting the evaluation.
    iv.pct = std::clamp(raw, 0.0, 100.0);
    iv.clamped = raw != iv.pct;
    intervals.push_back(iv);
  }
  return intervals;
}

CpuUtilization cpu_utilization(const std::vector<ResourceSample>& samples,
                               unsigned cores) {
  const auto intervals = cpu_intervals(samples, cores);
  CpuUtilization out;
  double weighted = 0.0;
  double span = 0.0;
  for (const auto& iv : intervals) {
    const double dt = iv.t_end - iv.t_start;
    weighted += iv.pct * dt;
    span += dt;
    out.peak_pct = std::max(out.peak_pct, iv.pct);
    if (iv.clamped) ++out.clamped_intervals;
  }
  out.mean_pct = weighted / span;
  return out;
}

RamUsage ram_summary(const std::vector<ResourceSample>& samples) {
  if (samples.empty()) {
    throw MetricError("RAM summary over an empty resource trace");
  }
  check_time_order(samples);
  RamUsage out;
  for (const auto& s : samples) {
    out.peak_bytes = std::max(out.peak_bytes, s.ram_bytes);
  }
  if (samples.size() == 1) {
    out.mean_bytes = static_cast<double>(out.peak_bytes);
    return out;
  }
  // Left-hold: each sample's value persists until the next timestamp, so
  // the final sample contributes no weight.
  double weighted = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    weighted += static_cast<double>(samples[i - 1].ram_bytes) *
                (samples[i].t_s - samples[i - 1].t_s);
  }
  out.mean_bytes = weighted / (samples.back().t_s - samples.front().t_s);
  return out;
}

ResourceSummary summarize(const std::vector<ResourceSample>& samples,
                          unsigned cores) {
  ResourceSummary out;
  out.cpu = cpu_utilization(samples, cores);
  out.ram = ram_summary(samples);
  out.duration_s = samples.back().t_s - samples.front().t_s;
  out.samples = samples.size();

  std::size_t with_gpu = 0;
  for (const auto& s : samples) {
    if (s.gpu_util_pct) ++with_gpu;
  }
  if (with_gpu == samples.size()) {
    GpuUtilization gpu;
    double weighted = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double pct = *samples[i].gpu_util_pct;
      if (pct < 0.0 || pct > 100.0) {
        throw MetricError("accelerator utilization outside [0,100] at sample " +
                          std::to_string(i));
      }
      gpu.peak_pct = std::max(gpu.peak_pct, pct);
      if (i + 1 < samples.size()) {
        weighted += pct * (samples[i + 1].t_s - samples[i].t_s);
      }
    }
    gpu.mean_pct = weighted / out.duration_s;
    out.gpu = gpu;
  } else if (with_gpu != 0) {
    throw MetricError("accelerator utilization column present on only " +
                      std::to_string(with_gpu) + " of " +
                      std::to_string(samples.size()) + " samples");
  }
  return out;
}

namespace {

double floor0(double workload, double baseline, bool& floored) {
  const double net = workload - baseline;
  if (net < 0.0) {
    floored = true;
    return 0.0;
  }
  return net;
}

}  // namespace

ResourceSummary baseline_subtract(const ResourceSummary& workload,
                                  const ResourceSummary& baseline) {
  ResourceSummary out = workload;
  bool floored = false;
  out.cpu.mean_pct =
      floor0(workload.cpu.mean_pct, baseline.cpu.mean_pct, floored);
  out.cpu.peak_pct =
      floor0(workload.cpu.peak_pct, baseline.cpu.peak_pct, floored);
  const double net_peak = floor0(static_cast<double>(workload.ram.peak_bytes),
                                 static_cast<double>(baseline.ram.peak_bytes),
                                 floored);
  out.ram.peak_bytes = static_cast<std::uint64_t>(net_peak);
  out.ram.mean_bytes =
      floor0(workload.ram.mean_bytes, baseline.ram.mean_bytes, floored);
  if (workload.gpu && baseline.gpu) {
    GpuUtilization gpu;
    gpu.mean_pct =
        floor0(workload.gpu->mean_pct, baseline.gpu->mean_pct, floored);
    gpu.peak_pct =
        floor0(workload.gpu->peak_pct, baseline.gpu->peak_pct, floored);
    out.gpu = gpu;
  }
  out.floored = floored;
  return out;
}

}  // namespace compeval::resources
