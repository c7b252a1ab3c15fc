#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace compeval::energy {

struct PowerSample {
  double t_s = 0.0;
  double power_w = 0.0;
};

enum class IntegrationMethod {
  kTrapezoid,   // default: exact on piecewise-linear profiles
  kRectangular  // left Riemann sum
};

struct TimeWindow {
  double start_s = 0.0;
  double end_s = 0.0;
};

struct EnergyResult {
  double joules = 0.0;
  double duration_s = 0.0;     // t_last - t_first of the integrated trace
  double mean_power_w = 0.0;   // joules / duration
  double max_gap_s = 0.0;      // largest sampling interval
  bool coarse_sampling = false;  // max_gap exceeded 10% of the duration
  IntegrationMethod method = IntegrationMethod::kTrapezoid;
};

// Restrict a trace to [start, end] (clamped to the trace span), linearly
// interpolating boundary samples. Throws MetricError if the window is empty
// or misses the trace entirely.
std::vector<PowerSample> clip_to_window(const std::vector<PowerSample>& samples,
                                        const TimeWindow& window);

// Integrate power over time; >= 2 samples after any clipping. Throws
// MetricError on short traces, non-increasing timestamps, or negative power.
EnergyResult integrate(const std::vector<PowerSample>& samples,
                       IntegrationMethod method = IntegrationMethod::kTrapezoid,
                       const std::optional<TimeWindow>& window = std::nullopt);

// Joules per inference; requires inferences > 0.
double energy_per_inference(const EnergyResult& result,
                            std::uint64_t inferences);

}  // namespace compeval::energy
