#include "compeval/energy.hpp"

#include <algorithm>
#include <cmath>

#include "compeval/errors.hpp"

namespace compeval::energy {

namespace {

void check_trace(const std::vector<PowerSample>& samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].power_w) || samples[i].power_w < 0.0) {
      throw MetricError("power trace has a negative or non-finite value at "
                        "sample " + std::to_string(i));
    }
    if (i > 0 && !(samples[i].t_s > samples[i - 1].t_s)) {
      throw MetricError("power trace timestamps must strictly increase "
                        "(violated at sample " + std::to_string(i) + ")");
    }
  }
}

double interpolate(const PowerSample& a, const PowerSample& b, double t) {
  return a.power_w + (b.power_w - a.power_w) * (t - a.t_s) / (b.t_s - a.t_s);
}

}  // namespace

std::vector<PowerSample> clip_to_window(const std::vector<PowerSample>& samples,
                                        const TimeWindow& window) {
  if (samples.size() < 2) {
    throw MetricError("clipping needs at least 2 power samples");
  }
  check_trace(samples);
  if (!(window.start_s < window.end_s)) {
    throw MetricError("time window must have start < end");
  }
  // The effective window is the overlap with the trace span.
  const double lo = std::max(window.start_s, samples.front().t_s);
  const double hi = std::min(window.end_s, samples.back().t_s);
  if (!(lo < hi)) {
    throw MetricError("time window does not overlap the power trace span");
  }

  std::vector<PowerSample> out;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const auto& a = samples[i];
    const auto& b = samples[i + 1];
    if (b.t_s <= lo || a.t_s >= hi) continue;
    if (out.empty()) {
      out.push_back(a.t_s >= lo ? a : PowerSample{lo, interpolate(a, b, lo)});
    }
    if (b.t_s <= hi) {
      out.push_back(b);
    } else {
      out.push_back({hi, interpolate(a, b, hi)});
    }
  }
  return out;
}

EnergyResult integrate(const std::vector<PowerSample>& samples,
                       IntegrationMethod method,
                       const std::optional<TimeWindow>& window) {
  const std::vector<PowerSample>& trace =
      window ? clip_to_window(samples, *window) : samples;
  // clip_to_window validated already; the direct path still needs it.
  if (!window) check_trace(trace);
  if (trace.size() < 2) {
    throw MetricError("energy integration needs at least 2 power samples, "
                      "got " + std::to_string(trace.size()));
  }

  EnergyResult out;
  out.method = method;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double dt = trace[i].t_s - trace[i - 1].t_s;
    out.max_gap_s = std::max(out.max_gap_s, dt);
    if (method == IntegrationMethod::kTrapezoid) {
      out.joules += 0.5 * (trace[i - 1].power_w + trace[i].power_w) * dt;
    } else {
      out.joules += trace[i - 1].power_w * dt;
    }
  }
  out.duration_s = trace.back().t_s - trace.front().t_s;
  out.mean_power_w = out.joules / out.duration_s;
  out.coarse_sampling = out.max_gap_s > 0.1 * out.duration_s;
  return out;
}

double energy_per_inference(const EnergyResult& result,
                            std::uint64_t inferences) {
  if (inferences == 0) {
    throw MetricError("per-inference energy needs a positive inference count");
  }
  return result.joules / static_cast<double>(inferences);
}

}  // namespace compeval::energy
