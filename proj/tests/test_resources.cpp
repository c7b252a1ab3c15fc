#include <vector>

#include "compeval/errors.hpp"
#include "compeval/resources.hpp"
#include "doctest.h"

using namespace compeval;
using resources::ResourceSample;

namespace {

std::vector<ResourceSample> fig_trace() {
  // sampled every 5 s on one core: 3 s busy, then 2 s busy
  return {{0.0, 0.0, 2'000'000'000, {}},
          {5.0, 3.0, 2'200'000'000, {}},
          {10.0, 5.0, 2'100'000'000, {}}};
}

}  // namespace

TEST_SUITE("resources") {

TEST_CASE("interval utilization reproduces the illustrated 60/40 case") {
  const auto intervals = resources::cpu_intervals(fig_trace(), 1);
  REQUIRE(intervals.size() == 2);
  CHECK(intervals[0].pct == 60.0);
  CHECK(intervals[1].pct == 40.0);
  CHECK_FALSE(intervals[0].clamped);
  CHECK_FALSE(intervals[1].clamped);

  const auto cpu = resources::cpu_utilization(fig_trace(), 1);
  CHECK(cpu.mean_pct == 50.0);  // equal-length intervals
  CHECK(cpu.peak_pct == 60.0);
  CHECK(cpu.clamped_intervals == 0);
}

TEST_CASE("idle is zero, saturation is one hundred") {
  const std::vector<ResourceSample> idle = {
      {0, 0, 100, {}}, {1, 0, 100, {}}, {2, 0, 100, {}}};
  CHECK(resources::cpu_utilization(idle, 4).mean_pct == 0.0);

  const std::vector<ResourceSample> busy = {
      {0, 0, 100, {}}, {1, 4, 100, {}}, {2, 8, 100, {}}};
  const auto cpu = resources::cpu_utilization(busy, 4);
  CHECK(cpu.mean_pct == 100.0);
  CHECK(cpu.peak_pct == 100.0);
  CHECK(cpu.clamped_intervals == 0);
}

TEST_CASE("multi-core division") {
  const std::vector<ResourceSample> trace = {{0, 0, 1, {}}, {2, 4, 1, {}}};
  CHECK(resources::cpu_utilization(trace, 4).mean_pct == 50.0);
  CHECK(resources::cpu_utilization(trace, 2).mean_pct == 100.0);
}

TEST_CASE("sampler jitter clamps and flags") {
  // 1.2 s of cpu time inside a 1 s interval on one core
  const std::vector<ResourceSample> over = {{0, 0, 1, {}}, {1, 1.2, 1, {}}};
  const auto intervals = resources::cpu_intervals(over, 1);
  REQUIRE(intervals.size() == 1);
  CHECK(intervals[0].pct == 100.0);
  CHECK(intervals[0].clamped);
  const auto cpu = resources::cpu_utilization(over, 1);
  CHECK(cpu.mean_pct == 100.0);
  CHECK(cpu.clamped_intervals == 1);

  // running total decreasing (counter glitch) clamps at zero
  const std::vector<ResourceSample> under = {{0, 5, 1, {}}, {1, 4.5, 1, {}}};
  const auto low = resources::cpu_intervals(under, 1);
  CHECK(low[0].pct == 0.0);
  CHECK(low[0].clamped);
}

TEST_CASE("time-weighted mean uses interval lengths") {
  // 100% for 1 s, 0% for 9 s -> 10%
  const std::vector<ResourceSample> trace = {
      {0, 0, 1, {}}, {1, 1, 1, {}}, {10, 1, 1, {}}};
  CHECK(resources::cpu_utilization(trace, 1).mean_pct == 10.0);
}

TEST_CASE("short or disordered traces are errors") {
  CHECK_THROWS_AS(resources::cpu_utilization({}, 1), MetricError);
  CHECK_THROWS_AS(resources::cpu_utilization({{0, 0, 1, {}}}, 1), MetricError);
  const std::vector<ResourceSample> unsorted = {{1, 0, 1, {}}, {0, 1, 1, {}}};
  CHECK_THROWS_AS(resources::cpu_utilization(unsorted, 1), MetricError);
  const std::vector<ResourceSample> repeated = {{1, 0, 1, {}}, {1, 1, 1, {}}};
  CHECK_THROWS_AS(resources::cpu_utilization(repeated, 1), MetricError);
  CHECK_THROWS_AS(resources::cpu_utilization(fig_trace(), 0), MetricError);
}

TEST_CASE("ram summary holds each sample until the next one") {
  // staircase: 1 GB for 2 s, 3 GB for 2 s -> mean exactly 2 GB; the final
  // sample only terminates the window
  const std::vector<ResourceSample> trace = {{0, 0, 1'000'000'000, {}},
                                             {2, 0, 3'000'000'000, {}},
                                             {4, 0, 999, {}}};
  const auto ram = resources::ram_summary(trace);
  CHECK(ram.mean_bytes == 2'000'000'000.0);
  CHECK(ram.peak_bytes == 3'000'000'000);

  const auto single = resources::ram_summary({{0, 0, 42, {}}});
  CHECK(single.peak_bytes == 42);
  CHECK(single.mean_bytes == 42.0);

  CHECK_THROWS_AS(resources::ram_summary({}), MetricError);
}

TEST_CASE("summarize bundles cpu, ram and optional gpu") {
  auto trace = fig_trace();
  const auto summary = resources::summarize(trace, 1);
  CHECK(summary.cpu.mean_pct == 50.0);
  CHECK(summary.ram.peak_bytes == 2'200'000'000);
  // left-hold: 2.0 GB for 5 s then 2.2 GB for 5 s
  CHECK(summary.ram.mean_bytes == doctest::Approx(2.1e9));
  CHECK_FALSE(summary.gpu.has_value());
  CHECK(summary.duration_s == 10.0);
  CHECK(summary.samples == 3);
  CHECK_FALSE(summary.floored);

  for (auto& s : trace) s.gpu_util_pct = 30.0;
  trace[1].gpu_util_pct = 90.0;
  const auto with_gpu = resources::summarize(trace, 1);
  REQUIRE(with_gpu.gpu.has_value());
  CHECK(with_gpu.gpu->peak_pct == 90.0);
  CHECK(with_gpu.gpu->mean_pct == doctest::Approx(60.0));  // 30*5s + 90*5s

  trace[2].gpu_util_pct.reset();  // partial column
  CHECK_THROWS_AS(resources::summarize(trace, 1), MetricError);

  trace[2].gpu_util_pct = 130.0;  // out of range
  CHECK_THROWS_AS(resources::summarize(trace, 1), MetricError);
}

TEST_CASE("concatenating a trace rescales the mean consistently") {
  // welding two equal-duration traces end to end averages their means
  const std::vector<ResourceSample> joined = {
      {0, 0, 10, {}}, {4, 2, 10, {}}, {8, 2, 10, {}}};
  const auto a = resources::cpu_utilization(
      {{0, 0, 10, {}}, {4, 2, 10, {}}}, 1);
  const auto b = resources::cpu_utilization(
      {{4, 2, 10, {}}, {8, 2, 10, {}}}, 1);
  const auto whole = resources::cpu_utilization(joined, 1);
  CHECK(whole.mean_pct == doctest::Approx((a.mean_pct + b.mean_pct) / 2));
}

TEST_CASE("utilization is invariant to a time shift") {
  auto shifted = fig_trace();
  for (auto& s : shifted) s.t_s += 1000.0;
  const auto base = resources::cpu_utilization(fig_trace(), 1);
  const auto moved = resources::cpu_utilization(shifted, 1);
  CHECK(base.mean_pct == moved.mean_pct);
  CHECK(base.peak_pct == moved.peak_pct);
}

TEST_CASE("baseline subtraction nets out the idle load and floors at zero") {
  const auto workload = resources::summarize(fig_trace(), 1);
  const std::vector<ResourceSample> idle = {{0.0, 0.0, 500'000'000, {}},
                                            {5.0, 0.5, 500'000'000, {}},
                                            {10.0, 1.0, 500'000'000, {}}};
  const auto baseline = resources::summarize(idle, 1);
  const auto net = resources::baseline_subtract(workload, baseline);
  CHECK(net.cpu.mean_pct == doctest::Approx(40.0));  // 50 - 10
  CHECK(net.ram.peak_bytes == 1'700'000'000);        // 2.2 GB - 0.5 GB
  CHECK_FALSE(net.floored);

  // louder baseline than workload floors at zero and says so
  const auto inverted = resources::baseline_subtract(baseline, workload);
  CHECK(inverted.cpu.mean_pct == 0.0);
  CHECK(inverted.ram.peak_bytes == 0);
  CHECK(inverted.floored);
}

}  // TEST_SUITE
