#include "compeval/combined.hpp"

#include <algorithm>
#include <cmath>

#include "compeval/errors.hpp"
#include "json.hpp"

namespace compeval::combined {

namespace {

using ordered_json = nlohmann::ordered_json;

void put_optional(ordered_json& obj, const char* key,
                  const std::optional<double>& value) {
  if (value) obj[key] = *value;
}

void put_optional(ordered_json& obj, const char* key,
                  const std::optional<std::uint64_t>& value) {
  if (value) obj[key] = *value;
}

void put_optional(ordered_json& obj, const char* key,
                  const std::optional<std::string>& value) {
  if (value) obj[key] = *value;
}

[[noreturn]] void bad_report(const std::string& msg) {
  throw ParseError("metric report: " + msg);
}

const ordered_json* maybe_section(const ordered_json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) return nullptr;
  if (!it->is_object()) bad_report(std::string("'") + key + "' must be an object");
  return &*it;
}

void check_keys(const ordered_json& obj, const char* section,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&key](const char* k) {
          return key == k;
        }) == allowed.end()) {
      bad_report(std::string(section) + ": unknown field '" + key + "'");
    }
  }
}

double take_double(const ordered_json& obj, const char* key,
                   const char* section) {
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    bad_report(std::string(section) + "." + key + " must be a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d) || d < 0.0) {
    bad_report(std::string(section) + "." + key +
               " must be finite and non-negative");
  }
  return d;
}

std::uint64_t take_u64(const ordered_json& obj, const char* key,
                       const char* section) {
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() &&
                                   v.get<std::int64_t>() >= 0)) {
    bad_report(std::string(section) + "." + key +
               " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

ordered_json bindings_to_obj(const RatioBindings& b) {
  ordered_json obj;
  obj["performance"] = b.performance_source;
  obj["speed"] = speed_source_name(b.speed);
  obj["size"] = size_source_name(b.size);
  obj["efficiency"] = efficiency_source_name(b.efficiency);
  obj["dense_only"] = b.dense_only;
  return obj;
}

SpeedSource parse_speed_source(const std::string& v) {
  if (v == "chats") return SpeedSource::kChats;
  if (v == "latency") return SpeedSource::kLatency;
  if (v == "macs") return SpeedSource::kMacs;
  throw ParseError("unknown speed source '" + v +
                   "' (want chats, latency, or macs)");
}

SizeSource parse_size_source(const std::string& v) {
  if (v == "disk") return SizeSource::kDisk;
  if (v == "params") return SizeSource::kParams;
  if (v == "ram") return SizeSource::kRam;
  if (v == "cpu_util") return SizeSource::kCpuUtil;
  throw ParseError("unknown size source '" + v +
                   "' (want disk, params, ram, or cpu_util)");
}

EfficiencySource parse_efficiency_source(const std::string& v) {
  if (v == "energy") return EfficiencySource::kEnergy;
  if (v == "power") return EfficiencySource::kPower;
  throw ParseError("unknown efficiency source '" + v +
                   "' (want energy or power)");
}

RatioBindings bindings_from_obj(const ordered_json& obj) {
  check_keys(obj, "bindings",
             {"performance", "speed", "size", "efficiency", "dense_only"});
  RatioBindings b;
  b.performance_source = obj.at("performance").get<std::string>();
  b.speed = parse_speed_source(obj.at("speed").get<std::string>());
  b.size = parse_size_source(obj.at("size").get<std::string>());
  b.efficiency =
      parse_efficiency_source(obj.at("efficiency").get<std::string>());
  b.dense_only = obj.at("dense_only").get<bool>();
  return b;
}

[[noreturn]] void missing_field(const MetricReport& report, const char* field,
                                const char* role) {
  throw MetricError("report '" + report.model_name + "' has no usable " +
                    field + " for the " + role + " binding");
}

}  // namespace

const char* speed_source_name(SpeedSource s) {
  switch (s) {
    case SpeedSource::kChats:
      return "chats";
    case SpeedSource::kLatency:
      return "latency";
    case SpeedSource::kMacs:
      return "macs";
  }
  return "?";
}

const char* size_source_name(SizeSource s) {
  switch (s) {
    case SizeSource::kDisk:
      return "disk";
    case SizeSource::kParams:
      return "params";
    case SizeSource::kRam:
      return "ram";
    case SizeSource::kCpuUtil:
      return "cpu_util";
  }
  return "?";
}

const char* efficiency_source_name(EfficiencySource s) {
  switch (s) {
    case EfficiencySource::kEnergy:
      return "energy";
    case EfficiencySource::kPower:
      return "power";
  }
  return "?";
}

RatioBindings parse_bindings(const std::string& spec) {
  RatioBindings b;
  if (spec.empty()) return b;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t pos = spec.find(',', start);
    if (pos == std::string::npos) pos = spec.size();
    const std::string item = spec.substr(start, pos - start);
    start = pos + 1;
    if (item.empty()) {
      throw ParseError("empty item in bindings '" + spec + "'");
    }
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw ParseError("binding item '" + item + "' is not key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "performance") {
      if (value.empty()) throw ParseError("empty performance binding");
      b.performance_source = value;
    } else if (key == "speed") {
      b.speed = parse_speed_source(value);
    } else if (key == "size") {
      b.size = parse_size_source(value);
    } else if (key == "efficiency") {
      b.efficiency = parse_efficiency_source(value);
    } else if (key == "dense_only") {
      if (value == "true") {
        b.dense_only = true;
      } else if (value == "false") {
        b.dense_only = false;
      } else {
        throw ParseError("dense_only must be true or false, got '" + value +
                         "'");
      }
    } else {
      throw ParseError("unknown binding key '" + key +
                       "' (want performance, speed, size, efficiency, or "
                       "dense_only)");
    }
    if (pos == spec.size()) break;
  }
  return b;
}

std::string bindings_to_string(const RatioBindings& bindings) {
  std::string out = "performance=" + bindings.performance_source;
  out += ",speed=";
  out += speed_source_name(bindings.speed);
  out += ",size=";
  out += size_source_name(bindings.size);
  out += ",efficiency=";
  out += efficiency_source_name(bindings.efficiency);
  if (bindings.dense_only) out += ",dense_only=true";
  return out;
}

std::string metric_report_to_json(const MetricReport& report) {
  ordered_json doc;
  doc["schema_version"] = report.schema_version;
  doc["tool_version"] = report.tool_version;
  doc["generated_at"] = report.generated_at;

  ordered_json model;
  model["name"] = report.model_name;
  put_optional(model, "total_params", report.total_params);
  put_optional(model, "nonzero_params", report.nonzero_params);
  put_optional(model, "sparsity", report.sparsity);
  put_optional(model, "disk_size_bytes", report.disk_size_bytes);
  put_optional(model, "disk_size_source", report.disk_size_source);
  put_optional(model, "macs_dense", report.macs_dense);
  put_optional(model, "macs_effective", report.macs_effective);
  put_optional(model, "chats_dense", report.chats_dense);
  put_optional(model, "chats_effective", report.chats_effective);
  doc["model"] = std::move(model);

  if (report.accuracy) {
    ordered_json acc;
    acc["kind"] = report.accuracy->kind;
    acc["value"] = report.accuracy->value;
    doc["accuracy"] = std::move(acc);
  }
  if (report.latency) {
    ordered_json lat;
    lat["median_s"] = report.latency->median_s;
    lat["mean_s"] = report.latency->mean_s;
    lat["p95_s"] = report.latency->p95_s;
    lat["count"] = report.latency->count;
    doc["latency"] = std::move(lat);
  }

  ordered_json res;
  put_optional(res, "cpu_utilization_pct", report.cpu_utilization_pct);
  put_optional(res, "cpu_peak_pct", report.cpu_peak_pct);
  put_optional(res, "ram_peak_bytes", report.ram_peak_bytes);
  put_optional(res, "ram_mean_bytes", report.ram_mean_bytes);
  put_optional(res, "gpu_utilization_pct", report.gpu_utilization_pct);
  put_optional(res, "cpu_utilization_net_pct",
               report.cpu_utilization_net_pct);
  put_optional(res, "ram_peak_net_bytes", report.ram_peak_net_bytes);
  if (!res.empty()) doc["resources"] = std::move(res);

  ordered_json energy;
  put_optional(energy, "total_j", report.energy_total_j);
  put_optional(energy, "per_inference_j", report.energy_per_inference_j);
  put_optional(energy, "mean_power_w", report.mean_power_w);
  if (!energy.empty()) doc["energy"] = std::move(energy);

  ordered_json inputs = ordered_json::object();
  for (const auto& [role, rec] : report.inputs) {
    inputs[role] = {{"path", rec.path}, {"sha256", rec.sha256}};
  }
  doc["inputs"] = std::move(inputs);

  ordered_json provenance = ordered_json::object();
  for (const auto& [field, role] : report.provenance) {
    provenance[field] = role;
  }
  doc["provenance"] = std::move(provenance);

  ordered_json config = ordered_json::object();
  for (const auto& [key, value] : report.config) {
    config[key] = value;
  }
  doc["config"] = std::move(config);

  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

MetricReport metric_report_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad_report(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) bad_report("root must be an object");
  check_keys(doc, "report",
             {"schema_version", "tool_version", "generated_at", "model",
              "accuracy", "latency", "resources", "energy", "inputs",
              "provenance", "config", "warnings"});

  MetricReport r;
  try {
    r.schema_version = doc.at("schema_version").get<int>();
    r.tool_version = doc.at("tool_version").get<std::string>();
    r.generated_at = doc.at("generated_at").get<std::string>();

    const auto& model = doc.at("model");
    if (!model.is_object()) bad_report("'model' must be an object");
    check_keys(model, "model",
               {"name", "total_params", "nonzero_params", "sparsity",
                "disk_size_bytes", "disk_size_source", "macs_dense",
                "macs_effective", "chats_dense", "chats_effective"});
    r.model_name = model.at("name").get<std::string>();
    if (r.model_name.empty()) bad_report("model.name must be non-empty");
    if (model.contains("total_params"))
      r.total_params = take_u64(model, "total_params", "model");
    if (model.contains("nonzero_params"))
      r.nonzero_params = take_u64(model, "nonzero_params", "model");
    if (model.contains("sparsity"))
      r.sparsity = take_double(model, "sparsity", "model");
    if (model.contains("disk_size_bytes"))
      r.disk_size_bytes = take_u64(model, "disk_size_bytes", "model");
    if (model.contains("disk_size_source")) {
      const std::string src = model.at("disk_size_source").get<std::string>();
      if (src != "measured" && src != "estimated") {
        bad_report("disk_size_source must be 'measured' or 'estimated'");
      }
      r.disk_size_source = src;
    }
    if (model.contains("macs_dense"))
      r.macs_dense = take_u64(model, "macs_dense", "model");
    if (model.contains("macs_effective"))
      r.macs_effective = take_double(model, "macs_effective", "model");
    if (model.contains("chats_dense"))
      r.chats_dense = take_double(model, "chats_dense", "model");
    if (model.contains("chats_effective"))
      r.chats_effective = take_double(model, "chats_effective", "model");

    if (const auto* acc = maybe_section(doc, "accuracy")) {
      check_keys(*acc, "accuracy", {"kind", "value"});
      AccuracyValue v;
      v.kind = acc->at("kind").get<std::string>();
      if (v.kind.empty()) bad_report("accuracy.kind must be non-empty");
      v.value = take_double(*acc, "value", "accuracy");
      if (v.value > 1.0) {
        bad_report("accuracy.value must lie in [0,1] (fractions, not "
                   "percentages)");
      }
      r.accuracy = v;
    }
    if (const auto* lat = maybe_section(doc, "latency")) {
      check_keys(*lat, "latency", {"median_s", "mean_s", "p95_s", "count"});
      LatencyStats v;
      v.median_s = take_double(*lat, "median_s", "latency");
      v.mean_s = take_double(*lat, "mean_s", "latency");
      v.p95_s = take_double(*lat, "p95_s", "latency");
      v.count = take_u64(*lat, "count", "latency");
      r.latency = v;
    }
    if (const auto* res = maybe_section(doc, "resources")) {
      check_keys(*res, "resources",
                 {"cpu_utilization_pct", "cpu_peak_pct", "ram_peak_bytes",
                  "ram_mean_bytes", "gpu_utilization_pct",
                  "cpu_utilization_net_pct", "ram_peak_net_bytes"});
      if (res->contains("cpu_utilization_pct"))
        r.cpu_utilization_pct =
            take_double(*res, "cpu_utilization_pct", "resources");
      if (res->contains("cpu_peak_pct"))
        r.cpu_peak_pct = take_double(*res, "cpu_peak_pct", "resources");
      if (res->contains("ram_peak_bytes"))
        r.ram_peak_bytes = take_u64(*res, "ram_peak_bytes", "resources");
      if (res->contains("ram_mean_bytes"))
        r.ram_mean_bytes = take_double(*res, "ram_mean_bytes", "resources");
      if (res->contains("gpu_utilization_pct"))
        r.gpu_utilization_pct =
            take_double(*res, "gpu_utilization_pct", "resources");
      if (res->contains("cpu_utilization_net_pct"))
        r.cpu_utilization_net_pct =
            take_double(*res, "cpu_utilization_net_pct", "resources");
      if (res->contains("ram_peak_net_bytes"))
        r.ram_peak_net_bytes =
            take_double(*res, "ram_peak_net_bytes", "resources");
    }
    if (const auto* energy = maybe_section(doc, "energy")) {
      check_keys(*energy, "energy",
                 {"total_j", "per_inference_j", "mean_power_w"});
      if (energy->contains("total_j"))
        r.energy_total_j = take_double(*energy, "total_j", "energy");
      if (energy->contains("per_inference_j"))
        r.energy_per_inference_j =
            take_double(*energy, "per_inference_j", "energy");
      if (energy->contains("mean_power_w"))
        r.mean_power_w = take_double(*energy, "mean_power_w", "energy");
    }

    const auto& inputs = doc.at("inputs");
    if (!inputs.is_object()) bad_report("'inputs' must be an object");
    for (const auto& [role, rec] : inputs.items()) {
      if (!rec.is_object() || !rec.contains("path") ||
          !rec.contains("sha256")) {
        bad_report("inputs entry '" + role + "' needs path and sha256");
      }
      r.inputs[role] = {rec.at("path").get<std::string>(),
                        rec.at("sha256").get<std::string>()};
    }
    const auto& provenance = doc.at("provenance");
    if (!provenance.is_object()) bad_report("'provenance' must be an object");
    for (const auto& [field, role] : provenance.items()) {
      if (!role.is_string()) bad_report("provenance values must be strings");
      if (!r.inputs.count(role.get<std::string>())) {
        bad_report("provenance for '" + field + "' points at unknown input '" +
                   role.get<std::string>() + "'");
      }
      r.provenance[field] = role.get<std::string>();
    }
    const auto& config = doc.at("config");
    if (!config.is_object()) bad_report("'config' must be an object");
    for (const auto& [key, value] : config.items()) {
      if (!value.is_string()) bad_report("config values must be strings");
      r.config[key] = value.get<std::string>();
    }
    const auto& warnings = doc.at("warnings");
    if (!warnings.is_array()) bad_report("'warnings' must be an array");
    for (const auto& w : warnings) {
      if (!w.is_string()) bad_report("warnings must be strings");
      r.warnings.push_back(w.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    bad_report(std::string("invalid structure: ") + e.what());
  }
  return r;
}

double speed_metric(const MetricReport& report, const RatioBindings& bindings) {
  switch (bindings.speed) {
    case SpeedSource::kChats: {
      // Effective (sparsity-scaled) theoretical cost when declared, unless
      // the caller forces dense counting.
      const std::optional<double>& chosen =
          (!bindings.dense_only && report.chats_effective)
              ? report.chats_effective
              : report.chats_dense;
      if (!chosen) missing_field(report, "theoretical speed", "speed");
      return *chosen;
    }
    case SpeedSource::kLatency:
      if (!report.latency) missing_field(report, "latency", "speed");
      return report.latency->median_s;
    case SpeedSource::kMacs: {
      if (!bindings.dense_only && report.macs_effective) {
        return *report.macs_effective;
      }
      if (!report.macs_dense) missing_field(report, "MACs count", "speed");
      return static_cast<double>(*report.macs_dense);
    }
  }
  missing_field(report, "speed metric", "speed");
}

double size_metric(const MetricReport& report, const RatioBindings& bindings) {
  switch (bindings.size) {
    case SizeSource::kDisk:
      if (!report.disk_size_bytes) missing_field(report, "disk size", "size");
      return static_cast<double>(*report.disk_size_bytes);
    case SizeSource::kParams: {
      const std::optional<std::uint64_t>& chosen =
          (!bindings.dense_only && report.nonzero_params)
              ? report.nonzero_params
              : report.total_params;
      if (!chosen) missing_field(report, "parameter count", "size");
      return static_cast<double>(*chosen);
    }
    case SizeSource::kRam:
      if (!report.ram_peak_bytes) missing_field(report, "RAM peak", "size");
      return static_cast<double>(*report.ram_peak_bytes);
    case SizeSource::kCpuUtil:
      if (!report.cpu_utilization_pct) {
        missing_field(report, "CPU utilization", "size");
      }
      return *report.cpu_utilization_pct;
  }
  missing_field(report, "size metric", "size");
}

double efficiency_metric(const MetricReport& report,
                         const RatioBindings& bindings) {
  switch (bindings.efficiency) {
    case EfficiencySource::kEnergy:
      if (report.energy_per_inference_j) return *report.energy_per_inference_j;
      if (report.energy_total_j) return *report.energy_total_j;
      missing_field(report, "energy", "efficiency");
    case EfficiencySource::kPower:
      if (!report.mean_power_w) missing_field(report, "mean power", "efficiency");
      return *report.mean_power_w;
  }
  missing_field(report, "efficiency metric", "efficiency");
}

double ocs_value(double p, double s, double c, double e) {
  return p * p * ((p - 1.0) + (s - 1.0) + (c - 1.0) + (e - 1.0));
}

OcsScore ocs(const RatioSet& ratios) {
  OcsScore score;
  score.ratio_set = ratios;
  score.value = ocs_value(ratios.p, ratios.s, ratios.c, ratios.e);
  return score;
}

namespace {

double ratio_of(const MetricReport& baseline, const MetricReport& candidate,
                double (*metric)(const MetricReport&, const RatioBindings&),
                const RatioBindings& bindings, const char* axis) {
  const double base = metric(baseline, bindings);
  const double cand = metric(candidate, bindings);
  if (!(cand > 0.0)) {
    throw MetricError(std::string("candidate '") + candidate.model_name +
                      "' has a zero " + axis +
                      " metric (ratio denominator)");
  }
  if (!(base > 0.0)) {
    throw MetricError(std::string("baseline '") + baseline.model_name +
                      "' has a zero " + axis + " metric");
  }
  return base / cand;
}

}  // namespace

RatioSet compute_ratios(const MetricReport& baseline,
                        const MetricReport& candidate,
                        const RatioBindings& bindings, double zeta) {
  if (!(zeta > 0.0) || !std::isfinite(zeta)) {
    throw MetricError("hardware constant must be positive and finite");
  }
  if (!baseline.accuracy || !candidate.accuracy) {
    throw MetricError("both reports need an accuracy value to compare");
  }
  std::string kind = bindings.performance_source;
  if (kind == "auto") {
    kind = baseline.accuracy->kind;
  }
  if (baseline.accuracy->kind != kind || candidate.accuracy->kind != kind) {
    throw MetricError("accuracy kinds do not match: baseline is '" +
                      baseline.accuracy->kind + "', candidate is '" +
                      candidate.accuracy->kind + "', comparing as '" + kind +
                      "'");
  }
  if (!(baseline.accuracy->value > 0.0)) {
    throw MetricError("baseline '" + baseline.model_name +
                      "' has zero accuracy (ratio denominator)");
  }

  RatioSet r;
  r.bindings = bindings;
  r.zeta = zeta;
  r.p = candidate.accuracy->value / baseline.accuracy->value;
  // Speed improves when the candidate needs fewer operations or seconds,
  // hence baseline over candidate, scaled by the hardware constant.
  r.s = zeta * ratio_of(baseline, candidate, speed_metric, bindings, "speed");
  r.c = ratio_of(baseline, candidate, size_metric, bindings, "size");
  r.e = ratio_of(baseline, candidate, efficiency_metric, bindings,
                 "efficiency");
  return r;
}

RankOutcome rank_by_ocs(const MetricReport& baseline,
                        const std::vector<MetricReport>& candidates,
                        const RatioBindings& bindings, double zeta) {
  if (candidates.empty()) {
    throw MetricError("ranking needs at least one candidate report");
  }
  RankOutcome out;
  for (const auto& candidate : candidates) {
    try {
      const RatioSet r = compute_ratios(baseline, candidate, bindings, zeta);
      out.ranked.push_back({candidate.model_name, ocs(r)});
    } catch (const Error& e) {
      // One broken candidate must not sink the batch; record and move on.
      out.skipped.push_back({candidate.model_name, e.what()});
    }
  }
  std::sort(out.ranked.begin(), out.ranked.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.score.value != b.score.value) {
                return a.score.value > b.score.value;
              }
              if (a.score.ratio_set.p != b.score.ratio_set.p) {
                return a.score.ratio_set.p > b.score.ratio_set.p;
              }
              return a.model_name < b.model_name;
            });
  return out;
}

}  // namespace compeval::combined
