#include "compeval/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "compeval/errors.hpp"
#include "format.hpp"
#include "json.hpp"

namespace compeval::report {

namespace {

using ordered_json = nlohmann::ordered_json;
using detail::format_double;
using detail::format_fixed;

// Color-blind-safe palette, one entry per drawable series.
constexpr const char* kPalette[6] = {"#4477aa", "#ee6677", "#228833",
                                     "#ccbb44", "#66ccee", "#aa3377"};
constexpr int kMaxSeries = 6;

std::string esc(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

void validate_comparison(const ComparisonReport& report) {
  if (report.baseline_name.empty()) {
    throw MetricError("comparison report needs a baseline name");
  }
  if (report.candidates.empty()) {
    throw MetricError("comparison report needs at least one candidate");
  }
  std::set<std::string> names;
  for (const auto& entry : report.candidates) {
    if (entry.model_name.empty()) {
      throw MetricError("comparison entry with an empty model name");
    }
    if (!names.insert(entry.model_name).second) {
      throw MetricError("duplicate candidate name '" + entry.model_name +
                        "' in comparison report");
    }
    // Per-entry ratio sets must agree with the report header; anything else
    // means the report was assembled inconsistently.
    if (entry.ratios.zeta != report.zeta ||
        !(entry.ratios.bindings == report.bindings)) {
      throw MetricError("candidate '" + entry.model_name +
                        "' carries different zeta/bindings than the report");
    }
  }
}

void check_chart(const ChartSpec& spec, ChartKind expected,
                 const char* renderer) {
  if (spec.kind != expected) {
    throw MetricError(std::string(renderer) +
                      " called with the wrong chart kind");
  }
  if (spec.series.empty()) {
    throw MetricError(std::string(renderer) + " needs at least one series");
  }
  std::set<std::string> names;
  for (const auto& series : spec.series) {
    if (!names.insert(series.name).second) {
      throw MetricError("duplicate series name '" + series.name + "'");
    }
    for (const double v : series.values) {
      if (!std::isfinite(v)) {
        throw MetricError("series '" + series.name +
                          "' contains a non-finite value");
      }
    }
  }
  if (spec.width < 320 || spec.height < 240) {
    throw MetricError("chart canvas too small (minimum 320x240)");
  }
}

struct Svg {
  std::ostringstream out;

  Svg(const ChartSpec& spec, const char* chart_class) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
        << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
        << " " << spec.height << "\" class=\"" << chart_class << "\">\n";
    out << "  <rect class=\"background\" x=\"0\" y=\"0\" width=\""
        << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"#ffffff\"/>\n";
    if (!spec.title.empty()) {
      out << "  <text class=\"title\" x=\"" << spec.width / 2
          << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"15\" fill=\"#222222\">"
          << esc(spec.title) << "</text>\n";
    }
  }

  std::string finish() {
    out << "</svg>\n";
    return out.str();
  }
};

void draw_legend(std::ostringstream& out, const ChartSpec& spec, double x,
                 double y) {
  out << "  <g class=\"legend\">\n";
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    const double row_y = y + static_cast<double>(i) * 22.0;
    out << "    <rect class=\"legend-swatch\" x=\"" << format_fixed(x, 2)
        << "\" y=\"" << format_fixed(row_y, 2)
        << "\" width=\"14\" height=\"14\" fill=\"" << kPalette[i]
        << "\"/>\n";
    out << "    <text class=\"legend-label\" x=\"" << format_fixed(x + 20, 2)
        << "\" y=\"" << format_fixed(row_y + 11, 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "fill=\"#222222\">"
        << esc(spec.series[i].name) << "</text>\n";
  }
  out << "  </g>\n";
}

}  // namespace

std::string comparison_to_json(const ComparisonReport& report) {
  validate_comparison(report);
  ordered_json doc;
  doc["schema_version"] = report.schema_version;
  doc["tool_version"] = report.tool_version;
  doc["generated_at"] = report.generated_at;
  doc["baseline"] = report.baseline_name;
  doc["zeta"] = report.zeta;
  ordered_json bindings;
  bindings["performance"] = report.bindings.performance_source;
  bindings["speed"] = combined::speed_source_name(report.bindings.speed);
  bindings["size"] = combined::size_source_name(report.bindings.size);
  bindings["efficiency"] =
      combined::efficiency_source_name(report.bindings.efficiency);
  bindings["dense_only"] = report.bindings.dense_only;
  doc["bindings"] = std::move(bindings);

  ordered_json candidates = ordered_json::array();
  for (const auto& entry : report.candidates) {
    ordered_json c;
    c["name"] = entry.model_name;
    ordered_json ratios;
    ratios["p"] = entry.ratios.p;
    ratios["s"] = entry.ratios.s;
    ratios["c"] = entry.ratios.c;
    ratios["e"] = entry.ratios.e;
    c["ratios"] = std::move(ratios);
    c["ocs"] = entry.ocs;
    candidates.push_back(std::move(c));
  }
  doc["candidates"] = std::move(candidates);

  ordered_json inputs = ordered_json::object();
  for (const auto& [role, rec] : report.inputs) {
    inputs[role] = {{"path", rec.path}, {"sha256", rec.sha256}};
  }
  doc["inputs"] = std::move(inputs);
  ordered_json config = ordered_json::object();
  for (const auto& [key, value] : report.config) {
    config[key] = value;
  }
  doc["config"] = std::move(config);
  doc["notes"] = report.notes;
  return doc.dump(2) + "\n";
}

ComparisonReport comparison_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed comparison log: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("comparison log: root must be an object");
  }
  ComparisonReport r;
  try {
    r.schema_version = doc.at("schema_version").get<int>();
    r.tool_version = doc.at("tool_version").get<std::string>();
    r.generated_at = doc.at("generated_at").get<std::string>();
    r.baseline_name = doc.at("baseline").get<std::string>();
    r.zeta = doc.at("zeta").get<double>();
    const auto& bindings = doc.at("bindings");
    r.bindings.performance_source =
        bindings.at("performance").get<std::string>();
    const std::string bindings_spec =
        "speed=" + bindings.at("speed").get<std::string>() +
        ",size=" + bindings.at("size").get<std::string>() +
        ",efficiency=" + bindings.at("efficiency").get<std::string>() +
        ",dense_only=" +
        (bindings.at("dense_only").get<bool>() ? "true" : "false");
    const combined::RatioBindings parsed =
        combined::parse_bindings(bindings_spec);
    r.bindings.speed = parsed.speed;
    r.bindings.size = parsed.size;
    r.bindings.efficiency = parsed.efficiency;
    r.bindings.dense_only = parsed.dense_only;

    for (const auto& c : doc.at("candidates")) {
      ComparisonEntry entry;
      entry.model_name = c.at("name").get<std::string>();
      const auto& ratios = c.at("ratios");
      entry.ratios.p = ratios.at("p").get<double>();
      entry.ratios.s = ratios.at("s").get<double>();
      entry.ratios.c = ratios.at("c").get<double>();
      entry.ratios.e = ratios.at("e").get<double>();
      entry.ratios.zeta = r.zeta;
      entry.ratios.bindings = r.bindings;
      entry.ocs = c.at("ocs").get<double>();
      r.candidates.push_back(std::move(entry));
    }
    for (const auto& [role, rec] : doc.at("inputs").items()) {
      r.inputs[role] = {rec.at("path").get<std::string>(),
                        rec.at("sha256").get<std::string>()};
    }
    for (const auto& [key, value] : doc.at("config").items()) {
      r.config[key] = value.get<std::string>();
    }
    for (const auto& note : doc.at("notes")) {
      r.notes.push_back(note.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("comparison log: invalid structure: ") +
                     e.what());
  }
  validate_comparison(r);
  return r;
}

std::string render_radar(const ChartSpec& spec) {
  check_chart(spec, ChartKind::kRadar, "radar renderer");
  const std::size_t n_axes = spec.axes.size();
  if (n_axes < 3 || n_axes > 8) {
    throw MetricError("radar chart needs 3 to 8 axes, got " +
                      std::to_string(n_axes));
  }
  if (spec.series.size() > kMaxSeries) {
    throw MetricError(
        "radar chart draws at most 6 series; rank the candidates and keep "
        "the best ones");
  }
  for (const auto& series : spec.series) {
    if (series.values.size() != n_axes) {
      throw MetricError("series '" + series.name + "' has " +
                        std::to_string(series.values.size()) +
                        " values for " + std::to_string(n_axes) + " axes");
    }
    for (const double v : series.values) {
      if (v < 0.0) {
        throw MetricError("radar values must be non-negative (series '" +
                          series.name + "')");
      }
    }
  }

  // Per-axis linear scale from 0 to the observed maximum plus 10% headroom.
  std::vector<double> axis_top(n_axes, 0.0);
  for (std::size_t a = 0; a < n_axes; ++a) {
    double top = 0.0;
    for (const auto& series : spec.series) {
      top = std::max(top, series.values[a]);
    }
    axis_top[a] = top * 1.1;
  }
  const bool log_scale = spec.scale == AxisScale::kLog;
  const auto radial = [&](std::size_t axis, double value) {
    if (axis_top[axis] <= 0.0) return 0.0;
    if (log_scale) {
      return std::log1p(value) / std::log1p(axis_top[axis]);
    }
    return value / axis_top[axis];
  };

  const double cx = 215.0;
  const double cy = 258.0;
  const double radius = 165.0;
  const auto point_at = [&](std::size_t axis, double fraction) {
    // Axis 0 points straight up; successive axes advance clockwise, which
    // in SVG's y-down frame is the +angle direction.
    const double angle = (-90.0 + 360.0 * static_cast<double>(axis) /
                                      static_cast<double>(n_axes)) *
                         M_PI / 180.0;
    return std::pair<double, double>(cx + radius * fraction * std::cos(angle),
                                     cy + radius * fraction * std::sin(angle));
  };

  Svg svg(spec, "radar-chart");
  auto& out = svg.out;

  out << "  <g class=\"grid\">\n";
  for (const double ring : {0.25, 0.5, 0.75, 1.0}) {
    out << "    <polygon class=\"grid-ring\" fill=\"none\" "
           "stroke=\"#cccccc\" stroke-width=\"1\" points=\"";
    for (std::size_t a = 0; a < n_axes; ++a) {
      const auto [x, y] = point_at(a, ring);
      if (a) out << ' ';
      out << format_fixed(x, 2) << ',' << format_fixed(y, 2);
    }
    out << "\"/>\n";
  }
  out << "  </g>\n";

  out << "  <g class=\"axes\">\n";
  for (std::size_t a = 0; a < n_axes; ++a) {
    const auto [x, y] = point_at(a, 1.0);
    out << "    <line class=\"axis\" x1=\"" << format_fixed(cx, 2)
        << "\" y1=\"" << format_fixed(cy, 2) << "\" x2=\""
        << format_fixed(x, 2) << "\" y2=\"" << format_fixed(y, 2)
        << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    const auto [lx, ly] = point_at(a, 1.12);
    out << "    <text class=\"axis-label\" x=\"" << format_fixed(lx, 2)
        << "\" y=\"" << format_fixed(ly + 4, 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" fill=\"#222222\">"
        << esc(spec.axes[a]) << "</text>\n";
    out << "    <text class=\"axis-max\" x=\"" << format_fixed(lx, 2)
        << "\" y=\"" << format_fixed(ly + 18, 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"9\" fill=\"#888888\">"
        << format_fixed(axis_top[a], 2) << "</text>\n";
  }
  out << "  </g>\n";

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& series = spec.series[s];
    out << "  <g class=\"series\" data-name=\"" << esc(series.name)
        << "\">\n";
    out << "    <polygon class=\"series-polygon\" fill=\"" << kPalette[s]
        << "\" fill-opacity=\"0.15\" stroke=\"" << kPalette[s]
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t a = 0; a < n_axes; ++a) {
      const auto [x, y] = point_at(a, radial(a, series.values[a]));
      if (a) out << ' ';
      out << format_fixed(x, 2) << ',' << format_fixed(y, 2);
    }
    out << "\"/>\n";
    out << "  </g>\n";
  }

  draw_legend(out, spec, 440.0, 70.0);
  return svg.finish();
}

std::string render_bar(const ChartSpec& spec) {
  check_chart(spec, ChartKind::kBar, "bar renderer");
  for (const auto& series : spec.series) {
    if (series.values.size() != 1) {
      throw MetricError("bar series '" + series.name +
                        "' must carry exactly one value");
    }
  }

  // Bars are drawn in descending value order; name breaks exact ties so
  // the layout is a total order.
  std::vector<const ChartSeries*> order;
  order.reserve(spec.series.size());
  for (const auto& series : spec.series) order.push_back(&series);
  std::sort(order.begin(), order.end(),
            [](const ChartSeries* a, const ChartSeries* b) {
              if (a->values[0] != b->values[0]) {
                return a->values[0] > b->values[0];
              }
              return a->name < b->name;
            });

  double vmax = 0.0, vmin = 0.0;
  for (const auto* series : order) {
    vmax = std::max(vmax, series->values[0]);
    vmin = std::min(vmin, series->values[0]);
  }
  vmax *= 1.1;
  vmin *= 1.1;
  if (vmax == 0.0 && vmin == 0.0) vmax = 1.0;  // all-zero chart still draws

  const double left = 70.0, top = 50.0;
  const double right = static_cast<double>(spec.width) - 30.0;
  const double bottom = static_cast<double>(spec.height) - 70.0;
  const auto y_of = [&](double v) {
    return top + (vmax - v) / (vmax - vmin) * (bottom - top);
  };
  const double zero_y = y_of(0.0);
  const double slot = (right - left) / static_cast<double>(order.size());
  const double bar_w = slot * 0.6;

  Svg svg(spec, "bar-chart");
  auto& out = svg.out;

  out << "  <line class=\"zero-axis\" x1=\"" << format_fixed(left, 2)
      << "\" y1=\"" << format_fixed(zero_y, 2) << "\" x2=\""
      << format_fixed(right, 2) << "\" y2=\"" << format_fixed(zero_y, 2)
      << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  if (!spec.axes.empty()) {
    out << "  <text class=\"y-axis-label\" x=\"18\" y=\""
        << format_fixed((top + bottom) / 2.0, 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\"#222222\" transform=\"rotate(-90 18 "
        << format_fixed((top + bottom) / 2.0, 2) << ")\">" << esc(spec.axes[0])
        << "</text>\n";
  }

  out << "  <g class=\"bars\">\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& series = *order[i];
    const double v = series.values[0];
    const double x = left + slot * static_cast<double>(i) +
                     (slot - bar_w) / 2.0;
    const double y = v >= 0.0 ? y_of(v) : zero_y;
    const double h = std::abs(y_of(v) - zero_y);
    const char* color = kPalette[i % kMaxSeries];
    out << "    <rect class=\"bar\" data-name=\"" << esc(series.name)
        << "\" data-value=\"" << format_double(v) << "\" x=\""
        << format_fixed(x, 2) << "\" y=\"" << format_fixed(y, 2)
        << "\" width=\"" << format_fixed(bar_w, 2) << "\" height=\""
        << format_fixed(h, 2) << "\" fill=\"" << color << "\"/>\n";
    // Value above positive bars, below negative ones.
    const double label_y = v >= 0.0 ? y - 6.0 : y + h + 14.0;
    out << "    <text class=\"bar-value\" x=\""
        << format_fixed(x + bar_w / 2.0, 2) << "\" y=\""
        << format_fixed(label_y, 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\" fill=\"#222222\">"
        << format_fixed(v, 2) << "</text>\n";
    out << "    <text class=\"bar-label\" x=\""
        << format_fixed(x + bar_w / 2.0, 2) << "\" y=\""
        << format_fixed(bottom + 18.0, 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\" fill=\"#222222\">"
        << esc(series.name) << "</text>\n";
  }
  out << "  </g>\n";
  return svg.finish();
}

std::string render_accuracy_speed(const ChartSpec& spec) {
  check_chart(spec, ChartKind::kAccuracySpeed, "scatter renderer");
  if (spec.axes.size() != 2) {
    throw MetricError("scatter chart needs exactly two axis labels");
  }
  for (const auto& series : spec.series) {
    if (series.values.size() != 3) {
      throw MetricError("scatter series '" + series.name +
                        "' must carry (speed, accuracy, size)");
    }
    if (!(series.values[2] > 0.0)) {
      throw MetricError("scatter series '" + series.name +
                        "' has a non-positive size");
    }
    if (series.values[0] < 0.0 || series.values[1] < 0.0) {
      throw MetricError("scatter series '" + series.name +
                        "' has negative coordinates");
    }
  }

  double max_x = 0.0, max_y = 0.0, max_size = 0.0;
  for (const auto& series : spec.series) {
    max_x = std::max(max_x, series.values[0]);
    max_y = std::max(max_y, series.values[1]);
    max_size = std::max(max_size, series.values[2]);
  }
  max_x = max_x > 0.0 ? max_x * 1.1 : 1.0;
  max_y = max_y > 0.0 ? max_y * 1.1 : 1.0;

  const double left = 70.0, top = 50.0;
  const double right = static_cast<double>(spec.width) - 170.0;
  const double bottom = static_cast<double>(spec.height) - 60.0;
  const auto x_of = [&](double v) {
    return left + v / max_x * (right - left);
  };
  const auto y_of = [&](double v) {
    return bottom - v / max_y * (bottom - top);
  };
  // Marker area tracks model size: radius proportional to sqrt(size), the
  // largest marker pinned at 20px.
  const double radius_unit = 20.0 / std::sqrt(max_size);

  Svg svg(spec, "accuracy-speed-chart");
  auto& out = svg.out;

  out << "  <g class=\"axes\">\n";
  out << "    <line class=\"x-axis\" x1=\"" << format_fixed(left, 2)
      << "\" y1=\"" << format_fixed(bottom, 2) << "\" x2=\""
      << format_fixed(right, 2) << "\" y2=\"" << format_fixed(bottom, 2)
      << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  out << "    <line class=\"y-axis\" x1=\"" << format_fixed(left, 2)
      << "\" y1=\"" << format_fixed(top, 2) << "\" x2=\""
      << format_fixed(left, 2) << "\" y2=\"" << format_fixed(bottom, 2)
      << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double fx = static_cast<double>(tick) / 4.0;
    out << "    <text class=\"tick-label\" x=\""
        << format_fixed(left + fx * (right - left), 2) << "\" y=\""
        << format_fixed(bottom + 16.0, 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\" fill=\"#555555\">"
        << format_fixed(fx * max_x, 2) << "</text>\n";
    out << "    <text class=\"tick-label\" x=\"" << format_fixed(left - 8, 2)
        << "\" y=\"" << format_fixed(y_of(fx * max_y) + 3, 2)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"10\" fill=\"#555555\">"
        << format_fixed(fx * max_y, 2) << "</text>\n";
  }
  out << "    <text class=\"x-axis-label\" x=\""
      << format_fixed((left + right) / 2.0, 2) << "\" y=\""
      << format_fixed(bottom + 36.0, 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" fill=\"#222222\">"
      << esc(spec.axes[0]) << "</text>\n";
  out << "    <text class=\"y-axis-label\" x=\"18\" y=\""
      << format_fixed((top + bottom) / 2.0, 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" fill=\"#222222\" transform=\"rotate(-90 18 "
      << format_fixed((top + bottom) / 2.0, 2) << ")\">" << esc(spec.axes[1])
      << "</text>\n";
  out << "  </g>\n";

  out << "  <g class=\"markers\">\n";
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    const auto& series = spec.series[i];
    const char* color = kPalette[i % kMaxSeries];
    out << "    <circle class=\"marker\" data-name=\"" << esc(series.name)
        << "\" cx=\"" << format_fixed(x_of(series.values[0]), 2) << "\" cy=\""
        << format_fixed(y_of(series.values[1]), 2) << "\" r=\""
        << format_fixed(radius_unit * std::sqrt(series.values[2]), 2)
        << "\" fill=\"" << color << "\" fill-opacity=\"0.6\" stroke=\""
        << color << "\"/>\n";
  }
  out << "  </g>\n";

  draw_legend(out, spec, right + 20.0, 70.0);
  return svg.finish();
}

std::string comparison_radar(const ComparisonReport& report, int max_series) {
  validate_comparison(report);
  if (max_series < 1 || max_series > kMaxSeries) {
    throw MetricError("radar series cap must lie in [1, 6]");
  }

  // The score lives on another scale than the ratios, so its axis is
  // min-max normalized across the whole compared set; raw values go into
  // the legend. A degenerate set (all equal) sits mid-axis.
  double lo = report.candidates.front().ocs;
  double hi = lo;
  for (const auto& entry : report.candidates) {
    lo = std::min(lo, entry.ocs);
    hi = std::max(hi, entry.ocs);
  }

  ChartSpec spec;
  spec.kind = ChartKind::kRadar;
  spec.axes = {"P", "S", "C", "E", "OCS (norm)"};
  spec.title = "Improvement ratios vs " + report.baseline_name;
  const std::size_t n = std::min<std::size_t>(
      report.candidates.size(), static_cast<std::size_t>(max_series));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& entry = report.candidates[i];
    const double norm =
        hi > lo ? (entry.ocs - lo) / (hi - lo) : 0.5;
    ChartSeries series;
    series.name =
        entry.model_name + " (" + format_fixed(entry.ocs, 3) + ")";
    series.values = {entry.ratios.p, entry.ratios.s, entry.ratios.c,
                     entry.ratios.e, norm};
    spec.series.push_back(std::move(series));
  }
  return render_radar(spec);
}

std::string comparison_bar(const ComparisonReport& report) {
  validate_comparison(report);
  ChartSpec spec;
  spec.kind = ChartKind::kBar;
  spec.axes = {"overall compression success"};
  spec.title = "Overall compression success vs " + report.baseline_name;
  for (const auto& entry : report.candidates) {
    spec.series.push_back({entry.model_name, {entry.ocs}});
  }
  return render_bar(spec);
}

}  // namespace compeval::report
