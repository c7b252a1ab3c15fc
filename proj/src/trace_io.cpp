#include "compeval/trace_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "compeval/errors.hpp"
#include "json.hpp"

namespace compeval::io {

namespace {

using nlohmann::json;

[[noreturn]] void line_error(const std::string& path, std::size_t line,
                             const std::string& msg) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double_field(const std::string& token, const std::string& path,
                          std::size_t line, const char* field) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end || token.empty()) {
    line_error(path, line, std::string("bad ") + field + " value '" + token +
                               "'");
  }
  if (!std::isfinite(value)) {
    line_error(path, line, std::string(field) + " must be finite");
  }
  return value;
}

std::uint64_t parse_u64_field(const std::string& token, const std::string& path,
                              std::size_t line, const char* field) {
  std::uint64_t value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end || token.empty()) {
    line_error(path, line, std::string("bad ") + field + " value '" + token +
                               "' (want a non-negative integer)");
  }
  return value;
}

// Lines of a text file with 1-based numbering; tolerates a missing final
// newline and strips lone '\r' so CRLF files parse.
std::vector<std::string> text_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find('\n', start);
    if (pos == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    std::string line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = pos + 1;
  }
  return lines;
}

void check_header(const std::vector<std::string>& lines,
                  const std::string& expected, const std::string& path) {
  if (lines.empty()) {
    throw ParseError(path + ": empty file (expected header '" + expected +
                     "')");
  }
  if (lines[0] != expected) {
    line_error(path, 1, "expected header '" + expected + "', got '" +
                            lines[0] + "'");
  }
}

json parse_json_line(const std::string& line, const std::string& path,
                     std::size_t lineno) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    line_error(path, lineno, std::string("malformed record: ") + e.what());
  }
  if (!doc.is_object()) {
    line_error(path, lineno, "record must be a JSON object");
  }
  return doc;
}

std::string get_string(const json& obj, const char* key,
                       const std::string& path, std::size_t lineno) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
    line_error(path, lineno,
               std::string("missing or empty string field '") + key + "'");
  }
  return it->get<std::string>();
}

int get_label(const json& value, const std::string& path, std::size_t lineno,
              const char* what) {
  if (!value.is_number_integer()) {
    line_error(path, lineno, std::string(what) + " must be an integer label");
  }
  return value.get<int>();
}

accuracy::Box parse_box(const json& value, const std::string& path,
                        std::size_t lineno) {
  if (!value.is_array() || value.size() != 4) {
    line_error(path, lineno, "'box' must be [x1, y1, x2, y2]");
  }
  double c[4];
  for (int i = 0; i < 4; ++i) {
    if (!value[i].is_number()) {
      line_error(path, lineno, "'box' coordinates must be numbers");
    }
    c[i] = value[i].get<double>();
    if (!std::isfinite(c[i])) {
      line_error(path, lineno, "'box' coordinates must be finite");
    }
  }
  if (c[2] < c[0] || c[3] < c[1]) {
    line_error(path, lineno, "'box' must satisfy x1 <= x2 and y1 <= y2");
  }
  return {c[0], c[1], c[2], c[3]};
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failed on '" + path + "'");
  }
  return buffer.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open '" + tmp + "' for writing");
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw IoError("write failed on '" + tmp + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const int err = errno;
    std::remove(tmp.c_str());
    throw IoError("cannot move '" + tmp + "' to '" + path +
                  "': " + std::strerror(err));
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw IoError("digest computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::vector<energy::PowerSample> parse_power_csv(const std::string& text,
                                                 const std::string& path) {
  const auto lines = text_lines(text);
  check_header(lines, "t_s,power_w", path);
  std::vector<energy::PowerSample> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split(lines[i], ',');
    if (fields.size() != 2) {
      line_error(path, i + 1, "expected 2 fields, got " +
                                  std::to_string(fields.size()));
    }
    energy::PowerSample s;
    s.t_s = parse_double_field(fields[0], path, i + 1, "t_s");
    s.power_w = parse_double_field(fields[1], path, i + 1, "power_w");
    if (s.power_w < 0.0) {
      line_error(path, i + 1, "power_w must be non-negative");
    }
    if (!out.empty() && s.t_s <= out.back().t_s) {
      line_error(path, i + 1, "t_s must strictly increase");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<resources::ResourceSample> parse_resources_csv(
    const std::string& text, const std::string& path) {
  const auto lines = text_lines(text);
  if (lines.empty()) {
    throw ParseError(path + ": empty file (expected a resource trace header)");
  }
  bool with_gpu = false;
  if (lines[0] == "t_s,cpu_rt_s,ram_bytes,gpu_util_pct") {
    with_gpu = true;
  } else if (lines[0] != "t_s,cpu_rt_s,ram_bytes") {
    line_error(path, 1,
               "expected header 't_s,cpu_rt_s,ram_bytes[,gpu_util_pct]', "
               "got '" + lines[0] + "'");
  }
  const std::size_t want = with_gpu ? 4 : 3;
  std::vector<resources::ResourceSample> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split(lines[i], ',');
    if (fields.size() != want) {
      line_error(path, i + 1, "expected " + std::to_string(want) +
                                  " fields, got " +
                                  std::to_string(fields.size()));
    }
    resources::ResourceSample s;
    s.t_s = parse_double_field(fields[0], path, i + 1, "t_s");
    s.cpu_rt_s = parse_double_field(fields[1], path, i + 1, "cpu_rt_s");
    s.ram_bytes = parse_u64_field(fields[2], path, i + 1, "ram_bytes");
    if (s.cpu_rt_s < 0.0) {
      line_error(path, i + 1, "cpu_rt_s must be non-negative");
    }
    if (with_gpu) {
      s.gpu_util_pct =
          parse_double_field(fields[3], path, i + 1, "gpu_util_pct");
    }
    if (!out.empty() && s.t_s <= out.back().t_s) {
      line_error(path, i + 1, "t_s must strictly increase");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<double> parse_latency_csv(const std::string& text,
                                      const std::string& path) {
  const auto lines = text_lines(text);
  check_header(lines, "latency_s", path);
  std::vector<double> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const double v = parse_double_field(lines[i], path, i + 1, "latency_s");
    if (v <= 0.0) {
      line_error(path, i + 1, "latency_s must be positive");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<accuracy::ClassificationRecord> parse_classification_jsonl(
    const std::string& text, const std::string& path) {
  const auto lines = text_lines(text);
  std::vector<accuracy::ClassificationRecord> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t lineno = i + 1;
    const json doc = parse_json_line(lines[i], path, lineno);
    accuracy::ClassificationRecord rec;
    rec.sample_id = get_string(doc, "sample_id", path, lineno);
    if (!seen.insert(rec.sample_id).second) {
      line_error(path, lineno, "duplicate sample_id '" + rec.sample_id + "'");
    }

    const bool has_ranked = doc.contains("ranked");
    const bool has_scores = doc.contains("scores");
    if (has_ranked == has_scores) {
      line_error(path, lineno,
                 "need exactly one of 'ranked' or 'scores'");
    }
    if (has_ranked) {
      const auto& ranked = doc["ranked"];
      if (!ranked.is_array() || ranked.empty()) {
        line_error(path, lineno, "'ranked' must be a non-empty array");
      }
      std::unordered_set<int> labels;
      for (const auto& v : ranked) {
        const int label = get_label(v, path, lineno, "'ranked' entry");
        if (!labels.insert(label).second) {
          line_error(path, lineno, "'ranked' repeats label " +
                                       std::to_string(label));
        }
        rec.ranked.push_back(label);
      }
    } else {
      const auto& scores = doc["scores"];
      if (!scores.is_object() || scores.empty()) {
        line_error(path, lineno, "'scores' must be a non-empty object");
      }
      std::vector<std::pair<int, double>> pairs;
      for (const auto& [key, value] : scores.items()) {
        int label = 0;
        const char* begin = key.data();
        const char* end = begin + key.size();
        const auto res = std::from_chars(begin, end, label);
        if (res.ec != std::errc() || res.ptr != end) {
          line_error(path, lineno, "'scores' key '" + key +
                                       "' is not an integer label");
        }
        if (!value.is_number()) {
          line_error(path, lineno, "score for label '" + key +
                                       "' must be a number");
        }
        const double score = value.get<double>();
        if (!std::isfinite(score)) {
          line_error(path, lineno, "score for label '" + key +
                                       "' must be finite");
        }
        pairs.emplace_back(label, score);
      }
      // Descending score; equal scores rank the smaller label first so the
      // ranking never depends on JSON key order.
      std::sort(pairs.begin(), pairs.end(),
                [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
                });
      for (const auto& [label, score] : pairs) {
        (void)score;
        rec.ranked.push_back(label);
      }
    }

    if (doc.contains("true_label")) {
      rec.true_label = get_label(doc["true_label"], path, lineno,
                                 "'true_label'");
    }
    out.push_back(std::move(rec));
  }
  if (out.empty()) {
    throw ParseError(path + ": no prediction records");
  }
  return out;
}

namespace {

std::vector<accuracy::DetectionRecord> parse_detection_like(
    const std::string& text, const std::string& path, const char* list_key,
    bool with_confidence) {
  const auto lines = text_lines(text);
  std::vector<accuracy::DetectionRecord> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t lineno = i + 1;
    const json doc = parse_json_line(lines[i], path, lineno);
    accuracy::DetectionRecord rec;
    rec.image_id = get_string(doc, "image_id", path, lineno);
    if (!seen.insert(rec.image_id).second) {
      line_error(path, lineno, "duplicate image_id '" + rec.image_id + "'");
    }
    const auto it = doc.find(list_key);
    if (it == doc.end() || !it->is_array()) {
      line_error(path, lineno,
                 std::string("missing array field '") + list_key + "'");
    }
    for (const auto& entry : *it) {
      if (!entry.is_object()) {
        line_error(path, lineno,
                   std::string("'") + list_key + "' entries must be objects");
      }
      const accuracy::Box box = parse_box(entry.value("box", json()), path,
                                          lineno);
      const int label = get_label(entry.value("label", json()), path, lineno,
                                  "'label'");
      if (with_confidence) {
        const auto conf_it = entry.find("confidence");
        if (conf_it == entry.end() || !conf_it->is_number()) {
          line_error(path, lineno, "detection needs a numeric 'confidence'");
        }
        const double conf = conf_it->get<double>();
        if (!(conf >= 0.0 && conf <= 1.0)) {
          line_error(path, lineno, "'confidence' must lie in [0, 1]");
        }
        rec.detections.push_back({box, label, conf});
      } else {
        rec.ground_truths.push_back({box, label});
      }
    }
    out.push_back(std::move(rec));
  }
  if (out.empty()) {
    throw ParseError(path + ": no records");
  }
  return out;
}

}  // namespace

std::vector<accuracy::DetectionRecord> parse_detections_jsonl(
    const std::string& text, const std::string& path) {
  return parse_detection_like(text, path, "detections", true);
}

std::vector<accuracy::DetectionRecord> parse_ground_truth_jsonl(
    const std::string& text, const std::string& path) {
  return parse_detection_like(text, path, "boxes", false);
}

std::vector<accuracy::DetectionRecord> join_detections(
    const std::vector<accuracy::DetectionRecord>& predictions,
    const std::vector<accuracy::DetectionRecord>& ground_truths) {
  std::map<std::string, accuracy::DetectionRecord> merged;
  for (const auto& rec : predictions) {
    merged[rec.image_id].image_id = rec.image_id;
    merged[rec.image_id].detections = rec.detections;
  }
  for (const auto& rec : ground_truths) {
    merged[rec.image_id].image_id = rec.image_id;
    merged[rec.image_id].ground_truths = rec.ground_truths;
  }
  std::vector<accuracy::DetectionRecord> out;
  out.reserve(merged.size());
  for (auto& [id, rec] : merged) {
    (void)id;
    out.push_back(std::move(rec));
  }
  return out;  // std::map iteration = ascending image_id, deterministic
}

void apply_label_map(std::vector<accuracy::ClassificationRecord>& records,
                     const std::string& text, const std::string& path) {
  const auto lines = text_lines(text);
  std::map<std::string, int> labels;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t lineno = i + 1;
    const json doc = parse_json_line(lines[i], path, lineno);
    const std::string id = get_string(doc, "sample_id", path, lineno);
    if (labels.count(id)) {
      line_error(path, lineno, "duplicate sample_id '" + id + "'");
    }
    labels[id] = get_label(doc.value("label", json()), path, lineno,
                           "'label'");
  }
  for (auto& rec : records) {
    const auto it = labels.find(rec.sample_id);
    if (it != labels.end()) {
      rec.true_label = it->second;
    }
  }
}

std::string report_timestamp(const std::optional<std::int64_t>& forced_epoch) {
  std::int64_t epoch = 0;
  if (forced_epoch) {
    epoch = *forced_epoch;
  } else if (const char* env = std::getenv("SOURCE_DATE_EPOCH");
             env && *env) {
    std::int64_t parsed = 0;
    const auto res = std::from_chars(env, env + std::strlen(env), parsed);
    if (res.ec != std::errc() || *res.ptr != '\0') {
      throw ParseError("SOURCE_DATE_EPOCH is not an integer: '" +
                       std::string(env) + "'");
    }
    epoch = parsed;
  } else {
    epoch = static_cast<std::int64_t>(std::time(nullptr));
  }
  const std::time_t t = static_cast<std::time_t>(epoch);
  std::tm tm{};
  if (gmtime_r(&t, &tm) == nullptr) {
    throw MetricError("timestamp out of representable range");
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

}  // namespace compeval::io
