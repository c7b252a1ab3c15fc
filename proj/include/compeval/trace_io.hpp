#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "compeval/accuracy.hpp"
#include "compeval/energy.hpp"
#include "compeval/resources.hpp"

namespace compeval::io {

// Whole-file read; throws IoError with the path on failure.
std::string read_file(const std::string& path);

// Write via a temporary file in the same directory plus rename, so a failed
// run never leaves a half-written file at the target path.
void write_file_atomic(const std::string& path, const std::string& content);

// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

// CSV traces. Header is required and checked verbatim; rows must be sorted
// by t_s. Parse errors carry path and line number.
// power:     t_s,power_w
// resources: t_s,cpu_rt_s,ram_bytes[,gpu_util_pct]
// latency:   latency_s (one wall-clock measurement per line)
std::vector<energy::PowerSample> parse_power_csv(const std::string& text,
                                                 const std::string& path);
std::vector<resources::ResourceSample> parse_resources_csv(
    const std::string& text, const std::string& path);
std::vector<double> parse_latency_csv(const std::string& text,
                                      const std::string& path);

// Prediction logs are JSON Lines, one sample per line.
// Classification: {"sample_id", "ranked": [labels best-first]} or
//                 {"sample_id", "scores": {"label": score, ...}}; scores are
//                 ranked by descending score, ties by ascending label.
// The true label comes from the log ("true_label") or a separate label map.
std::vector<accuracy::ClassificationRecord> parse_classification_jsonl(
    const std::string& text, const std::string& path);

// Detection predictions: {"image_id", "detections": [{"box":[x1,y1,x2,y2],
// "label", "confidence"}]}. Ground truth: {"image_id", "boxes":
// [{"box":[...], "label"}]}. join_detections pairs them by image_id;
// prediction-only images keep empty ground truth and vice versa.
std::vector<accuracy::DetectionRecord> parse_detections_jsonl(
    const std::string& text, const std::string& path);
std::vector<accuracy::DetectionRecord> parse_ground_truth_jsonl(
    const std::string& text, const std::string& path);
std::vector<accuracy::DetectionRecord> join_detections(
    const std::vector<accuracy::DetectionRecord>& predictions,
    const std::vector<accuracy::DetectionRecord>& ground_truths);

// Optional sidecar for classification logs that carry no "true_label":
// JSONL of {"sample_id", "label"}.
void apply_label_map(std::vector<accuracy::ClassificationRecord>& records,
                     const std::string& text, const std::string& path);

// UTC timestamp for report headers, "YYYY-MM-DDTHH:MM:SSZ". Precedence:
// explicit value (CLI flag) > SOURCE_DATE_EPOCH > current time. Keeping the
// clock out of the default path is what makes byte-identical reruns work.
std::string report_timestamp(const std::optional<std::int64_t>& forced_epoch);

}  // namespace compeval::io
