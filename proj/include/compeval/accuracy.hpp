#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace compeval::accuracy {

// One classification prediction: label scores sorted into a ranking.
struct ClassificationRecord {
  std::string sample_id;
  std::vector<int> ranked;  // labels, best first, already deterministic
  int true_label = -1;
};

// Fraction of records whose true label appears in the top k ranks.
double top_k_accuracy(const std::vector<ClassificationRecord>& records, int k);

// Axis-aligned box, corner form. x2/y2 are exclusive of nothing — plain
// coordinates, intersection handles degenerate/empty overlap.
struct Box {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
};

double iou(const Box& a, const Box& b);

struct DetectionBox {
  Box box;
  int label = 0;
  double confidence = 0.0;
};

struct GroundTruthBox {
  Box box;
  int label = 0;
};

// All boxes for one image.
struct DetectionRecord {
  std::string image_id;
  std::vector<DetectionBox> detections;
  std::vector<GroundTruthBox> ground_truths;
};

struct MatchCounts {
  std::uint64_t true_positives = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
};

struct PrMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

PrMetrics precision_recall_f1(const MatchCounts& counts);

// One detection in global rank order with its match outcome, the unit the
// precision/recall curve is built from.
struct RankedMatch {
  double confidence = 0.0;
  int label = 0;
  bool is_tp = false;
};

struct MatchResult {
  MatchCounts counts;
  std::vector<RankedMatch> ranked;          // global confidence order
  std::uint64_t total_ground_truths = 0;
};

// Greedy one-to-one matching at a single IoU threshold. Detections are
// processed in descending confidence (ties: ascending image id, then the
// box's position in its record); each takes the highest-IoU unmatched
// same-class ground truth at or above the threshold (ties: lowest index).
MatchResult match_detections(const std::vector<DetectionRecord>& records,
                             double iou_threshold);

enum class ApIntegration {
  kExact,       // step integral of the monotone precision envelope
  kElevenPoint  // mean of envelope precision at recall 0.0,0.1,...,1.0
};

// AP for one class at one threshold. nullopt means the class has no ground
// truths and is excluded from the mean rather than scored as zero.
std::optional<double> average_precision(
    const std::vector<RankedMatch>& ranked, int label,
    std::uint64_t ground_truths_for_label,
    ApIntegration integration = ApIntegration::kExact);

struct ClassAp {
  int label = 0;
  double ap = 0.0;  // averaged over thresholds
};

struct MapResult {
  double map = 0.0;
  std::vector<ClassAp> per_class;   // sorted by label
  std::vector<double> thresholds;   // as evaluated
};

// Mean AP over classes that have ground truths; with several thresholds each
// class's AP is averaged across thresholds before the mean over classes.
MapResult mean_average_precision(
    const std::vector<DetectionRecord>& records,
    const std::vector<double>& iou_thresholds,
    ApIntegration integration = ApIntegration::kExact);

}  // namespace compeval::accuracy
