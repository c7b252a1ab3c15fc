#include "compeval/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "compeval/errors.hpp"

namespace compeval::accuracy {

double top_k_accuracy(const std::vector<ClassificationRecord>& records,
                      int k) {
  if (records.empty()) {
    throw MetricError("top-k accuracy over an empty prediction log");
  }
  if (k < 1) {
    throw MetricError("top-k accuracy needs k >= 1, got " + std::to_string(k));
  }
  std::uint64_t hits = 0;
  for (const auto& rec : records) {
    const std::size_t depth =
        std::min(rec.ranked.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < depth; ++i) {
      if (rec.ranked[i] == rec.true_label) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double iou(const Box& a, const Box& b) {
  const double ix = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const double iy = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const double inter = ix * iy;
  const double area_a = std::max(0.0, a.x2 - a.x1) * std::max(0.0, a.y2 - a.y1);
  const double area_b = std::max(0.0, b.x2 - b.x1) * std::max(0.0, b.y2 - b.y1);
  const double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

PrMetrics precision_recall_f1(const MatchCounts& counts) {
  PrMetrics m;
  const std::uint64_t pred = counts.true_positives + counts.false_positives;
  const std::uint64_t actual = counts.true_positives + counts.false_negatives;
  m.precision = pred == 0 ? 0.0
                          : static_cast<double>(counts.true_positives) /
                                static_cast<double>(pred);
  m.recall = actual == 0 ? 0.0
                         : static_cast<double>(counts.true_positives) /
                               static_cast<double>(actual);
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

namespace {

// A detection's place in the global ranking. Confidence descends; ties are
// broken by image id then by the box's position in its record, which makes
// the ranking a total order independent of input container order.
struct RankKey {
  std::size_t record_idx;
  std::size_t box_idx;
};

}  // namespace

MatchResult match_detections(const std::vector<DetectionRecord>& records,
                             double iou_threshold) {
  if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
    throw MetricError("IoU threshold must lie in (0, 1], got " +
                      std::to_string(iou_threshold));
  }
  std::vector<RankKey> order;
  for (std::size_t r = 0; r < records.size(); ++r) {
    for (std::size_t b = 0; b < records[r].detections.size(); ++b) {
      const double conf = records[r].detections[b].confidence;
      if (!std::isfinite(conf)) {
        throw MetricError("non-finite confidence in image '" +
                          records[r].image_id + "'");
      }
      order.push_back({r, b});
    }
  }
  std::sort(order.begin(), order.end(),
            [&records](const RankKey& a, const RankKey& b) {
              const auto& da = records[a.record_idx].detections[a.box_idx];
              const auto& db = records[b.record_idx].detections[b.box_idx];
              if (da.confidence != db.confidence) {
                return da.confidence > db.confidence;
              }
              const auto& ia = records[a.record_idx].image_id;
              const auto& ib = records[b.record_idx].image_id;
              if (ia != ib) return ia < ib;
              return a.box_idx < b.box_idx;
            });

  MatchResult result;
  std::vector<std::vector<bool>> gt_taken(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    gt_taken[r].assign(records[r].ground_truths.size(), false);
    result.total_ground_truths += records[r].ground_truths.size();
  }

  result.ranked.reserve(order.size());
  for (const auto& key : order) {
    const auto& rec = records[key.record_idx];
    const auto& det = rec.detections[key.box_idx];
    // Highest-IoU unmatched same-class ground truth; strict > keeps the
    // lowest index on IoU ties.
    std::size_t best_gt = rec.ground_truths.size();
    double best_iou = 0.0;
    for (std::size_t g = 0; g < rec.ground_truths.size(); ++g) {
      if (gt_taken[key.record_idx][g]) continue;
      const auto& gt = rec.ground_truths[g];
      if (gt.label != det.label) continue;
      const double overlap = iou(det.box, gt.box);
      if (overlap >= iou_threshold && overlap > best_iou) {
        best_iou = overlap;
        best_gt = g;
      }
    }
    RankedMatch entry;
    entry.confidence = det.confidence;
    entry.label = det.label;
    if (best_gt < rec.ground_truths.size()) {
      gt_taken[key.record_idx][best_gt] = true;
      entry.is_tp = true;
      ++result.counts.true_positives;
    } else {
      ++result.counts.false_positives;
    }
    result.ranked.push_back(entry);
  }
  result.counts.false_negatives =
      result.total_ground_truths - result.counts.true_positives;
  return result;
}

std::optional<double> average_precision(const std::vector<RankedMatch>& ranked,
                                        int label,
                                        std::uint64_t ground_truths_for_label,
                                        ApIntegration integration) {
  if (ground_truths_for_label == 0) {
    return std::nullopt;  // class absent from ground truth: excluded, not 0
  }
  std::vector<double> precision;
  std::vector<double> recall;
  std::uint64_t tp = 0, fp = 0;
  for (const auto& entry : ranked) {
    if (entry.label != label) continue;
    entry.is_tp ? ++tp : ++fp;
    precision.push_back(static_cast<double>(tp) /
                        static_cast<double>(tp + fp));
    recall.push_back(static_cast<double>(tp) /
                     static_cast<double>(ground_truths_for_label));
  }
  if (precision.empty()) return 0.0;

  // Monotone envelope from the right: the interpolated precision at any
  // recall level is the best precision achievable at that recall or beyond.
  std::vector<double> envelope(precision.size());
  double running = 0.0;
  for (std::size_t i = precision.size(); i-- > 0;) {
    running = std::max(running, precision[i]);
    envelope[i] = running;
  }

  if (integration == ApIntegration::kElevenPoint) {
    double total = 0.0;
    for (int step = 0; step <= 10; ++step) {
      const double level = static_cast<double>(step) / 10.0;
      double best = 0.0;
      for (std::size_t i = 0; i < recall.size(); ++i) {
        if (recall[i] >= level) {
          best = envelope[i];
          break;  // envelope is non-increasing; first reach is the max
        }
      }
      total += best;
    }
    return total / 11.0;
  }

  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < recall.size(); ++i) {
    if (recall[i] > prev_recall) {
      ap += (recall[i] - prev_recall) * envelope[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

MapResult mean_average_precision(const std::vector<DetectionRecord>& records,
                                 const std::vector<double>& iou_thresholds,
                                 ApIntegration integration) {
  if (records.empty()) {
    throw MetricError("mAP over an empty detection log");
  }
  if (iou_thresholds.empty()) {
    throw MetricError("mAP needs at least one IoU threshold");
  }
  std::map<int, std::uint64_t> gts_per_label;
  for (const auto& rec : records) {
    for (const auto& gt : rec.ground_truths) {
      ++gts_per_label[gt.label];
    }
  }
  if (gts_per_label.empty()) {
    throw MetricError("mAP needs at least one ground-truth box");
  }

  // Per class, average AP across thresholds first; then the mean over
  // classes (only classes that exist in the ground truth).
  std::map<int, double> ap_sums;
  for (const double threshold : iou_thresholds) {
    const MatchResult matched = match_detections(records, threshold);
    for (const auto& [label, gt_count] : gts_per_label) {
      const auto ap =
          average_precision(matched.ranked, label, gt_count, integration);
      ap_sums[label] += ap.value_or(0.0);  // gt_count > 0, so ap is engaged
    }
  }

  MapResult out;
  out.thresholds = iou_thresholds;
  double total = 0.0;
  for (const auto& [label, sum] : ap_sums) {
    const double class_ap = sum / static_cast<double>(iou_thresholds.size());
    out.per_class.push_back({label, class_ap});
    total += class_ap;
  }
  out.map = total / static_cast<double>(out.per_class.size());
  return out;
}

}  // namespace compeval::accuracy
