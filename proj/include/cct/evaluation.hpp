#pragma once

// Detection-quality evaluation: per-frame greedy matching, pooled confusion
// counts and the Precision / Recall / Accuracy sweep over confidence
// thresholds.
//
// Counting conventions:
//   TP, FP, FN  box-level, summed over all frames.
//   TN          frame-level: a frame with no surviving detection and no
//               ground-truth box counts once.
//   N           TP + FP + FN + TN.
// Precision or recall with a zero denominator is reported as 0 and flagged
// degenerate.

#include <cstdint>
#include <span>
#include <vector>

#include "cct/geometry.hpp"

namespace cct {

struct GroundTruthRecord {
  std::int64_t frame_index{0};
  BoundingBox bbox;
  std::int64_t object_id{0};

  friend bool operator==(const GroundTruthRecord&, const GroundTruthRecord&) = default;
};

struct ConfusionCounts {
  std::int64_t tp{0};
  std::int64_t fp{0};
  std::int64_t fn{0};
  std::int64_t tn{0};
  std::int64_t n{0};

  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept;
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Metrics {
  double precision{0.0};
  double recall{0.0};
  double accuracy{0.0};
  bool precision_degenerate{false};
  bool recall_degenerate{false};
  bool accuracy_degenerate{false};

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct MetricsReport {
  double threshold{0.0};
  ConfusionCounts counts;
  Metrics metrics;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Detections and ground truth for frames [0, frame_count).
struct EvaluationSet {
  std::vector<Detection> detections;
  std::vector<GroundTruthRecord> ground_truth;
  std::int64_t frame_count{0};
};

/// Frame count implied by the records: one past the largest frame index.
[[nodiscard]] std::int64_t implied_frame_count(const std::vector<Detection>& detections,
                                               const std::vector<GroundTruthRecord>& ground_truth);

/// Greedy matching for one frame. Detections are visited by descending
/// confidence (equal confidences in input order); each takes the unmatched
/// ground-truth box of highest IoU (ties to the lower index) and is a TP
/// when that IoU reaches iou_threshold, otherwise an FP. Leftover ground
/// truth is FN. tn and n are left 0.
///
/// Throws std::invalid_argument if the records span more than one frame.
[[nodiscard]] ConfusionCounts match_frame(std::span<const Detection> detections,
                                          std::span<const GroundTruthRecord> ground_truth,
                                          double iou_threshold = 0.5);

/// Number of frames in [0, frame_count) with no detection at or above
/// `threshold` and no ground-truth box.
[[nodiscard]] std::int64_t count_tn(std::int64_t frame_count,
                                    const std::vector<Detection>& detections,
                                    const std::vector<GroundTruthRecord>& ground_truth,
                                    double threshold = 0.0);

[[nodiscard]] Metrics metrics(const ConfusionCounts& counts);

/// Pooled counts over the whole set after dropping detections with
/// confidence below `threshold`.
[[nodiscard]] ConfusionCounts evaluate(const EvaluationSet& set, double threshold,
                                       double iou_threshold = 0.5);

[[nodiscard]] MetricsReport evaluate_report(const EvaluationSet& set, double threshold,
                                            double iou_threshold = 0.5);

/// 0.1, 0.2, ..., 0.9.
[[nodiscard]] std::vector<double> default_thresholds();

/// One report per threshold. Thresholds must be strictly increasing and lie
/// in [0, 1]; an empty list is rejected.
[[nodiscard]] std::vector<MetricsReport> threshold_sweep(const EvaluationSet& set,
                                                         std::span<const double> thresholds,
                                                         double iou_threshold = 0.5);

}  // namespace cct
