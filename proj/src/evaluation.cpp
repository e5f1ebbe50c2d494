#include "cct/evaluation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace cct {

namespace {

struct FrameRecords {
  std::vector<Detection> detections;
  std::vector<GroundTruthRecord> ground_truth;
};

void check_set(const EvaluationSet& set) {
  if (set.frame_count < 0) throw std::invalid_argument("frame_count must be non-negative");
  for (const auto& d : set.detections) {
    validate(d);
    if (d.frame_index >= set.frame_count) {
      throw std::invalid_argument("detection frame " + std::to_string(d.frame_index) +
                                  " is beyond frame_count " + std::to_string(set.frame_count));
    }
  }
  std::set<std::pair<std::int64_t, std::int64_t>> keys;
  for (const auto& g : set.ground_truth) {
    if (g.frame_index < 0 || g.frame_index >= set.frame_count) {
      throw std::invalid_argument("ground-truth frame " + std::to_string(g.frame_index) +
                                  " outside [0, frame_count)");
    }
    if (!g.bbox.valid()) throw std::invalid_argument("ground-truth box is not valid");
    if (!keys.emplace(g.frame_index, g.object_id).second) {
      throw std::invalid_argument("duplicate ground truth for frame " +
                                  std::to_string(g.frame_index) + ", object " +
                                  std::to_string(g.object_id));
    }
  }
}

void check_threshold(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("threshold " + std::to_string(t) + " outside [0, 1]");
  }
}

std::map<std::int64_t, FrameRecords> group_by_frame(const EvaluationSet& set, double threshold) {
  std::map<std::int64_t, FrameRecords> frames;
  for (const auto& d : set.detections) {
    if (d.confidence >= threshold) frames[d.frame_index].detections.push_back(d);
  }
  for (const auto& g : set.ground_truth) frames[g.frame_index].ground_truth.push_back(g);
  return frames;
}

}  // namespace

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) noexcept {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  n += o.n;
  return *this;
}

std::int64_t implied_frame_count(const std::vector<Detection>& detections,
                                 const std::vector<GroundTruthRecord>& ground_truth) {
  std::int64_t last = -1;
  for (const auto& d : detections) last = std::max(last, d.frame_index);
  for (const auto& g : ground_truth) last = std::max(last, g.frame_index);
  return last + 1;
}

ConfusionCounts match_frame(std::span<const Detection> detections,
                            std::span<const GroundTruthRecord> ground_truth,
                            double iou_threshold) {
  std::optional<std::int64_t> frame;
  auto same_frame = [&frame](std::int64_t f) {
    if (frame && *frame != f) {
      throw std::invalid_argument("match_frame: records from frames " + std::to_string(*frame) +
                                  " and " + std::to_string(f));
    }
    frame = f;
  };
  for (const auto& d : detections) same_frame(d.frame_index);
  for (const auto& g : ground_truth) same_frame(g.frame_index);

  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].confidence > detections[b].confidence;
  });

  std::vector<bool> taken(ground_truth.size(), false);
  ConfusionCounts counts;
  for (const std::size_t di : order) {
    double best_iou = -1.0;
    std::size_t best = ground_truth.size();
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(detections[di].bbox, ground_truth[g].bbox);
      if (v > best_iou) {
        best_iou = v;
        best = g;
      }
    }
    if (best < ground_truth.size() && best_iou >= iou_threshold) {
      taken[best] = true;
      ++counts.tp;
    } else {
      ++counts.fp;
    }
  }
  counts.fn = static_cast<std::int64_t>(std::count(taken.begin(), taken.end(), false));
  return counts;
}

std::int64_t count_tn(std::int64_t frame_count, const std::vector<Detection>& detections,
                      const std::vector<GroundTruthRecord>& ground_truth, double threshold) {
  std::set<std::int64_t> occupied;
  for (const auto& d : detections) {
    if (d.confidence >= threshold) occupied.insert(d.frame_index);
  }
  for (const auto& g : ground_truth) occupied.insert(g.frame_index);
  std::int64_t tn = 0;
  for (std::int64_t f = 0; f < frame_count; ++f) {
    if (!occupied.contains(f)) ++tn;
  }
  return tn;
}

Metrics metrics(const ConfusionCounts& c) {
  Metrics m;
  if (c.tp + c.fp > 0) {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  } else {
    m.precision_degenerate = true;
  }
  if (c.tp + c.fn > 0) {
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  } else {
    m.recall_degenerate = true;
  }
  if (c.n > 0) {
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.n);
  } else {
    m.accuracy_degenerate = true;
  }
  return m;
}

ConfusionCounts evaluate(const EvaluationSet& set, double threshold, double iou_threshold) {
  check_set(set);
  check_threshold(threshold);
  ConfusionCounts total;
  for (const auto& [frame, records] : group_by_frame(set, threshold)) {
    total += match_frame(records.detections, records.ground_truth, iou_threshold);
  }
  total.tn = count_tn(set.frame_count, set.detections, set.ground_truth, threshold);
  total.n = total.tp + total.fp + total.fn + total.tn;
  return total;
}

MetricsReport evaluate_report(const EvaluationSet& set, double threshold,
                              double iou_threshold) {
  MetricsReport report;
  report.threshold = threshold;
  report.counts = evaluate(set, threshold, iou_threshold);
  report.metrics = metrics(report.counts);
  return report;
}

std::vector<double> default_thresholds() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

std::vector<MetricsReport> threshold_sweep(const EvaluationSet& set,
                                           std::span<const double> thresholds,
                                           double iou_threshold) {
  if (thresholds.empty()) throw std::invalid_argument("threshold list is empty");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    check_threshold(thresholds[i]);
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw std::invalid_argument("thresholds must be strictly increasing");
    }
  }
  std::vector<MetricsReport> reports;
  reports.reserve(thresholds.size());
  for (const double t : thresholds) reports.push_back(evaluate_report(set, t, iou_threshold));
  return reports;
}

}  // namespace cct
