#pragma once

// Centroid and correlation tracking.
//
// Each update filters detections by class and confidence, pairs their
// centroids with live tracks by greedy nearest-pair association, registers
// leftovers as new tracks and ages tracks that went unmatched. A track that
// stays unmatched for more than max_disappearance consecutive updates is
// deregistered. On frames where the detector is not run (see
// detection_interval) and pixels are available, live tracks are advanced by
// normalized cross-correlation instead.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cct/correlation.hpp"
#include "cct/geometry.hpp"
#include "cct/gray_frame.hpp"

namespace cct {

using TrackId = std::int64_t;

struct TrackerConfig {
  int max_disappearance{50};
  double max_distance{50.0};
  double confidence_threshold{0.5};
  int detection_interval{1};
  std::int64_t person_class{0};
  int search_margin{16};

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct TrajectoryPoint {
  std::int64_t frame_index{0};
  Point centroid;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct Track {
  TrackId id{0};
  BoundingBox bbox;
  Point centroid;
  int disappeared{0};
  std::vector<TrajectoryPoint> history;

  friend bool operator==(const Track&, const Track&) = default;
};

struct CorrelatedTrack {
  TrackId track_id{0};
  BoundingBox bbox;
  bool degenerate{false};

  friend bool operator==(const CorrelatedTrack&, const CorrelatedTrack&) = default;
};

/// Event log of one update. `deregistered` is a subset of
/// `disappeared_incremented`; the other lists are pairwise disjoint, and
/// every track live on entry appears in exactly one of matched, correlated
/// and disappeared_incremented.
struct FrameUpdate {
  std::int64_t frame_index{0};
  std::vector<std::pair<TrackId, Detection>> matched;
  std::vector<CorrelatedTrack> correlated;
  std::vector<TrackId> registered;
  std::vector<TrackId> disappeared_incremented;
  std::vector<TrackId> deregistered;

  friend bool operator==(const FrameUpdate&, const FrameUpdate&) = default;
};

struct Association {
  /// (track id, incoming index) in acceptance order.
  std::vector<std::pair<TrackId, std::size_t>> matches;
  std::vector<TrackId> unmatched_tracks;
  std::vector<std::size_t> unmatched_incoming;
};

/// Greedy nearest-pair association. Pairs farther apart than max_distance
/// are dropped first; the rest are accepted in ascending distance order
/// (ties: lower track id, then lower incoming index) whenever both ends are
/// still free. Unmatched lists keep their input order.
[[nodiscard]] Association associate(const std::vector<std::pair<TrackId, Point>>& existing,
                                    const std::vector<std::pair<std::size_t, Point>>& incoming,
                                    double max_distance);

class CentroidTracker {
 public:
  explicit CentroidTracker(TrackerConfig config = {});

  /// Advances the tracker by one frame. Throws std::invalid_argument when
  /// frame_index does not increase or a detection belongs to another frame.
  FrameUpdate update(std::int64_t frame_index, const std::vector<Detection>& detections);

  /// As above, with the frame's pixels. On non-detection frames the live
  /// tracks follow the image by correlation and `detections` is ignored.
  FrameUpdate update(std::int64_t frame_index, const std::vector<Detection>& detections,
                     const GrayFrame& pixels);

  /// Live tracks in registration order.
  [[nodiscard]] std::vector<Track> live_tracks() const { return live_; }

  /// Tracks that have been deregistered, in deregistration order.
  [[nodiscard]] const std::vector<Track>& retired_tracks() const noexcept { return retired_; }

  [[nodiscard]] const TrackerConfig& config() const noexcept { return config_; }

  [[nodiscard]] bool is_detection_frame(std::int64_t frame_index) const noexcept {
    return frame_index % config_.detection_interval == 0;
  }

 private:
  FrameUpdate step(std::int64_t frame_index, const std::vector<Detection>& detections,
                   const GrayFrame* pixels);
  void check_frame(std::int64_t frame_index, const std::vector<Detection>& detections) const;
  void detect_step(FrameUpdate& update, const std::vector<Detection>& detections);
  void correlate_step(FrameUpdate& update, const GrayFrame& pixels);

  TrackerConfig config_;
  std::vector<Track> live_;
  std::vector<Track> retired_;
  TrackId next_id_{0};
  std::optional<std::int64_t> last_frame_;
  std::optional<GrayFrame> last_pixels_;
};

}  // namespace cct
