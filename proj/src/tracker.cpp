#include "cct/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace cct {

void TrackerConfig::validate() const {
  if (max_disappearance < 1) {
    throw std::invalid_argument("max_disappearance must be a positive frame count");
  }
  if (!(max_distance > 0.0) || !std::isfinite(max_distance)) {
    throw std::invalid_argument("max_distance must be a positive finite distance");
  }
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw std::invalid_argument("confidence_threshold must lie in [0, 1]");
  }
  if (detection_interval < 1) {
    throw std::invalid_argument("detection_interval must be at least 1");
  }
  if (person_class < 0) throw std::invalid_argument("person_class must be non-negative");
  if (search_margin < 0) throw std::invalid_argument("search_margin must be non-negative");
}

Association associate(const std::vector<std::pair<TrackId, Point>>& existing,
                      const std::vector<std::pair<std::size_t, Point>>& incoming,
                      double max_distance) {
  struct Candidate {
    double distance;
    TrackId track;
    std::size_t index;
    std::size_t track_pos;
    std::size_t incoming_pos;
  };

  std::vector<Candidate> candidates;
  for (std::size_t t = 0; t < existing.size(); ++t) {
    for (std::size_t i = 0; i < incoming.size(); ++i) {
      const double d = euclidean(existing[t].second, incoming[i].second);
      if (d <= max_distance) {
        candidates.push_back({d, existing[t].first, incoming[i].first, t, i});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.distance, a.track, a.index) < std::tie(b.distance, b.track, b.index);
  });

  std::vector<bool> track_used(existing.size(), false);
  std::vector<bool> incoming_used(incoming.size(), false);
  Association result;
  for (const auto& c : candidates) {
    if (track_used[c.track_pos] || incoming_used[c.incoming_pos]) continue;
    track_used[c.track_pos] = true;
    incoming_used[c.incoming_pos] = true;
    result.matches.emplace_back(c.track, c.index);
  }
  for (std::size_t t = 0; t < existing.size(); ++t) {
    if (!track_used[t]) result.unmatched_tracks.push_back(existing[t].first);
  }
  for (std::size_t i = 0; i < incoming.size(); ++i) {
    if (!incoming_used[i]) result.unmatched_incoming.push_back(incoming[i].first);
  }
  return result;
}

CentroidTracker::CentroidTracker(TrackerConfig config) : config_(config) {
  config_.validate();
}

FrameUpdate CentroidTracker::update(std::int64_t frame_index,
                                    const std::vector<Detection>& detections) {
  return step(frame_index, detections, nullptr);
}

FrameUpdate CentroidTracker::update(std::int64_t frame_index,
                                    const std::vector<Detection>& detections,
                                    const GrayFrame& pixels) {
  return step(frame_index, detections, &pixels);
}

void CentroidTracker::check_frame(std::int64_t frame_index,
                                  const std::vector<Detection>& detections) const {
  if (frame_index < 0) throw std::invalid_argument("frame index must be non-negative");
  if (last_frame_ && frame_index <= *last_frame_) {
    throw std::invalid_argument("frame index " + std::to_string(frame_index) +
                                " does not follow previous frame " +
                                std::to_string(*last_frame_));
  }
  for (const auto& d : detections) {
    if (d.frame_index != frame_index) {
      throw std::invalid_argument("detection from frame " + std::to_string(d.frame_index) +
                                  " passed to update for frame " +
                                  std::to_string(frame_index));
    }
    validate(d);
  }
}

FrameUpdate CentroidTracker::step(std::int64_t frame_index,
                                  const std::vector<Detection>& detections,
                                  const GrayFrame* pixels) {
  check_frame(frame_index, detections);
  if (pixels != nullptr && last_pixels_ &&
      (pixels->width != last_pixels_->width || pixels->height != last_pixels_->height)) {
    throw std::invalid_argument("frame size changed between updates");
  }

  FrameUpdate update;
  update.frame_index = frame_index;
  const bool correlate = pixels != nullptr && last_pixels_ && !is_detection_frame(frame_index);
  if (correlate) {
    correlate_step(update, *pixels);
  } else {
    detect_step(update, detections);
  }

  last_frame_ = frame_index;
  if (pixels != nullptr) last_pixels_ = *pixels;
  return update;
}

void CentroidTracker::detect_step(FrameUpdate& update,
                                  const std::vector<Detection>& detections) {
  std::vector<const Detection*> kept;
  for (const auto& d : detections) {
    if (d.class_id == config_.person_class && d.confidence >= config_.confidence_threshold) {
      kept.push_back(&d);
    }
  }

  std::vector<std::pair<TrackId, Point>> existing;
  existing.reserve(live_.size());
  for (const auto& t : live_) existing.emplace_back(t.id, t.centroid);
  std::vector<std::pair<std::size_t, Point>> incoming;
  incoming.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) incoming.emplace_back(i, centroid(kept[i]->bbox));

  const Association assoc = associate(existing, incoming, config_.max_distance);

  auto find_live = [this](TrackId id) {
    return std::find_if(live_.begin(), live_.end(), [id](const Track& t) { return t.id == id; });
  };

  for (const auto& [id, index] : assoc.matches) {
    Track& track = *find_live(id);
    const Detection& d = *kept[index];
    track.bbox = d.bbox;
    track.centroid = centroid(d.bbox);
    track.disappeared = 0;
    track.history.push_back({update.frame_index, track.centroid});
    update.matched.emplace_back(id, d);
  }

  for (const TrackId id : assoc.unmatched_tracks) {
    Track& track = *find_live(id);
    ++track.disappeared;
    update.disappeared_incremented.push_back(id);
    if (track.disappeared > config_.max_disappearance) update.deregistered.push_back(id);
  }

  for (const std::size_t index : assoc.unmatched_incoming) {
    const Detection& d = *kept[index];
    Track track;
    track.id = next_id_++;
    track.bbox = d.bbox;
    track.centroid = centroid(d.bbox);
    track.history.push_back({update.frame_index, track.centroid});
    update.registered.push_back(track.id);
    live_.push_back(std::move(track));
  }

  if (!update.deregistered.empty()) {
    auto gone = std::stable_partition(live_.begin(), live_.end(), [this](const Track& t) {
      return t.disappeared <= config_.max_disappearance;
    });
    std::move(gone, live_.end(), std::back_inserter(retired_));
    live_.erase(gone, live_.end());
  }
}

void CentroidTracker::correlate_step(FrameUpdate& update, const GrayFrame& pixels) {
  const GrayFrame& prev = *last_pixels_;
  for (Track& track : live_) {
    const BoundingBox clipped{std::clamp(track.bbox.x1, 0.0, static_cast<double>(prev.width)),
                              std::clamp(track.bbox.y1, 0.0, static_cast<double>(prev.height)),
                              std::clamp(track.bbox.x2, 0.0, static_cast<double>(prev.width)),
                              std::clamp(track.bbox.y2, 0.0, static_cast<double>(prev.height))};
    const CorrelationResult r = correlate_track(prev, pixels, clipped, config_.search_margin);
    if (!r.degenerate) {
      track.bbox = track.bbox.translated(r.dx, r.dy);
      track.centroid = centroid(track.bbox);
    }
    track.history.push_back({update.frame_index, track.centroid});
    update.correlated.push_back({track.id, track.bbox, r.degenerate});
  }
}

}  // namespace cct
