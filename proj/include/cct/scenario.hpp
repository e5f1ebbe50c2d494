#pragma once

// Seeded synthetic crowd scenes: ground-truth random walks, noisy scored
// detections and rendered grayscale frames.
//
// Motion. Each person keeps a heading that turns by N(0, turn_stddev) per
// frame and moves a speed drawn uniformly from [speed_min, speed_max]. Boxes
// reflect off the image borders and never leave the image.
//
// Detection. For person p in frame f, let k be the number of other people
// whose centroid lies within crowd_radius. The person is missed with
// probability min(1, miss_rate_base + crowd_miss_per_neighbor * k).
// Otherwise each box corner is jittered by N(0, jitter) (then clamped to the
// image) and the score is N(confidence_mean - crowd_confidence_drop * k,
// confidence_stddev) clamped to [0, 1].
//
// Clutter. Each frame receives Poisson(false_positive_rate) boxes of person
// size at uniform positions, scored N(clutter_confidence_mean,
// clutter_confidence_stddev) clamped to [0, 1].
//
// All draws come from one cct::Rng in a fixed order, so a config (seed
// included) determines the scenario exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "cct/evaluation.hpp"
#include "cct/geometry.hpp"
#include "cct/gray_frame.hpp"

namespace cct {

enum class CrowdSize { empty, small, medium, large };

/// small: fewer than 5 people, medium: fewer than 10, large: more than 10.
/// Exactly 10 has no category and is reported as large.
[[nodiscard]] CrowdSize classify_crowd(int num_people) noexcept;
[[nodiscard]] const char* to_string(CrowdSize size) noexcept;

struct ScenarioConfig {
  int num_people{3};
  int frame_count{300};
  int image_width{640};
  int image_height{480};
  double speed_min{0.5};
  double speed_max{3.0};
  double turn_stddev{0.3};
  double person_width{40.0};
  double person_height{100.0};

  double miss_rate_base{0.0};
  double false_positive_rate{0.05};
  double jitter{2.0};

  double confidence_mean{0.95};
  double confidence_stddev{0.03};
  double crowd_radius{100.0};
  double crowd_miss_per_neighbor{0.02};
  double crowd_confidence_drop{0.02};
  double clutter_confidence_mean{0.3};
  double clutter_confidence_stddev{0.08};

  std::int64_t person_class{0};
  std::uint64_t seed{0};

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Presets for the three crowd regimes and the noise-free scene.
  static ScenarioConfig small(std::uint64_t seed = 0);
  static ScenarioConfig medium(std::uint64_t seed = 0);
  static ScenarioConfig large(std::uint64_t seed = 0);
  /// No misses, no clutter, no jitter, every score 1.
  static ScenarioConfig noiseless(std::uint64_t seed = 0);
};

struct Scenario {
  /// Frame-major, person order within a frame.
  std::vector<GroundTruthRecord> ground_truth;
  /// Frame-major; within a frame true detections (person order) then clutter.
  std::vector<Detection> detections;
  std::int64_t frame_count{0};
};

[[nodiscard]] Scenario generate(const ScenarioConfig& config);

/// Flat background with each ground-truth person drawn as a textured block
/// at its rounded box. The texture is fixed to the person, so a person that
/// moves by an integer offset moves its pixels by exactly that offset.
[[nodiscard]] std::vector<GrayFrame> render_frames(const Scenario& scenario,
                                                   const ScenarioConfig& config);

[[nodiscard]] EvaluationSet to_evaluation_set(const Scenario& scenario);

}  // namespace cct
