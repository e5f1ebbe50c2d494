#include "cct/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cct/rng.hpp"

namespace cct {

namespace {

constexpr std::uint8_t kBackground = 40;

struct Walker {
  double x{0.0};
  double y{0.0};
  double heading{0.0};
};

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

bool probability(double p) { return p >= 0.0 && p <= 1.0; }

// Reflects a coordinate into [0, limit]. Returns true when it bounced.
bool reflect(double& v, double limit) {
  if (v < 0.0) {
    v = -v;
  } else if (v > limit) {
    v = 2.0 * limit - v;
  } else {
    return false;
  }
  v = std::clamp(v, 0.0, limit);
  return true;
}

std::uint8_t texture(std::uint64_t seed, std::int64_t object_id, int u, int v) {
  const std::uint64_t key = mix64(seed ^ mix64(static_cast<std::uint64_t>(object_id) + 1)) ^
                            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) ^
                            static_cast<std::uint32_t>(v);
  return static_cast<std::uint8_t>(70 + mix64(key) % 180);
}

}  // namespace

CrowdSize classify_crowd(int num_people) noexcept {
  if (num_people <= 0) return CrowdSize::empty;
  if (num_people < 5) return CrowdSize::small;
  if (num_people < 10) return CrowdSize::medium;
  return CrowdSize::large;
}

const char* to_string(CrowdSize size) noexcept {
  switch (size) {
    case CrowdSize::empty:
      return "empty";
    case CrowdSize::small:
      return "small";
    case CrowdSize::medium:
      return "medium";
    case CrowdSize::large:
      return "large";
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  require(num_people >= 0, "num_people must be non-negative");
  require(frame_count >= 1, "frame_count must be positive");
  require(image_width >= 1 && image_height >= 1, "image size must be positive");
  require(person_width > 0.0 && person_height > 0.0, "person box size must be positive");
  require(person_width <= image_width && person_height <= image_height,
          "person box must fit inside the image");
  require(speed_min >= 0.0 && speed_max >= speed_min, "speed range must satisfy 0 <= min <= max");
  require(speed_max <= std::min(image_width - person_width, image_height - person_height) ||
              speed_max == 0.0,
          "speed_max must not exceed the free space around a person box");
  require(turn_stddev >= 0.0, "turn_stddev must be non-negative");
  require(probability(miss_rate_base), "miss_rate_base must lie in [0, 1]");
  require(false_positive_rate >= 0.0 && false_positive_rate <= 100.0,
          "false_positive_rate must lie in [0, 100]");
  require(jitter >= 0.0, "jitter must be non-negative");
  require(probability(confidence_mean), "confidence_mean must lie in [0, 1]");
  require(confidence_stddev >= 0.0, "confidence_stddev must be non-negative");
  require(crowd_radius >= 0.0, "crowd_radius must be non-negative");
  require(crowd_miss_per_neighbor >= 0.0, "crowd_miss_per_neighbor must be non-negative");
  require(crowd_confidence_drop >= 0.0, "crowd_confidence_drop must be non-negative");
  require(probability(clutter_confidence_mean), "clutter_confidence_mean must lie in [0, 1]");
  require(clutter_confidence_stddev >= 0.0, "clutter_confidence_stddev must be non-negative");
  require(person_class >= 0, "person_class must be non-negative");
}

ScenarioConfig ScenarioConfig::small(std::uint64_t seed) {
  ScenarioConfig c;
  c.num_people = 3;
  c.miss_rate_base = 0.0;
  c.false_positive_rate = 0.05;
  c.confidence_mean = 0.95;
  c.confidence_stddev = 0.03;
  c.seed = seed;
  return c;
}

ScenarioConfig ScenarioConfig::medium(std::uint64_t seed) {
  ScenarioConfig c;
  c.num_people = 7;
  c.miss_rate_base = 0.03;
  c.false_positive_rate = 0.1;
  c.confidence_mean = 0.88;
  c.confidence_stddev = 0.04;
  c.seed = seed;
  return c;
}

ScenarioConfig ScenarioConfig::large(std::uint64_t seed) {
  // Mean and spread keep uncrowded scores more than 5 sigma below 0.9.
  ScenarioConfig c;
  c.num_people = 15;
  c.miss_rate_base = 0.05;
  c.false_positive_rate = 0.2;
  c.confidence_mean = 0.68;
  c.confidence_stddev = 0.04;
  c.seed = seed;
  return c;
}

ScenarioConfig ScenarioConfig::noiseless(std::uint64_t seed) {
  ScenarioConfig c;
  c.num_people = 3;
  c.miss_rate_base = 0.0;
  c.false_positive_rate = 0.0;
  c.jitter = 0.0;
  c.confidence_mean = 1.0;
  c.confidence_stddev = 0.0;
  c.crowd_miss_per_neighbor = 0.0;
  c.crowd_confidence_drop = 0.0;
  c.seed = seed;
  return c;
}

Scenario generate(const ScenarioConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const double w = config.person_width;
  const double h = config.person_height;
  const double free_x = config.image_width - w;
  const double free_y = config.image_height - h;
  const double width = config.image_width;
  const double height = config.image_height;

  Scenario out;
  out.frame_count = config.frame_count;

  std::vector<Walker> walkers(static_cast<std::size_t>(config.num_people));
  for (auto& p : walkers) {
    p.x = rng.uniform(0.0, free_x);
    p.y = rng.uniform(0.0, free_y);
    p.heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  std::vector<BoundingBox> boxes(walkers.size());
  for (int f = 0; f < config.frame_count; ++f) {
    if (f > 0) {
      for (auto& p : walkers) {
        p.heading += rng.normal(0.0, config.turn_stddev);
        const double speed = rng.uniform(config.speed_min, config.speed_max);
        p.x += speed * std::cos(p.heading);
        p.y += speed * std::sin(p.heading);
        if (reflect(p.x, free_x)) p.heading = std::numbers::pi - p.heading;
        if (reflect(p.y, free_y)) p.heading = -p.heading;
      }
    }

    for (std::size_t i = 0; i < walkers.size(); ++i) {
      boxes[i] = BoundingBox::from_xywh(walkers[i].x, walkers[i].y, w, h);
      out.ground_truth.push_back({f, boxes[i], static_cast<std::int64_t>(i)});
    }

    for (std::size_t i = 0; i < walkers.size(); ++i) {
      const Point c = centroid(boxes[i]);
      int neighbors = 0;
      for (std::size_t j = 0; j < walkers.size(); ++j) {
        if (j != i && euclidean(c, centroid(boxes[j])) <= config.crowd_radius) ++neighbors;
      }

      const double miss_rate =
          std::min(1.0, config.miss_rate_base + config.crowd_miss_per_neighbor * neighbors);
      const bool missed = rng.uniform() < miss_rate;
      const double jx1 = rng.normal(0.0, config.jitter);
      const double jy1 = rng.normal(0.0, config.jitter);
      const double jx2 = rng.normal(0.0, config.jitter);
      const double jy2 = rng.normal(0.0, config.jitter);
      const double score = std::clamp(
          rng.normal(config.confidence_mean - config.crowd_confidence_drop * neighbors,
                     config.confidence_stddev),
          0.0, 1.0);
      if (missed) continue;

      BoundingBox b{std::clamp(boxes[i].x1 + jx1, 0.0, width),
                    std::clamp(boxes[i].y1 + jy1, 0.0, height),
                    std::clamp(boxes[i].x2 + jx2, 0.0, width),
                    std::clamp(boxes[i].y2 + jy2, 0.0, height)};
      if (b.x1 > b.x2) std::swap(b.x1, b.x2);
      if (b.y1 > b.y2) std::swap(b.y1, b.y2);
      out.detections.push_back({f, b, score, config.person_class});
    }

    const int clutter = rng.poisson(config.false_positive_rate);
    for (int k = 0; k < clutter; ++k) {
      const double x = rng.uniform(0.0, free_x);
      const double y = rng.uniform(0.0, free_y);
      const double score = std::clamp(
          rng.normal(config.clutter_confidence_mean, config.clutter_confidence_stddev), 0.0, 1.0);
      out.detections.push_back({f, BoundingBox::from_xywh(x, y, w, h), score, config.person_class});
    }
  }
  return out;
}

std::vector<GrayFrame> render_frames(const Scenario& scenario, const ScenarioConfig& config) {
  std::vector<GrayFrame> frames(static_cast<std::size_t>(scenario.frame_count),
                                GrayFrame(config.image_width, config.image_height, kBackground));
  for (const auto& g : scenario.ground_truth) {
    if (g.frame_index < 0 || g.frame_index >= scenario.frame_count) continue;
    GrayFrame& frame = frames[static_cast<std::size_t>(g.frame_index)];
    const int x0 = static_cast<int>(std::lround(g.bbox.x1));
    const int y0 = static_cast<int>(std::lround(g.bbox.y1));
    const int x1 = static_cast<int>(std::lround(g.bbox.x2));
    const int y1 = static_cast<int>(std::lround(g.bbox.y2));
    for (int y = std::max(y0, 0); y < std::min(y1, frame.height); ++y) {
      for (int x = std::max(x0, 0); x < std::min(x1, frame.width); ++x) {
        frame.at(x, y) = texture(config.seed, g.object_id, x - x0, y - y0);
      }
    }
  }
  return frames;
}

EvaluationSet to_evaluation_set(const Scenario& scenario) {
  return {scenario.detections, scenario.ground_truth, scenario.frame_count};
}

}  // namespace cct
