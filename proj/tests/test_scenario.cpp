#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cct/correlation.hpp"
#include "cct/rng.hpp"
#include "cct/scenario.hpp"
#include "doctest.h"

using cct::ScenarioConfig;

TEST_CASE("rng bit stream is the standard mt19937_64") {
  // The standard fixes the 10000th output of a default-seeded engine.
  cct::Rng rng(5489);
  for (int i = 0; i < 9999; ++i) (void)rng.next_u64();
  CHECK(rng.next_u64() == 9981545732273789042ULL);
}

TEST_CASE("rng draws have the right moments") {
  cct::Rng rng(42);
  const int n = 200000;
  double su = 0;
  double sn = 0;
  double sn2 = 0;
  double sp = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal(3.0, 2.0);
    sn += z;
    sn2 += z * z;
    sp += rng.poisson(4.0);
  }
  CHECK(std::abs(su / n - 0.5) < 3 * std::sqrt(1.0 / 12 / n) + 1e-12);
  const double mean = sn / n;
  CHECK(std::abs(mean - 3.0) < 3 * 2.0 / std::sqrt(n));
  CHECK(std::abs(std::sqrt(sn2 / n - mean * mean) - 2.0) < 0.02);
  CHECK(std::abs(sp / n - 4.0) < 3 * std::sqrt(4.0 / n));
  CHECK(rng.poisson(0.0) == 0);
  CHECK(rng.normal(1.5, 0.0) == 1.5);
}

TEST_CASE("crowd size categories") {
  CHECK(cct::classify_crowd(0) == cct::CrowdSize::empty);
  CHECK(cct::classify_crowd(1) == cct::CrowdSize::small);
  CHECK(cct::classify_crowd(4) == cct::CrowdSize::small);
  CHECK(cct::classify_crowd(5) == cct::CrowdSize::medium);
  CHECK(cct::classify_crowd(9) == cct::CrowdSize::medium);
  CHECK(cct::classify_crowd(10) == cct::CrowdSize::large);
  CHECK(cct::classify_crowd(15) == cct::CrowdSize::large);
  CHECK(cct::classify_crowd(ScenarioConfig::small().num_people) == cct::CrowdSize::small);
  CHECK(cct::classify_crowd(ScenarioConfig::medium().num_people) == cct::CrowdSize::medium);
  CHECK(cct::classify_crowd(ScenarioConfig::large().num_people) == cct::CrowdSize::large);
}

TEST_CASE("config validation") {
  auto bad = [](auto mutate) {
    ScenarioConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](auto& c) { c.num_people = -1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& c) { c.frame_count = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& c) { c.miss_rate_base = 1.2; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& c) { c.person_width = 700; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& c) { c.speed_min = 4; }).validate(), std::invalid_argument);
  CHECK_NOTHROW(ScenarioConfig::noiseless().validate());
}

TEST_CASE("same seed, same scenario") {
  const auto a = cct::generate(ScenarioConfig::medium(9));
  const auto b = cct::generate(ScenarioConfig::medium(9));
  CHECK(a.ground_truth == b.ground_truth);
  CHECK(a.detections == b.detections);
  const auto c = cct::generate(ScenarioConfig::medium(10));
  CHECK_FALSE(a.detections == c.detections);
}

TEST_CASE("boxes stay inside the image") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto config = ScenarioConfig::large(seed);
    config.speed_max = 30;
    config.jitter = 10;
    const auto s = cct::generate(config);
    for (const auto& g : s.ground_truth) {
      REQUIRE(g.bbox.x1 >= 0);
      REQUIRE(g.bbox.y1 >= 0);
      REQUIRE(g.bbox.x2 <= config.image_width);
      REQUIRE(g.bbox.y2 <= config.image_height);
      REQUIRE(g.bbox.width() == doctest::Approx(config.person_width));
    }
    for (const auto& d : s.detections) {
      REQUIRE(d.bbox.valid());
      REQUIRE(d.bbox.x1 >= 0);
      REQUIRE(d.bbox.y1 >= 0);
      REQUIRE(d.bbox.x2 <= config.image_width);
      REQUIRE(d.bbox.y2 <= config.image_height);
      REQUIRE(d.confidence >= 0.0);
      REQUIRE(d.confidence <= 1.0);
    }
  }
}

TEST_CASE("an empty scene has only clutter") {
  auto config = ScenarioConfig::small(3);
  config.num_people = 0;
  config.false_positive_rate = 0.5;
  config.frame_count = 100;
  const auto s = cct::generate(config);
  CHECK(s.ground_truth.empty());
  CHECK_FALSE(s.detections.empty());
  const auto e = cct::evaluate(cct::to_evaluation_set(s), 0.0);
  CHECK(e.tp == 0);
  CHECK(e.fp == static_cast<std::int64_t>(s.detections.size()));
}

TEST_CASE("the noiseless scene reports ground truth exactly") {
  const auto config = ScenarioConfig::noiseless(4);
  const auto s = cct::generate(config);
  REQUIRE(s.detections.size() == s.ground_truth.size());
  for (std::size_t i = 0; i < s.detections.size(); ++i) {
    CHECK(s.detections[i].bbox == s.ground_truth[i].bbox);
    CHECK(s.detections[i].frame_index == s.ground_truth[i].frame_index);
    CHECK(s.detections[i].confidence == 1.0);
  }
  const auto thresholds = cct::default_thresholds();
  for (const auto& r : cct::threshold_sweep(cct::to_evaluation_set(s), thresholds)) {
    CHECK(r.metrics.precision == 1.0);
    CHECK(r.metrics.recall == 1.0);
    CHECK(r.metrics.accuracy == 1.0);
  }
}

TEST_CASE("detection count follows the miss rate") {
  auto config = ScenarioConfig::small(5);
  config.num_people = 3;
  config.frame_count = 1000;
  config.miss_rate_base = 0.2;
  config.crowd_miss_per_neighbor = 0.0;
  config.false_positive_rate = 0.0;
  const auto s = cct::generate(config);
  const double n = 3.0 * config.frame_count;
  const double mean = n * 0.8;
  const double sd = std::sqrt(n * 0.8 * 0.2);
  CHECK(std::abs(static_cast<double>(s.detections.size()) - mean) <= 3 * sd);
}

TEST_CASE("clutter count follows the false-positive rate") {
  auto config = ScenarioConfig::small(6);
  config.num_people = 0;
  config.frame_count = 2000;
  config.false_positive_rate = 0.3;
  const auto s = cct::generate(config);
  const double mean = 0.3 * config.frame_count;
  CHECK(std::abs(static_cast<double>(s.detections.size()) - mean) <= 3 * std::sqrt(mean));
}

TEST_CASE("crowding lowers scores and raises misses") {
  auto config = ScenarioConfig::noiseless(7);
  config.num_people = 5;
  config.frame_count = 20;
  config.crowd_radius = 10000;  // everyone neighbours everyone
  config.crowd_confidence_drop = 0.05;
  const auto s = cct::generate(config);
  REQUIRE(s.detections.size() == 100);
  for (const auto& d : s.detections) CHECK(d.confidence == doctest::Approx(0.8));

  config.crowd_miss_per_neighbor = 0.25;
  CHECK(cct::generate(config).detections.empty());
}

TEST_CASE("rendered frames") {
  SUBCASE("an empty scene is uniform") {
    auto config = ScenarioConfig::noiseless();
    config.num_people = 0;
    config.frame_count = 3;
    for (const auto& f : cct::render_frames(cct::generate(config), config)) {
      CHECK(f.width == config.image_width);
      CHECK(f.height == config.image_height);
      CHECK(std::all_of(f.pixels.begin(), f.pixels.end(),
                        [&](std::uint8_t p) { return p == f.pixels[0]; }));
    }
  }
  SUBCASE("a still scene renders identical frames") {
    auto config = ScenarioConfig::noiseless(2);
    config.speed_min = 0;
    config.speed_max = 0;
    config.frame_count = 4;
    const auto frames = cct::render_frames(cct::generate(config), config);
    for (const auto& f : frames) CHECK(f == frames[0]);
  }
  SUBCASE("integer motion moves the pixels by the same offset") {
    auto config = ScenarioConfig::noiseless(3);
    config.image_width = 200;
    config.image_height = 160;
    cct::Scenario s;
    s.frame_count = 8;
    for (int f = 0; f < 8; ++f) {
      s.ground_truth.push_back({f, cct::BoundingBox::from_xywh(20 + 3 * f, 30, 40, 100), 0});
    }
    const auto frames = cct::render_frames(s, config);
    for (int f = 0; f + 1 < 8; ++f) {
      const auto r = cct::correlate_track(frames[f], frames[f + 1], s.ground_truth[f].bbox, 8);
      CHECK(r.dx == 3);
      CHECK(r.dy == 0);
      CHECK(r.bbox == s.ground_truth[f + 1].bbox);
    }
  }
}
