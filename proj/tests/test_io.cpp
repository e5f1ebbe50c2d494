#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cct/io.hpp"
#include "doctest.h"

using cct::io::DataError;

namespace {

std::vector<cct::Detection> parse(const std::string& text) {
  std::istringstream in(text);
  return cct::io::read_detections(in, "dets.jsonl");
}

std::vector<cct::GroundTruthRecord> parse_gt(const std::string& text) {
  std::istringstream in(text);
  return cct::io::read_ground_truth(in, "gt.csv");
}

}  // namespace

TEST_CASE("detections ingest in order") {
  const auto d = parse(
      R"({"frame": 0, "bbox": [1, 2, 11, 22], "score": 0.9, "class": 0})"
      "\n"
      R"({"frame": 0, "bbox": [5.5, 6, 7, 8], "score": 0.25, "class": 3})"
      "\n"
      R"({"frame": 2, "bbox": [0, 0, 0, 0], "score": 1, "class": 0})"
      "\n");
  REQUIRE(d.size() == 3);
  CHECK(d[0] == cct::Detection{0, {1, 2, 11, 22}, 0.9, 0});
  CHECK(d[1] == cct::Detection{0, {5.5, 6, 7, 8}, 0.25, 3});
  CHECK(d[2].frame_index == 2);
  CHECK(d[2].confidence == 1.0);
}

TEST_CASE("empty and blank input is an empty stream") {
  CHECK(parse("").empty());
  CHECK(parse("\n  \n").empty());
}

TEST_CASE("bad detection records name line and field") {
  auto expect = [](const std::string& text, std::size_t line, const std::string& field) {
    try {
      (void)parse(text);
      FAIL("accepted: " << text);
    } catch (const DataError& e) {
      CHECK(e.line() == line);
      CHECK(e.field() == field);
      CHECK(std::string(e.what()).find("dets.jsonl:" + std::to_string(line)) == 0);
    }
  };
  const std::string ok = R"({"frame": 0, "bbox": [0, 0, 1, 1], "score": 0.5, "class": 0})";
  expect(ok + "\n" + R"({"frame": 0, "bbox": [0, 0, 1, 1], "score": 1.5, "class": 0})", 2,
         "score");
  expect(R"({"frame": -1, "bbox": [0, 0, 1, 1], "score": 0.5, "class": 0})", 1, "frame");
  expect(R"({"frame": 0, "bbox": [3, 0, 1, 1], "score": 0.5, "class": 0})", 1, "bbox");
  expect(R"({"frame": 0, "bbox": [0, 0, 1], "score": 0.5, "class": 0})", 1, "bbox");
  expect(R"({"frame": 0, "bbox": [0, 0, 1, 1], "score": 0.5})", 1, "class");
  expect(R"({"frame": 0.5, "bbox": [0, 0, 1, 1], "score": 0.5, "class": 0})", 1, "frame");
  expect("not json", 1, "");
  expect(R"({"frame": 3, "bbox": [0, 0, 1, 1], "score": 0.5, "class": 0})"
         "\n"
         R"({"frame": 1, "bbox": [0, 0, 1, 1], "score": 0.5, "class": 0})",
         2, "frame");
}

TEST_CASE("detections round-trip exactly") {
  const std::vector<cct::Detection> dets{
      {0, {0.1, 0.2, 10.30000000000001, 20.0000001}, 0.1 + 0.2, 0},
      {4, {1.0 / 3.0, 2.0 / 3.0, 100, 200}, 0.999999999999, 7},
  };
  std::ostringstream out;
  cct::io::write_detections(out, dets);
  CHECK(parse(out.str()) == dets);
}

TEST_CASE("format_real is the shortest round-trip form") {
  CHECK(cct::io::format_real(0.5) == "0.5");
  CHECK(cct::io::format_real(3.0) == "3");
  CHECK(cct::io::format_real(0.1 + 0.2) == "0.30000000000000004");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(cct::io::format_real(third)) == third);
}

TEST_CASE("ground truth") {
  const auto g = parse_gt("frame,object_id,x1,y1,x2,y2\n0,1,0,0,10,20\n0,2,5,5,6,6\n3,1,1.5,2,3,4\n");
  REQUIRE(g.size() == 3);
  CHECK(g[2] == cct::GroundTruthRecord{3, {1.5, 2, 3, 4}, 1});

  std::ostringstream out;
  cct::io::write_ground_truth(out, g);
  CHECK(parse_gt(out.str()) == g);

  CHECK_THROWS_AS(parse_gt("0,1,0,0,10,20\n"), DataError);
  CHECK_THROWS_AS(parse_gt(""), DataError);
  CHECK(parse_gt("frame,object_id,x1,y1,x2,y2\n").empty());
  CHECK_THROWS_AS(parse_gt("frame,object_id,x1,y1,x2,y2\n0,1,0,0,10,20\n0,1,1,1,5,5\n"),
                  DataError);
  CHECK_THROWS_AS(parse_gt("frame,object_id,x1,y1,x2,y2\n0,1,0,0,10\n"), DataError);
  CHECK_THROWS_AS(parse_gt("frame,object_id,x1,y1,x2,y2\n0,1,9,0,1,20\n"), DataError);
  CHECK_THROWS_AS(parse_gt("frame,object_id,x1,y1,x2,y2\n-2,1,0,0,1,1\n"), DataError);
}

TEST_CASE("config parsing") {
  const auto c = cct::io::parse_scenario_config(R"({"preset": "large", "seed": 12, "frame_count": 40})");
  CHECK(c.num_people == cct::ScenarioConfig::large().num_people);
  CHECK(c.seed == 12);
  CHECK(c.frame_count == 40);
  CHECK_THROWS_AS((void)cct::io::parse_scenario_config(R"({"num_peple": 3})"), DataError);
  CHECK_THROWS_AS((void)cct::io::parse_scenario_config(R"({"preset": "huge"})"), DataError);
  CHECK_THROWS_AS((void)cct::io::parse_scenario_config(R"({"miss_rate_base": 2})"), DataError);
  CHECK_THROWS_AS((void)cct::io::parse_scenario_config("[1]"), DataError);

  const auto t = cct::io::parse_tracker_config(R"({"max_distance": 12.5, "detection_interval": 3})");
  CHECK(t.max_distance == 12.5);
  CHECK(t.detection_interval == 3);
  CHECK(t.max_disappearance == cct::TrackerConfig{}.max_disappearance);
  CHECK_THROWS_AS((void)cct::io::parse_tracker_config(R"({"max_disappearance": 0})"), DataError);
}

TEST_CASE("threshold ranges") {
  const auto v = cct::io::parse_threshold_range("0.1:0.9:0.1");
  CHECK(v == cct::default_thresholds());
  CHECK(cct::io::parse_threshold_range("0:1:0.25") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(cct::io::parse_threshold_range("0.5:0.5:0.1") == std::vector<double>{0.5});
  CHECK_THROWS_AS((void)cct::io::parse_threshold_range("0.1:0.9"), std::invalid_argument);
  CHECK_THROWS_AS((void)cct::io::parse_threshold_range("0.1:0.9:0"), std::invalid_argument);
  CHECK_THROWS_AS((void)cct::io::parse_threshold_range("0.9:0.1:0.1"), std::invalid_argument);
  CHECK_THROWS_AS((void)cct::io::parse_threshold_range("a:b:c"), std::invalid_argument);
}

TEST_CASE("sweep csv and report json") {
  cct::MetricsReport r;
  r.threshold = 0.3;
  r.counts = {8, 2, 2, 0, 12};
  r.metrics = cct::metrics(r.counts);
  std::ostringstream csv;
  cct::io::write_sweep_csv(csv, {r});
  CHECK(csv.str() ==
        "threshold,tp,fp,fn,tn,precision,recall,accuracy\n"
        "0.3,8,2,2,0,0.8,0.8,0.6666666666666666\n");
  const std::string j = cct::io::report_json(r, 0.5);
  CHECK(j.find("\"tp\":8") != std::string::npos);
  CHECK(j.find("\"precision_degenerate\":false") != std::string::npos);
}

TEST_CASE("trajectories are grouped by track id") {
  cct::Track a;
  a.id = 2;
  a.history = {{0, {1, 2}}, {1, {1.5, 2}}};
  cct::Track b;
  b.id = 0;
  b.history = {{3, {4, 4}}};
  std::ostringstream out;
  cct::io::write_trajectories(out, {a, b});
  CHECK(out.str() == "track_id,frame,cx,cy\n0,3,4,4\n2,0,1,2\n2,1,1.5,2\n");
}
