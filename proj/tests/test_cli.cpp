#include <sstream>
#include <stdexcept>

#include "cct/io.hpp"
#include "cli_helpers.hpp"
#include "doctest.h"
#include "json.hpp"

using testing::read_file;
using testing::run_cli;
using testing::TempDir;
using testing::write_file;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("usage errors exit 1 with a one-line diagnostic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {}, {"bogus"}, {"eval"}, {"priorboxes", "--layer", "conv99"},
           {"eval", "--detections", "a", "--groundtruth", "b", "--threshold", "2"}}) {
    const auto r = run_cli(args);
    CHECK(r.code == 1);
    CHECK(lines(r.err).size() == 1);
  }
}

TEST_CASE("data errors exit 2") {
  TempDir dir;
  write_file(dir / "d.jsonl", R"({"frame": 0, "bbox": [0, 0, 1, 1], "score": 1.5, "class": 0})");
  write_file(dir / "g.csv", "frame,object_id,x1,y1,x2,y2\n");
  const auto r = run_cli({"eval", "--detections", dir / "d.jsonl", "--groundtruth", dir / "g.csv",
                          "--threshold", "0.5"});
  CHECK(r.code == 2);
  REQUIRE(lines(r.err).size() == 1);
  CHECK(r.err.find(":1: field 'score'") != std::string::npos);

  const auto missing = run_cli({"eval", "--detections", dir / "nope.jsonl", "--groundtruth",
                                dir / "g.csv", "--threshold", "0.5"});
  CHECK(missing.code == 2);
}

TEST_CASE("priorboxes") {
  const auto r = run_cli({"priorboxes"});
  CHECK(r.code == 0);
  CHECK(r.out.find("total 8732") != std::string::npos);
  const auto one = run_cli({"priorboxes", "--layer", "Conv4_3"});
  CHECK(one.code == 0);
  CHECK(one.out.find("5776") != std::string::npos);
}

TEST_CASE("convcheck") {
  const auto r = run_cli({"convcheck", "--seed", "3", "--instances", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("synth, track, eval and sweep") {
  TempDir dir;
  write_file(dir / "scene.json", R"({"preset": "medium", "seed": 5, "frame_count": 30})");
  const auto s = run_cli({"synth", "--config", dir / "scene.json", "--out-dir", dir / "out"});
  REQUIRE(s.code == 0);
  const std::string dets = dir / "out/detections.jsonl";
  const std::string gt = dir / "out/groundtruth.csv";
  CHECK(std::filesystem::exists(dir / "out/frames/frame_00029.pgm"));

  SUBCASE("same seed, same bytes") {
    const auto again =
        run_cli({"synth", "--config", dir / "scene.json", "--out-dir", dir / "again"});
    REQUIRE(again.code == 0);
    CHECK(read_file(dets) == read_file(dir / "again/detections.jsonl"));
    CHECK(read_file(gt) == read_file(dir / "again/groundtruth.csv"));
    CHECK(read_file(dir / "out/frames/frame_00010.pgm") ==
          read_file(dir / "again/frames/frame_00010.pgm"));
  }

  SUBCASE("eval agrees with the sweep row") {
    const auto sweep = run_cli({"sweep", "--detections", dets, "--groundtruth", gt});
    REQUIRE(sweep.code == 0);
    const auto rows = lines(sweep.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "threshold,tp,fp,fn,tn,precision,recall,accuracy");
    const auto eval = run_cli({"eval", "--detections", dets, "--groundtruth", gt, "--threshold",
                               "0.4"});
    REQUIRE(eval.code == 0);
    const auto j = nlohmann::json::parse(eval.out);
    std::ostringstream row;
    row << cct::io::format_real(j["threshold"].get<double>()) << ',' << j["tp"] << ','
        << j["fp"] << ',' << j["fn"] << ',' << j["tn"] << ','
        << cct::io::format_real(j["precision"].get<double>()) << ','
        << cct::io::format_real(j["recall"].get<double>()) << ','
        << cct::io::format_real(j["accuracy"].get<double>());
    CHECK(rows[4] == row.str());
  }

  SUBCASE("track writes one update per frame and the trajectories") {
    write_file(dir / "tracker.json", R"({"max_distance": 40, "detection_interval": 2})");
    const auto t = run_cli({"track", "--detections", dets, "--frames", dir / "out/frames",
                            "--config", dir / "tracker.json", "--out", dir / "updates.jsonl"});
    REQUIRE(t.code == 0);
    const auto updates = lines(read_file(dir / "updates.jsonl"));
    REQUIRE(updates.size() == 30);
    for (std::size_t f = 0; f < updates.size(); ++f) {
      const auto j = nlohmann::json::parse(updates[f]);
      CHECK(j["frame"] == f);
      if (f % 2 == 1) CHECK(j["matched"].empty());
    }
    const auto traj = lines(read_file(dir / "updates.trajectories.csv"));
    REQUIRE_FALSE(traj.empty());
    CHECK(traj[0] == "track_id,frame,cx,cy");
    CHECK(traj.size() > 30);
  }
}
