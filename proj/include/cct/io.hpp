#pragma once

// File formats.
//
//   detections   JSON lines: {"frame": int, "bbox": [x1, y1, x2, y2],
//                "score": real in [0,1], "class": int}, sorted by frame.
//   ground truth CSV with header frame,object_id,x1,y1,x2,y2.
//   trajectories CSV with header track_id,frame,cx,cy.
//   sweep        CSV with header
//                threshold,tp,fp,fn,tn,precision,recall,accuracy.
//   reports      JSON object per MetricsReport.
//
// Reals are written in the shortest form that parses back to the same
// double, so files re-ingest without value change.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cct/evaluation.hpp"
#include "cct/geometry.hpp"
#include "cct/scenario.hpp"
#include "cct/tracker.hpp"

namespace cct::io {

/// Bad input data. `line` is 1-based, 0 when not tied to a line.
class DataError : public std::runtime_error {
 public:
  DataError(std::string source, std::size_t line, std::string field, const std::string& message);

  [[nodiscard]] const std::string& source() const noexcept { return source_; }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string field_;
};

[[nodiscard]] std::string format_real(double v);

[[nodiscard]] std::vector<Detection> read_detections(std::istream& in,
                                                     const std::string& source = "<stream>");
[[nodiscard]] std::vector<Detection> ingest_detections(const std::filesystem::path& path);
void write_detections(std::ostream& out, const std::vector<Detection>& detections);

[[nodiscard]] std::vector<GroundTruthRecord> read_ground_truth(
    std::istream& in, const std::string& source = "<stream>");
[[nodiscard]] std::vector<GroundTruthRecord> ingest_ground_truth(
    const std::filesystem::path& path);
void write_ground_truth(std::ostream& out, const std::vector<GroundTruthRecord>& records);

/// JSON object with any ScenarioConfig field, plus an optional "preset"
/// (small, medium, large, noiseless) applied before the other fields.
[[nodiscard]] ScenarioConfig parse_scenario_config(const std::string& json_text,
                                                   const std::string& source = "<config>");
[[nodiscard]] TrackerConfig parse_tracker_config(const std::string& json_text,
                                                 const std::string& source = "<config>");
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

[[nodiscard]] std::string frame_update_json(const FrameUpdate& update);
void write_trajectories(std::ostream& out, const std::vector<Track>& tracks);

[[nodiscard]] std::string report_json(const MetricsReport& report, double iou_threshold);
void write_sweep_csv(std::ostream& out, const std::vector<MetricsReport>& reports);

/// "start:end:step", both ends inclusive within 1e-9. Values are rounded to
/// 12 significant digits so 0.1:0.9:0.1 yields exactly 0.1, 0.2, ..., 0.9.
[[nodiscard]] std::vector<double> parse_threshold_range(const std::string& text);

}  // namespace cct::io
