#include "cct/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "cct/conv_check.hpp"
#include "cct/evaluation.hpp"
#include "cct/gray_frame.hpp"
#include "cct/io.hpp"
#include "cct/scenario.hpp"
#include "cct/ssd_geometry.hpp"
#include "cct/tracker.hpp"

namespace cct::cli {

namespace fs = std::filesystem;

namespace {

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::DataError(path.string(), 0, "", "cannot open file for writing");
  return out;
}

std::string frame_file_name(std::int64_t frame) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%05lld.pgm", static_cast<long long>(frame));
  return buf;
}

// frame_<index>.pgm files keyed by index; indices must run 0..n-1.
std::map<std::int64_t, fs::path> list_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw io::DataError(dir.string(), 0, "", "not a directory");
  static const std::regex pattern(R"(frame_(\d+)\.pgm)");
  std::map<std::int64_t, fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(name, m, pattern)) {
      frames.emplace(std::stoll(m[1].str()), entry.path());
    }
  }
  std::int64_t expected = 0;
  for (const auto& [index, path] : frames) {
    if (index != expected) {
      throw io::DataError(dir.string(), 0, "", "missing " + frame_file_name(expected));
    }
    ++expected;
  }
  return frames;
}

struct SynthArgs {
  std::string config;
  std::string out_dir;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const ScenarioConfig config = io::parse_scenario_config(io::read_text(a.config), a.config);
  const Scenario scenario = generate(config);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir / "frames");
  {
    auto f = open_output(dir / "detections.jsonl");
    io::write_detections(f, scenario.detections);
  }
  {
    auto f = open_output(dir / "groundtruth.csv");
    io::write_ground_truth(f, scenario.ground_truth);
  }
  const auto frames = render_frames(scenario, config);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    write_pgm(dir / "frames" / frame_file_name(static_cast<std::int64_t>(i)), frames[i]);
  }
  out << "scenario: " << to_string(classify_crowd(config.num_people)) << " crowd, "
      << config.num_people << " people, " << config.frame_count << " frames, "
      << scenario.detections.size() << " detections, " << scenario.ground_truth.size()
      << " ground-truth boxes\n";
  return kSuccess;
}

struct TrackArgs {
  std::string detections;
  std::string frames;
  std::string config;
  std::string out;
};

int cmd_track(const TrackArgs& a, std::ostream& out) {
  const TrackerConfig config = io::parse_tracker_config(io::read_text(a.config), a.config);
  const auto detections = io::ingest_detections(a.detections);
  std::map<std::int64_t, fs::path> frame_files;
  if (!a.frames.empty()) frame_files = list_frames(a.frames);

  std::int64_t frame_count = static_cast<std::int64_t>(frame_files.size());
  if (!detections.empty()) frame_count = std::max(frame_count, detections.back().frame_index + 1);

  const fs::path out_path(a.out);
  fs::path traj_path = out_path;
  traj_path.replace_extension(".trajectories.csv");
  auto updates_out = open_output(out_path);

  CentroidTracker tracker(config);
  auto next = detections.begin();
  for (std::int64_t f = 0; f < frame_count; ++f) {
    std::vector<Detection> frame_dets;
    while (next != detections.end() && next->frame_index == f) frame_dets.push_back(*next++);

    FrameUpdate update;
    if (const auto it = frame_files.find(f); it != frame_files.end()) {
      update = tracker.update(f, frame_dets, read_pgm(it->second));
    } else {
      update = tracker.update(f, frame_dets);
    }
    updates_out << io::frame_update_json(update) << '\n';
  }

  std::vector<Track> all = tracker.retired_tracks();
  const auto live = tracker.live_tracks();
  all.insert(all.end(), live.begin(), live.end());
  auto traj_out = open_output(traj_path);
  io::write_trajectories(traj_out, all);

  out << "tracked " << frame_count << " frames, " << all.size() << " tracks registered, "
      << live.size() << " live at end; trajectories in " << traj_path.string() << '\n';
  return kSuccess;
}

struct EvalArgs {
  std::string detections;
  std::string groundtruth;
  double threshold{0.5};
  double iou{0.5};
  std::string thresholds{"0.1:0.9:0.1"};
};

EvaluationSet load_set(const EvalArgs& a) {
  EvaluationSet set;
  set.detections = io::ingest_detections(a.detections);
  set.ground_truth = io::ingest_ground_truth(a.groundtruth);
  set.frame_count = implied_frame_count(set.detections, set.ground_truth);
  return set;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const EvaluationSet set = load_set(a);
  out << io::report_json(evaluate_report(set, a.threshold, a.iou), a.iou) << '\n';
  return kSuccess;
}

int cmd_sweep(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<double> thresholds;
  try {
    thresholds = io::parse_threshold_range(a.thresholds);
  } catch (const std::invalid_argument& e) {
    err << "error: --thresholds: " << e.what() << '\n';
    return kUsageError;
  }
  const EvaluationSet set = load_set(a);
  io::write_sweep_csv(out, threshold_sweep(set, thresholds, a.iou));
  return kSuccess;
}

int cmd_priorboxes(const std::string& layer, std::ostream& out, std::ostream& err) {
  const auto specs = ssd::default_layer_specs();
  std::vector<ssd::FeatureMapSpec> shown;
  for (const auto& s : specs) {
    if (layer.empty() || s.name == layer) shown.push_back(s);
  }
  if (shown.empty()) {
    err << "error: unknown layer '" << layer << "'\n";
    return kUsageError;
  }
  out << std::left << std::setw(10) << "layer" << std::setw(8) << "grid" << std::setw(7)
      << "boxes" << "priors\n";
  for (const auto& s : shown) {
    out << std::left << std::setw(10) << s.name << std::setw(8)
        << (std::to_string(s.grid_w) + "x" + std::to_string(s.grid_h)) << std::setw(7)
        << s.boxes_per_cell << s.prior_count() << '\n';
  }
  out << "total " << ssd::prior_box_count(specs) << '\n';
  return kSuccess;
}

int cmd_convcheck(std::uint64_t seed, int instances, std::ostream& out) {
  bool all = true;
  for (const auto& r : nn::run_conv_checks(seed, instances)) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) out << "  [" << r.detail << "]";
    out << '\n';
    all = all && r.passed;
  }
  return all ? kSuccess : kCheckFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Centroid and correlation tracking toolkit", "cct"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic crowd scenario");
  synth_cmd->add_option("--config", synth.config, "Scenario config (JSON)")->required();
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->required();

  TrackArgs track;
  auto* track_cmd = app.add_subcommand("track", "Run the tracker over a detection stream");
  track_cmd->add_option("--detections", track.detections, "Detections (JSONL)")->required();
  track_cmd->add_option("--frames", track.frames, "Directory of frame_NNNNN.pgm files");
  track_cmd->add_option("--config", track.config, "Tracker config (JSON)")->required();
  track_cmd->add_option("--out", track.out, "Frame update log (JSONL)")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate detections at one threshold");
  eval_cmd->add_option("--detections", eval.detections, "Detections (JSONL)")->required();
  eval_cmd->add_option("--groundtruth", eval.groundtruth, "Ground truth (CSV)")->required();
  eval_cmd->add_option("--threshold", eval.threshold, "Confidence threshold")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--iou", eval.iou, "IoU needed for a true positive")
      ->check(CLI::Range(0.0, 1.0));

  EvalArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate detections over a threshold range");
  sweep_cmd->add_option("--detections", sweep.detections, "Detections (JSONL)")->required();
  sweep_cmd->add_option("--groundtruth", sweep.groundtruth, "Ground truth (CSV)")->required();
  sweep_cmd->add_option("--thresholds", sweep.thresholds, "start:end:step (inclusive)");

  std::string layer;
  auto* prior_cmd = app.add_subcommand("priorboxes", "SSD prior-box counts per layer");
  prior_cmd->add_option("--layer", layer, "Show only this layer");

  std::uint64_t conv_seed = 0;
  int conv_instances = 100;
  auto* conv_cmd = app.add_subcommand("convcheck", "Run the convolution kernel property suites");
  conv_cmd->add_option("--seed", conv_seed, "Random seed");
  conv_cmd->add_option("--instances", conv_instances, "Random instances per property")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("cct");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << one_line(e.what()) << '\n';
    return kUsageError;
  }

  try {
    if (*synth_cmd) return cmd_synth(synth, out);
    if (*track_cmd) return cmd_track(track, out);
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*sweep_cmd) return cmd_sweep(sweep, out, err);
    if (*prior_cmd) return cmd_priorboxes(layer, out, err);
    if (*conv_cmd) return cmd_convcheck(conv_seed, conv_instances, out);
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace cct::cli
