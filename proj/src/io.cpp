#include "cct/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace cct::io {

using json = nlohmann::ordered_json;

namespace {

std::string describe(const std::string& source, std::size_t line, const std::string& field,
                     const std::string& message) {
  std::string s = source;
  if (line > 0) s += ":" + std::to_string(line);
  s += ": ";
  if (!field.empty()) s += "field '" + field + "': ";
  return s + message;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string(), 0, "", "cannot open file");
  return in;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_real(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_int(const std::string& text, std::int64_t& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::int64_t json_int(const json& j, const std::string& source, std::size_t line,
                      const char* field, std::int64_t min_value) {
  if (!j.is_number_integer()) throw DataError(source, line, field, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < min_value) {
    throw DataError(source, line, field, "must be at least " + std::to_string(min_value));
  }
  return v;
}

double json_real(const json& j, const std::string& source, std::size_t line,
                 const char* field) {
  if (!j.is_number()) throw DataError(source, line, field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DataError(source, line, field, "must be finite");
  return v;
}

json bbox_json(const BoundingBox& b) { return json::array({b.x1, b.y1, b.x2, b.y2}); }

json parse_object(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(source, 0, "", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError(source, 0, "", "expected a JSON object");
  return j;
}

using FieldSetter = std::function<void(const json&)>;

void apply_fields(const json& j, const std::string& source,
                  const std::map<std::string, FieldSetter, std::less<>>& setters,
                  std::initializer_list<std::string_view> skip = {}) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
    const auto it = setters.find(key);
    if (it == setters.end()) throw DataError(source, 0, key, "unknown configuration key");
    it->second(value);
  }
}

}  // namespace

DataError::DataError(std::string source, std::size_t line, std::string field,
                     const std::string& message)
    : std::runtime_error(describe(source, line, field, message)),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)) {}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::vector<Detection> read_detections(std::istream& in, const std::string& source) {
  std::vector<Detection> out;
  std::string line;
  std::size_t line_no = 0;
  std::int64_t last_frame = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw DataError(source, line_no, "", "line is not valid JSON");
    }
    if (!j.is_object()) throw DataError(source, line_no, "", "expected a JSON object");
    for (const char* key : {"frame", "bbox", "score", "class"}) {
      if (!j.contains(key)) throw DataError(source, line_no, key, "missing");
    }

    Detection d;
    d.frame_index = json_int(j["frame"], source, line_no, "frame", 0);
    const json& box = j["bbox"];
    if (!box.is_array() || box.size() != 4) {
      throw DataError(source, line_no, "bbox", "expected [x1, y1, x2, y2]");
    }
    d.bbox = {json_real(box[0], source, line_no, "bbox"), json_real(box[1], source, line_no, "bbox"),
              json_real(box[2], source, line_no, "bbox"), json_real(box[3], source, line_no, "bbox")};
    if (!d.bbox.valid()) {
      throw DataError(source, line_no, "bbox", "corners must satisfy x1 <= x2 and y1 <= y2");
    }
    d.confidence = json_real(j["score"], source, line_no, "score");
    if (d.confidence < 0.0 || d.confidence > 1.0) {
      throw DataError(source, line_no, "score", "must lie in [0, 1], got " + format_real(d.confidence));
    }
    d.class_id = json_int(j["class"], source, line_no, "class", 0);

    if (d.frame_index < last_frame) {
      throw DataError(source, line_no, "frame",
                      "frame " + std::to_string(d.frame_index) + " after frame " +
                          std::to_string(last_frame) + " (records must be sorted by frame)");
    }
    last_frame = d.frame_index;
    out.push_back(d);
  }
  return out;
}

std::vector<Detection> ingest_detections(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_detections(in, path.string());
}

void write_detections(std::ostream& out, const std::vector<Detection>& detections) {
  for (const auto& d : detections) {
    json j;
    j["frame"] = d.frame_index;
    j["bbox"] = bbox_json(d.bbox);
    j["score"] = d.confidence;
    j["class"] = d.class_id;
    out << j.dump() << '\n';
  }
}

std::vector<GroundTruthRecord> read_ground_truth(std::istream& in, const std::string& source) {
  static constexpr const char* kColumns[] = {"frame", "object_id", "x1", "y1", "x2", "y2"};
  std::vector<GroundTruthRecord> out;
  std::set<std::pair<std::int64_t, std::int64_t>> keys;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;

    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();

    if (!header_seen) {
      bool ok = cells.size() == 6;
      for (std::size_t i = 0; ok && i < 6; ++i) ok = cells[i] == kColumns[i];
      if (!ok) {
        throw DataError(source, line_no, "header", "expected frame,object_id,x1,y1,x2,y2");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 6) {
      throw DataError(source, line_no, "", "expected 6 columns, found " +
                                               std::to_string(cells.size()));
    }

    GroundTruthRecord r;
    if (!parse_int(cells[0], r.frame_index) || r.frame_index < 0) {
      throw DataError(source, line_no, "frame", "expected a non-negative integer");
    }
    if (!parse_int(cells[1], r.object_id) || r.object_id < 0) {
      throw DataError(source, line_no, "object_id", "expected a non-negative integer");
    }
    double* coords[] = {&r.bbox.x1, &r.bbox.y1, &r.bbox.x2, &r.bbox.y2};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!parse_real(cells[2 + i], *coords[i])) {
        throw DataError(source, line_no, kColumns[2 + i], "expected a finite number");
      }
    }
    if (!r.bbox.valid()) {
      throw DataError(source, line_no, "x1", "corners must satisfy x1 <= x2 and y1 <= y2");
    }
    if (!keys.emplace(r.frame_index, r.object_id).second) {
      throw DataError(source, line_no, "object_id",
                      "duplicate (frame, object_id) = (" + cells[0] + ", " + cells[1] + ")");
    }
    out.push_back(r);
  }
  if (!header_seen) throw DataError(source, 0, "header", "missing CSV header");
  return out;
}

std::vector<GroundTruthRecord> ingest_ground_truth(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_ground_truth(in, path.string());
}

void write_ground_truth(std::ostream& out, const std::vector<GroundTruthRecord>& records) {
  out << "frame,object_id,x1,y1,x2,y2\n";
  for (const auto& r : records) {
    out << r.frame_index << ',' << r.object_id << ',' << format_real(r.bbox.x1) << ','
        << format_real(r.bbox.y1) << ',' << format_real(r.bbox.x2) << ','
        << format_real(r.bbox.y2) << '\n';
  }
}

std::string read_text(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig parse_scenario_config(const std::string& json_text, const std::string& source) {
  const json j = parse_object(json_text, source);
  ScenarioConfig c;
  if (j.contains("preset")) {
    const json& p = j["preset"];
    const std::string name = p.is_string() ? p.get<std::string>() : "";
    if (name == "small") {
      c = ScenarioConfig::small();
    } else if (name == "medium") {
      c = ScenarioConfig::medium();
    } else if (name == "large") {
      c = ScenarioConfig::large();
    } else if (name == "noiseless") {
      c = ScenarioConfig::noiseless();
    } else {
      throw DataError(source, 0, "preset", "expected small, medium, large or noiseless");
    }
  }

  auto integer = [&source](int& dst, const char* key) {
    return FieldSetter([&dst, &source, key](const json& v) {
      dst = static_cast<int>(json_int(v, source, 0, key, std::numeric_limits<int>::min()));
    });
  };
  auto real = [&source](double& dst, const char* key) {
    return FieldSetter([&dst, &source, key](const json& v) { dst = json_real(v, source, 0, key); });
  };

  const std::map<std::string, FieldSetter, std::less<>> setters = {
      {"num_people", integer(c.num_people, "num_people")},
      {"frame_count", integer(c.frame_count, "frame_count")},
      {"image_width", integer(c.image_width, "image_width")},
      {"image_height", integer(c.image_height, "image_height")},
      {"speed_min", real(c.speed_min, "speed_min")},
      {"speed_max", real(c.speed_max, "speed_max")},
      {"turn_stddev", real(c.turn_stddev, "turn_stddev")},
      {"person_width", real(c.person_width, "person_width")},
      {"person_height", real(c.person_height, "person_height")},
      {"miss_rate_base", real(c.miss_rate_base, "miss_rate_base")},
      {"false_positive_rate", real(c.false_positive_rate, "false_positive_rate")},
      {"jitter", real(c.jitter, "jitter")},
      {"confidence_mean", real(c.confidence_mean, "confidence_mean")},
      {"confidence_stddev", real(c.confidence_stddev, "confidence_stddev")},
      {"crowd_radius", real(c.crowd_radius, "crowd_radius")},
      {"crowd_miss_per_neighbor", real(c.crowd_miss_per_neighbor, "crowd_miss_per_neighbor")},
      {"crowd_confidence_drop", real(c.crowd_confidence_drop, "crowd_confidence_drop")},
      {"clutter_confidence_mean", real(c.clutter_confidence_mean, "clutter_confidence_mean")},
      {"clutter_confidence_stddev",
       real(c.clutter_confidence_stddev, "clutter_confidence_stddev")},
      {"person_class",
       [&](const json& v) { c.person_class = json_int(v, source, 0, "person_class", 0); }},
      {"seed",
       [&](const json& v) {
         if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
           throw DataError(source, 0, "seed", "expected a non-negative integer");
         }
         c.seed = v.get<std::uint64_t>();
       }},
  };
  apply_fields(j, source, setters, {"preset"});

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(source, 0, "", e.what());
  }
  return c;
}

TrackerConfig parse_tracker_config(const std::string& json_text, const std::string& source) {
  const json j = parse_object(json_text, source);
  TrackerConfig c;
  const std::map<std::string, FieldSetter, std::less<>> setters = {
      {"max_disappearance",
       [&](const json& v) {
         c.max_disappearance = static_cast<int>(json_int(v, source, 0, "max_disappearance", 1));
       }},
      {"max_distance",
       [&](const json& v) { c.max_distance = json_real(v, source, 0, "max_distance"); }},
      {"confidence_threshold",
       [&](const json& v) {
         c.confidence_threshold = json_real(v, source, 0, "confidence_threshold");
       }},
      {"detection_interval",
       [&](const json& v) {
         c.detection_interval = static_cast<int>(json_int(v, source, 0, "detection_interval", 1));
       }},
      {"person_class",
       [&](const json& v) { c.person_class = json_int(v, source, 0, "person_class", 0); }},
      {"search_margin",
       [&](const json& v) {
         c.search_margin = static_cast<int>(json_int(v, source, 0, "search_margin", 0));
       }},
  };
  apply_fields(j, source, setters);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(source, 0, "", e.what());
  }
  return c;
}

std::string frame_update_json(const FrameUpdate& u) {
  json j;
  j["frame"] = u.frame_index;
  json matched = json::array();
  for (const auto& [id, d] : u.matched) {
    matched.push_back(json{{"track_id", id}, {"bbox", bbox_json(d.bbox)}, {"score", d.confidence}});
  }
  j["matched"] = std::move(matched);
  json correlated = json::array();
  for (const auto& c : u.correlated) {
    correlated.push_back(
        json{{"track_id", c.track_id}, {"bbox", bbox_json(c.bbox)}, {"degenerate", c.degenerate}});
  }
  j["correlated"] = std::move(correlated);
  j["registered"] = u.registered;
  j["disappeared_incremented"] = u.disappeared_incremented;
  j["deregistered"] = u.deregistered;
  return j.dump();
}

void write_trajectories(std::ostream& out, const std::vector<Track>& tracks) {
  std::vector<const Track*> sorted;
  for (const auto& t : tracks) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(),
            [](const Track* a, const Track* b) { return a->id < b->id; });
  out << "track_id,frame,cx,cy\n";
  for (const Track* t : sorted) {
    for (const auto& p : t->history) {
      out << t->id << ',' << p.frame_index << ',' << format_real(p.centroid.x) << ','
          << format_real(p.centroid.y) << '\n';
    }
  }
}

std::string report_json(const MetricsReport& r, double iou_threshold) {
  json j;
  j["threshold"] = r.threshold;
  j["iou_threshold"] = iou_threshold;
  j["tp"] = r.counts.tp;
  j["fp"] = r.counts.fp;
  j["fn"] = r.counts.fn;
  j["tn"] = r.counts.tn;
  j["n"] = r.counts.n;
  j["precision"] = r.metrics.precision;
  j["recall"] = r.metrics.recall;
  j["accuracy"] = r.metrics.accuracy;
  j["precision_degenerate"] = r.metrics.precision_degenerate;
  j["recall_degenerate"] = r.metrics.recall_degenerate;
  j["accuracy_degenerate"] = r.metrics.accuracy_degenerate;
  return j.dump();
}

void write_sweep_csv(std::ostream& out, const std::vector<MetricsReport>& reports) {
  out << "threshold,tp,fp,fn,tn,precision,recall,accuracy\n";
  for (const auto& r : reports) {
    out << format_real(r.threshold) << ',' << r.counts.tp << ',' << r.counts.fp << ','
        << r.counts.fn << ',' << r.counts.tn << ',' << format_real(r.metrics.precision) << ','
        << format_real(r.metrics.recall) << ',' << format_real(r.metrics.accuracy) << '\n';
  }
}

std::vector<double> parse_threshold_range(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    throw std::invalid_argument("threshold range must be start:end:step, got '" + text + "'");
  }
  double start = 0.0;
  double end = 0.0;
  double step = 0.0;
  if (!parse_real(trim(text.substr(0, first)), start) ||
      !parse_real(trim(text.substr(first + 1, second - first - 1)), end) ||
      !parse_real(trim(text.substr(second + 1)), step)) {
    throw std::invalid_argument("threshold range '" + text + "' has a non-numeric part");
  }
  if (!(step > 0.0)) throw std::invalid_argument("threshold step must be positive");
  if (end < start) throw std::invalid_argument("threshold range end precedes start");

  const auto count = static_cast<std::int64_t>(std::floor((end - start) / step + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", start + static_cast<double>(i) * step);
    values.push_back(std::strtod(buf, nullptr));
  }
  return values;
}

}  // namespace cct::io
