#include "cct/ssd_geometry.hpp"

#include <stdexcept>

namespace cct::ssd {

std::vector<FeatureMapSpec> default_layer_specs() {
  // Conv11_2 is taken as a 1x1 grid, the one layout that keeps the total at
  // 8732.
  return {
      {"Conv4_3", 38, 38, 4},  {"Conv7", 19, 19, 6},   {"Conv8_2", 10, 10, 6},
      {"Conv9_2", 5, 5, 6},    {"Conv10_2", 3, 3, 4},  {"Conv11_2", 1, 1, 4},
  };
}

PriorBoxLayout default_layout() { return {default_layer_specs(), 300}; }

void validate(const FeatureMapSpec& spec) {
  if (spec.grid_w < 1 || spec.grid_h < 1 || spec.boxes_per_cell < 1) {
    throw std::invalid_argument("feature map '" + spec.name +
                                "' needs positive grid and box counts");
  }
}

std::int64_t prior_box_count(const std::vector<FeatureMapSpec>& specs) {
  std::int64_t total = 0;
  for (const auto& s : specs) {
    validate(s);
    total += s.prior_count();
  }
  return total;
}

std::vector<Point> generate_prior_centers(const FeatureMapSpec& spec) {
  validate(spec);
  std::vector<Point> centers;
  centers.reserve(static_cast<std::size_t>(spec.grid_w) * spec.grid_h);
  for (int j = 0; j < spec.grid_h; ++j) {
    for (int i = 0; i < spec.grid_w; ++i) {
      centers.push_back({(i + 0.5) / spec.grid_w, (j + 0.5) / spec.grid_h});
    }
  }
  return centers;
}

}  // namespace cct::ssd
