#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cct/geometry.hpp"

namespace cct::ssd {

/// One SSD detection layer: a grid of cells, each predicting a fixed number
/// of prior boxes.
struct FeatureMapSpec {
  std::string name;
  int grid_w{1};
  int grid_h{1};
  int boxes_per_cell{1};

  [[nodiscard]] std::int64_t prior_count() const noexcept {
    return static_cast<std::int64_t>(grid_w) * grid_h * boxes_per_cell;
  }
};

struct PriorBoxLayout {
  std::vector<FeatureMapSpec> specs;
  int image_size{300};
};

/// The six SSD300 detection layers, Conv4_3 first.
[[nodiscard]] std::vector<FeatureMapSpec> default_layer_specs();

[[nodiscard]] PriorBoxLayout default_layout();

[[nodiscard]] std::int64_t prior_box_count(const std::vector<FeatureMapSpec>& specs);

/// Cell-midpoint centers normalized to [0,1]^2, row-major (row j, column i).
/// Each center stands for boxes_per_cell priors.
[[nodiscard]] std::vector<Point> generate_prior_centers(const FeatureMapSpec& spec);

void validate(const FeatureMapSpec& spec);

}  // namespace cct::ssd
