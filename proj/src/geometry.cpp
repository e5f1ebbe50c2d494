#include "cct/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cct {

bool BoundingBox::valid() const noexcept {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
         std::isfinite(y2) && x1 <= x2 && y1 <= y2;
}

Point centroid(const BoundingBox& b) noexcept {
  return {(b.x1 + b.x2) / 2.0, (b.y1 + b.y2) / 2.0};
}

double euclidean(const Point& p, const Point& q) noexcept {
  return std::hypot(p.x - q.x, p.y - q.y);
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double area_a = a.area();
  const double area_b = b.area();
  if (area_a <= 0.0 || area_b <= 0.0) return 0.0;

  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;

  const double inter = iw * ih;
  const double uni = area_a + area_b - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

void validate(const Detection& d) {
  if (d.frame_index < 0) {
    throw std::invalid_argument("detection frame index is negative");
  }
  if (!d.bbox.valid()) {
    throw std::invalid_argument("detection box is not a valid corner box");
  }
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
    throw std::invalid_argument("detection confidence " +
                                std::to_string(d.confidence) +
                                " outside [0, 1]");
  }
  if (d.class_id < 0) {
    throw std::invalid_argument("detection class id is negative");
  }
}

}  // namespace cct
