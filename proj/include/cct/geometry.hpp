#pragma once

#include <cstdint>

namespace cct {

/// 2D point in pixel coordinates.
struct Point {
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned box in corner form. (x1, y1) is the top-left corner.
/// Zero-area boxes are valid.
struct BoundingBox {
  double x1{0.0};
  double y1{0.0};
  double x2{0.0};
  double y2{0.0};

  [[nodiscard]] double width() const noexcept { return x2 - x1; }
  [[nodiscard]] double height() const noexcept { return y2 - y1; }
  [[nodiscard]] double area() const noexcept { return width() * height(); }

  /// True when all coordinates are finite and x1 <= x2, y1 <= y2.
  [[nodiscard]] bool valid() const noexcept;

  [[nodiscard]] BoundingBox translated(double dx, double dy) const noexcept {
    return {x1 + dx, y1 + dy, x2 + dx, y2 + dy};
  }

  /// Converts from (x, y, width, height) form.
  static BoundingBox from_xywh(double x, double y, double w, double h) noexcept {
    return {x, y, x + w, y + h};
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// A scored box emitted by a detector for one frame.
struct Detection {
  std::int64_t frame_index{0};
  BoundingBox bbox;
  double confidence{0.0};
  std::int64_t class_id{0};

  friend bool operator==(const Detection&, const Detection&) = default;
};

[[nodiscard]] Point centroid(const BoundingBox& b) noexcept;

[[nodiscard]] double euclidean(const Point& p, const Point& q) noexcept;

/// Intersection over union. Degenerate (zero-area) boxes overlap nothing.
[[nodiscard]] double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Throws std::invalid_argument if the detection breaks a record invariant.
void validate(const Detection& d);

}  // namespace cct
