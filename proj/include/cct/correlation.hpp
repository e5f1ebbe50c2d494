#pragma once

#include "cct/geometry.hpp"
#include "cct/gray_frame.hpp"

namespace cct {

struct CorrelationResult {
  BoundingBox bbox;
  int dx{0};
  int dy{0};
  /// Peak normalized cross-correlation in [-1, 1]; 0 when degenerate.
  double score{0.0};
  /// Set when the template had zero variance (or no candidate window could
  /// be scored); the input box is returned unchanged.
  bool degenerate{false};
};

/// Locates the patch under `bbox` in `prev` within `cur`, searching integer
/// offsets up to `search_margin` pixels per axis, and returns `bbox`
/// translated to the normalized cross-correlation peak.
///
/// The patch covers pixel columns [round(x1), round(x2)) and rows
/// [round(y1), round(y2)). Equal peaks resolve to the smallest offset, then
/// the smaller dy, then the smaller dx.
///
/// Throws std::out_of_range if `bbox` is not inside `prev`, and
/// std::invalid_argument if the frames differ in size or the margin is
/// negative.
[[nodiscard]] CorrelationResult correlate_track(const GrayFrame& prev, const GrayFrame& cur,
                                                const BoundingBox& bbox, int search_margin);

}  // namespace cct
