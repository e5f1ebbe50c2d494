#include "cct/correlation.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace cct {

namespace {

constexpr double kTieTolerance = 1e-12;

struct PixelRect {
  int x0, y0, x1, y1;
  [[nodiscard]] int width() const noexcept { return x1 - x0; }
  [[nodiscard]] int height() const noexcept { return y1 - y0; }
};

}  // namespace

CorrelationResult correlate_track(const GrayFrame& prev, const GrayFrame& cur,
                                  const BoundingBox& bbox, int search_margin) {
  if (prev.width != cur.width || prev.height != cur.height) {
    throw std::invalid_argument("correlate_track: frames differ in size");
  }
  if (search_margin < 0) {
    throw std::invalid_argument("correlate_track: search margin must be non-negative");
  }
  if (!bbox.valid() || bbox.x1 < 0.0 || bbox.y1 < 0.0 || bbox.x2 > prev.width ||
      bbox.y2 > prev.height) {
    throw std::out_of_range("correlate_track: box lies outside the frame");
  }

  CorrelationResult result{bbox, 0, 0, 0.0, true};
  const PixelRect patch{static_cast<int>(std::lround(bbox.x1)),
                        static_cast<int>(std::lround(bbox.y1)),
                        static_cast<int>(std::lround(bbox.x2)),
                        static_cast<int>(std::lround(bbox.y2))};
  if (patch.width() < 1 || patch.height() < 1) return result;

  const std::int64_t n = static_cast<std::int64_t>(patch.width()) * patch.height();
  std::int64_t sum_a = 0;
  std::int64_t sum_aa = 0;
  for (int y = patch.y0; y < patch.y1; ++y) {
    for (int x = patch.x0; x < patch.x1; ++x) {
      const std::int64_t a = prev.at(x, y);
      sum_a += a;
      sum_aa += a * a;
    }
  }
  const std::int64_t var_a = n * sum_aa - sum_a * sum_a;
  if (var_a == 0) return result;

  bool found = false;
  double best = 0.0;
  int best_dx = 0;
  int best_dy = 0;
  for (int dy = -search_margin; dy <= search_margin; ++dy) {
    if (patch.y0 + dy < 0 || patch.y1 + dy > cur.height) continue;
    for (int dx = -search_margin; dx <= search_margin; ++dx) {
      if (patch.x0 + dx < 0 || patch.x1 + dx > cur.width) continue;

      std::int64_t sum_b = 0;
      std::int64_t sum_bb = 0;
      std::int64_t sum_ab = 0;
      for (int y = patch.y0; y < patch.y1; ++y) {
        for (int x = patch.x0; x < patch.x1; ++x) {
          const std::int64_t a = prev.at(x, y);
          const std::int64_t b = cur.at(x + dx, y + dy);
          sum_b += b;
          sum_bb += b * b;
          sum_ab += a * b;
        }
      }
      const std::int64_t var_b = n * sum_bb - sum_b * sum_b;
      if (var_b == 0) continue;
      const double num = static_cast<double>(n * sum_ab - sum_a * sum_b);
      const double score =
          num / std::sqrt(static_cast<double>(var_a) * static_cast<double>(var_b));

      const bool better =
          !found || score > best + kTieTolerance ||
          (score >= best - kTieTolerance &&
           dx * dx + dy * dy < best_dx * best_dx + best_dy * best_dy);
      if (better) {
        found = true;
        best = score;
        best_dx = dx;
        best_dy = dy;
      }
    }
  }
  if (!found) return result;

  result.bbox = bbox.translated(best_dx, best_dy);
  result.dx = best_dx;
  result.dy = best_dy;
  result.score = best;
  result.degenerate = false;
  return result;
}

}  // namespace cct
