#pragma once

// Independent brute-force references used by the test suites. Nothing here
// calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cct/conv_kernels.hpp"
#include "cct/geometry.hpp"

namespace oracle {

/// Per-channel 2D cross-correlation with explicit bounds checks (no padded
/// copy).
inline cct::nn::Tensor3 depthwise(const cct::nn::Tensor3& in, const cct::nn::DepthwiseKernels& k,
                                  int stride, int padding) {
  const int ks = k.kernel_size;
  const int oh = (in.height + 2 * padding - ks) / stride + 1;
  const int ow = (in.width + 2 * padding - ks) / stride + 1;
  cct::nn::Tensor3 out(oh, ow, in.channels);
  for (int c = 0; c < in.channels; ++c) {
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        double acc = 0.0;
        for (int dy = 0; dy < ks; ++dy) {
          for (int dx = 0; dx < ks; ++dx) {
            const int y = oy * stride + dy - padding;
            const int x = ox * stride + dx - padding;
            if (y < 0 || x < 0 || y >= in.height || x >= in.width) continue;
            acc += in.data[(static_cast<std::size_t>(y) * in.width + x) * in.channels + c] *
                   k.data[(static_cast<std::size_t>(c) * ks + dy) * ks + dx];
          }
        }
        out.data[(static_cast<std::size_t>(oy) * ow + ox) * in.channels + c] = acc;
      }
    }
  }
  return out;
}

/// Count of multiplies in a loop-nest convolution, by direct enumeration of
/// every output-element/tap pair.
inline std::uint64_t enumerate_taps(int out_h, int out_w, int k, int in_c, int out_c) {
  std::uint64_t n = 0;
  for (int y = 0; y < out_h; ++y)
    for (int x = 0; x < out_w; ++x)
      for (int o = 0; o < out_c; ++o)
        for (int t = 0; t < k * k; ++t)
          for (int i = 0; i < in_c; ++i) ++n;
  return n;
}

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (left pos, right pos)
  double cost{0.0};
};

/// All one-to-one partial matchings between `left` and `right` items whose
/// pairs satisfy `allowed`. Returns the maximum-cardinality matchings with
/// the minimum total cost (there may be several).
inline std::vector<Matching> best_matchings(
    std::size_t left, std::size_t right,
    const std::function<bool(std::size_t, std::size_t)>& allowed,
    const std::function<double(std::size_t, std::size_t)>& cost) {
  std::vector<Matching> best;
  std::size_t best_size = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<bool> used(right, false);
  Matching cur;

  std::function<void(std::size_t)> rec = [&](std::size_t l) {
    if (l == left) {
      const std::size_t size = cur.pairs.size();
      if (size > best_size || (size == best_size && cur.cost < best_cost - 1e-12)) {
        best_size = size;
        best_cost = cur.cost;
        best.assign(1, cur);
      } else if (size == best_size && std::abs(cur.cost - best_cost) <= 1e-12) {
        best.push_back(cur);
      }
      return;
    }
    rec(l + 1);  // leave l unmatched
    for (std::size_t r = 0; r < right; ++r) {
      if (used[r] || !allowed(l, r)) continue;
      used[r] = true;
      cur.pairs.emplace_back(l, r);
      cur.cost += cost(l, r);
      rec(l + 1);
      cur.cost -= cost(l, r);
      cur.pairs.pop_back();
      used[r] = false;
    }
  };
  rec(0);
  if (best.empty()) best.push_back({});
  return best;
}

/// Largest number of detection/ground-truth pairs with IoU >= threshold.
inline std::size_t max_true_positives(const std::vector<cct::BoundingBox>& dets,
                                      const std::vector<cct::BoundingBox>& gts, double thr) {
  const auto m = best_matchings(
      dets.size(), gts.size(),
      [&](std::size_t d, std::size_t g) { return cct::iou(dets[d], gts[g]) >= thr; },
      [](std::size_t, std::size_t) { return 0.0; });
  return m.front().pairs.size();
}

}  // namespace oracle
