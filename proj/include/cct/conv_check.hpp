#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cct/conv_kernels.hpp"
#include "cct/rng.hpp"

namespace cct::nn {

struct CheckResult {
  std::string name;
  bool passed{false};
  std::string detail;
};

/// Tensor with entries uniform in [-1, 1).
[[nodiscard]] Tensor3 random_tensor(Rng& rng, int h, int w, int c);
[[nodiscard]] DepthwiseKernels random_depthwise(Rng& rng, int c, int k);
[[nodiscard]] Matrix random_matrix(Rng& rng, int rows, int cols);

[[nodiscard]] double max_abs_diff(const Tensor3& a, const Tensor3& b);

/// Property suites behind `cct convcheck`. `instances` random cases are drawn
/// for each randomized property.
[[nodiscard]] std::vector<CheckResult> run_conv_checks(std::uint64_t seed, int instances = 100);

}  // namespace cct::nn
