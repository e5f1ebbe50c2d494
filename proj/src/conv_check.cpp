#include "cct/conv_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cct::nn {

namespace {

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

CheckResult separable_matches_factorized(Rng& rng, int instances) {
  double worst = 0.0;
  for (int n = 0; n < instances; ++n) {
    const int h = uniform_int(rng, 3, 8);
    const int w = uniform_int(rng, 3, 8);
    const int c = uniform_int(rng, 1, 4);
    const int out_c = uniform_int(rng, 1, 4);
    const int k = std::min(2 * uniform_int(rng, 0, 2) + 1, (std::min(h, w) - 1) | 1);
    const int stride = uniform_int(rng, 1, 2);
    const int padding = uniform_int(rng, 0, k / 2);

    const Tensor3 x = random_tensor(rng, h, w, c);
    const DepthwiseKernels dw = random_depthwise(rng, c, k);
    const Matrix mix = random_matrix(rng, out_c, c);

    const Tensor3 separable = depthwise_separable(x, dw, mix, stride, padding);
    const Tensor3 full =
        conv2d_full(x, factorized_weights(dw, mix), ConvSpec{k, stride, padding, c, out_c});
    worst = std::max(worst, max_abs_diff(separable, full));
  }
  std::ostringstream os;
  os << instances << " instances, max |diff| = " << worst;
  return {"separable == factorized full conv (tol 1e-9)", worst <= 1e-9, os.str()};
}

CheckResult mac_ratio(Rng& rng) {
  constexpr int k = 3;
  constexpr int out_c = 64;
  constexpr int in_c = 8;
  constexpr int size = 8;
  const Tensor3 x = random_tensor(rng, size, size, in_c);
  const DepthwiseKernels dw = random_depthwise(rng, in_c, k);
  const Matrix mix = random_matrix(rng, out_c, in_c);
  const ConvSpec spec{k, 1, 1, in_c, out_c};

  MacCounter full_counter;
  (void)conv2d_full(x, factorized_weights(dw, mix), spec, &full_counter);
  MacCounter dw_counter;
  const Tensor3 mid = depthwise_conv(x, dw, 1, 1, &dw_counter);
  MacCounter pw_counter;
  (void)pointwise_conv(mid, mix, &pw_counter);

  const std::uint64_t separable = dw_counter.macs + pw_counter.macs;
  // separable / full == 1/out_c + 1/k^2, cross-multiplied to stay in integers.
  const bool exact = separable * out_c * k * k == full_counter.macs * (k * k + out_c);
  const bool formula =
      full_counter.macs == mac_count({ConvKind::full, size, size, spec}) &&
      dw_counter.macs == mac_count({ConvKind::depthwise, size, size, spec}) &&
      pw_counter.macs == mac_count({ConvKind::pointwise, size, size, spec});

  std::ostringstream os;
  os.precision(6);
  os << "full " << full_counter.macs << ", depthwise " << dw_counter.macs << ", pointwise "
     << pw_counter.macs << ", ratio " << static_cast<double>(separable) / full_counter.macs
     << " (1/64 + 1/9 = " << 1.0 / 64 + 1.0 / 9 << ")";
  return {"MAC ratio == 1/out_c + 1/k^2 (k=3, out_c=64)", exact && formula, os.str()};
}

CheckResult depthwise_channel_independence(Rng& rng, int instances) {
  bool ok = true;
  for (int n = 0; n < instances && ok; ++n) {
    const int c = uniform_int(rng, 2, 4);
    const Tensor3 x = random_tensor(rng, 6, 6, c);
    const DepthwiseKernels dw = random_depthwise(rng, c, 3);
    const Tensor3 base = depthwise_conv(x, dw, 1, 1);

    const int target = uniform_int(rng, 0, c - 1);
    Tensor3 perturbed = x;
    for (int y = 0; y < x.height; ++y) {
      for (int xx = 0; xx < x.width; ++xx) {
        for (int ch = 0; ch < c; ++ch) {
          if (ch != target) perturbed.at(y, xx, ch) += rng.uniform(-5.0, 5.0);
        }
      }
    }
    const Tensor3 moved = depthwise_conv(perturbed, dw, 1, 1);
    for (int y = 0; y < base.height && ok; ++y) {
      for (int xx = 0; xx < base.width && ok; ++xx) {
        ok = base.at(y, xx, target) == moved.at(y, xx, target);
      }
    }
  }
  return {"depthwise output channel ignores other input channels", ok, ""};
}

CheckResult batchnorm_relu_laws(Rng& rng, int instances) {
  bool ok = true;
  for (int n = 0; n < instances && ok; ++n) {
    const int c = uniform_int(rng, 1, 4);
    const Tensor3 x = random_tensor(rng, 4, 4, c);
    ok = batchnorm(x, BatchNormParams::identity(c)) == x;
    const Tensor3 r = relu(x);
    ok = ok && relu(r) == r;
    Tensor3 bigger = x;
    for (auto& v : bigger.data) v += rng.uniform(0.0, 1.0);
    const Tensor3 rb = relu(bigger);
    for (std::size_t i = 0; i < r.data.size() && ok; ++i) ok = rb.data[i] >= r.data[i];
  }
  return {"batchnorm identity, relu idempotent and monotone", ok, ""};
}

CheckResult inverted_residual_identity(Rng& rng, int instances) {
  bool ok = true;
  for (int n = 0; n < instances && ok; ++n) {
    const int c = uniform_int(rng, 1, 4);
    const int t = uniform_int(rng, 1, 6);
    const Tensor3 x = random_tensor(rng, uniform_int(rng, 2, 8), uniform_int(rng, 2, 8), c);
    ok = inverted_residual(x, t, InvertedResidualWeights::zeros(c, t, c), 1) == x;
  }
  return {"inverted residual with zero weights is the identity", ok, ""};
}

}  // namespace

Tensor3 random_tensor(Rng& rng, int h, int w, int c) {
  Tensor3 t(h, w, c);
  for (auto& v : t.data) v = rng.uniform(-1.0, 1.0);
  return t;
}

DepthwiseKernels random_depthwise(Rng& rng, int c, int k) {
  DepthwiseKernels d(c, k);
  for (auto& v : d.data) v = rng.uniform(-1.0, 1.0);
  return d;
}

Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (auto& v : m.data) v = rng.uniform(-1.0, 1.0);
  return m;
}

double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  if (a.height != b.height || a.width != b.width || a.channels != b.channels) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  }
  return worst;
}

std::vector<CheckResult> run_conv_checks(std::uint64_t seed, int instances) {
  Rng rng(seed);
  std::vector<CheckResult> results;
  results.push_back(separable_matches_factorized(rng, instances));
  results.push_back(mac_ratio(rng));
  results.push_back(depthwise_channel_independence(rng, instances));
  results.push_back(batchnorm_relu_laws(rng, instances));
  results.push_back(inverted_residual_identity(rng, instances));
  return results;
}

}  // namespace cct::nn
