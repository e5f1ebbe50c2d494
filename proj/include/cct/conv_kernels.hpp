#pragma once

// Reference (unvectorized) kernels for the MobileNet building blocks.
//
// All convolutions are cross-correlations with zero padding. Tensors are
// stored row-major in (height, width, channel) order. Every kernel accepts an
// optional MacCounter that is bumped once per multiply actually executed,
// padded taps included, so counts can be checked against mac_count().

#include <cstdint>
#include <vector>

namespace cct::nn {

struct Tensor3 {
  int height{0};
  int width{0};
  int channels{0};
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(int h, int w, int c, double fill = 0.0);

  [[nodiscard]] std::size_t index(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  double& at(int y, int x, int c) noexcept { return data[index(y, x, c)]; }
  [[nodiscard]] double at(int y, int x, int c) const noexcept { return data[index(y, x, c)]; }

  [[nodiscard]] std::size_t size() const noexcept { return data.size(); }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;
};

struct OutputShape {
  int height{0};
  int width{0};
};

struct ConvSpec {
  int kernel_size{3};
  int stride{1};
  int padding{0};
  int in_channels{1};
  int out_channels{1};

  /// floor((in + 2*padding - kernel) / stride) + 1 per axis.
  [[nodiscard]] OutputShape output_shape(int in_height, int in_width) const;
};

/// Full convolution weights laid out [out_c][k][k][in_c].
struct FilterBank {
  int out_channels{0};
  int kernel_size{0};
  int in_channels{0};
  std::vector<double> data;

  FilterBank() = default;
  FilterBank(int out_c, int k, int in_c, double fill = 0.0);

  [[nodiscard]] std::size_t index(int o, int ky, int kx, int i) const noexcept {
    return ((static_cast<std::size_t>(o) * kernel_size + ky) * kernel_size + kx) *
               in_channels + i;
  }
  double& at(int o, int ky, int kx, int i) noexcept { return data[index(o, ky, kx, i)]; }
  [[nodiscard]] double at(int o, int ky, int kx, int i) const noexcept {
    return data[index(o, ky, kx, i)];
  }
};

/// One k x k kernel per channel, laid out [c][k][k].
struct DepthwiseKernels {
  int channels{0};
  int kernel_size{0};
  std::vector<double> data;

  DepthwiseKernels() = default;
  DepthwiseKernels(int c, int k, double fill = 0.0);

  /// Per-channel kernels with a single 1 at the center tap.
  static DepthwiseKernels delta(int c, int k);

  [[nodiscard]] std::size_t index(int c, int ky, int kx) const noexcept {
    return (static_cast<std::size_t>(c) * kernel_size + ky) * kernel_size + kx;
  }
  double& at(int c, int ky, int kx) noexcept { return data[index(c, ky, kx)]; }
  [[nodiscard]] double at(int c, int ky, int kx) const noexcept { return data[index(c, ky, kx)]; }
};

/// Dense [rows][cols] matrix; used as the pointwise channel mix [out_c][in_c].
struct Matrix {
  int rows{0};
  int cols{0};
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0);

  static Matrix identity(int n);

  double& at(int r, int c) noexcept { return data[static_cast<std::size_t>(r) * cols + c]; }
  [[nodiscard]] double at(int r, int c) const noexcept {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
};

struct BatchNormParams {
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> scale;
  std::vector<double> shift;
  double epsilon{0.0};

  /// mean 0, variance 1, scale 1, shift 0, epsilon 0.
  static BatchNormParams identity(int channels);
};

struct MacCounter {
  std::uint64_t macs{0};
};

[[nodiscard]] Tensor3 conv2d_full(const Tensor3& input, const FilterBank& weights,
                                  const ConvSpec& spec, MacCounter* counter = nullptr);

[[nodiscard]] Tensor3 depthwise_conv(const Tensor3& input, const DepthwiseKernels& kernels,
                                     int stride, int padding, MacCounter* counter = nullptr);

[[nodiscard]] Tensor3 pointwise_conv(const Tensor3& input, const Matrix& mix,
                                     MacCounter* counter = nullptr);

/// pointwise_conv(depthwise_conv(input, kernels, stride, padding), mix).
[[nodiscard]] Tensor3 depthwise_separable(const Tensor3& input, const DepthwiseKernels& kernels,
                                          const Matrix& mix, int stride, int padding,
                                          MacCounter* counter = nullptr);

/// Full-convolution weights equal to a depthwise + pointwise pair:
/// W[o][ky][kx][i] = mix[o][i] * kernels[i][ky][kx].
[[nodiscard]] FilterBank factorized_weights(const DepthwiseKernels& kernels, const Matrix& mix);

[[nodiscard]] Tensor3 batchnorm(const Tensor3& input, const BatchNormParams& params);

[[nodiscard]] Tensor3 relu(const Tensor3& input);

struct InvertedResidualWeights {
  Matrix expand;  // [hidden][in]
  BatchNormParams expand_bn;
  DepthwiseKernels depthwise;  // [hidden][3][3]
  BatchNormParams depthwise_bn;
  Matrix project;  // [out][hidden]
  BatchNormParams project_bn;

  /// All-zero convolution weights with identity batchnorm parameters.
  static InvertedResidualWeights zeros(int in_channels, int expansion_factor,
                                       int out_channels);
};

/// expand (1x1) -> BN -> ReLU -> depthwise 3x3 -> BN -> ReLU -> project (1x1)
/// -> BN. The projection is linear. The input is added back when stride is 1
/// and the channel count is unchanged.
[[nodiscard]] Tensor3 inverted_residual(const Tensor3& input, int expansion_factor,
                                        const InvertedResidualWeights& weights, int stride);

enum class ConvKind { full, depthwise, pointwise };

struct ConvDescriptor {
  ConvKind kind{ConvKind::full};
  int in_height{1};
  int in_width{1};
  ConvSpec spec;
};

/// Multiply-accumulates for one convolution:
///   full       h_out * w_out * k^2 * in_c * out_c
///   depthwise  h_out * w_out * k^2 * in_c
///   pointwise  h_out * w_out * in_c * out_c
[[nodiscard]] std::uint64_t mac_count(const ConvDescriptor& op);

}  // namespace cct::nn
