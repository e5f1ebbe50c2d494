#include "cct/conv_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cct::nn {

namespace {

[[noreturn]] void shape_error(const char* op, const std::string& what) {
  throw std::invalid_argument(std::string(op) + ": " + what);
}

std::string mismatch(const char* dim, long long got, long long want) {
  return std::string(dim) + " is " + std::to_string(got) + ", expected " +
         std::to_string(want);
}

void check_tensor(const char* op, const Tensor3& t) {
  if (t.height < 1 || t.width < 1 || t.channels < 1) {
    shape_error(op, "input tensor needs positive height, width and channels");
  }
  if (t.data.size() != static_cast<std::size_t>(t.height) * t.width * t.channels) {
    shape_error(op, mismatch("input data length", static_cast<long long>(t.data.size()),
                             static_cast<long long>(t.height) * t.width * t.channels));
  }
}

Tensor3 zero_pad(const Tensor3& in, int padding) {
  if (padding == 0) return in;
  Tensor3 out(in.height + 2 * padding, in.width + 2 * padding, in.channels);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      for (int c = 0; c < in.channels; ++c) {
        out.at(y + padding, x + padding, c) = in.at(y, x, c);
      }
    }
  }
  return out;
}

void check_spec(const char* op, const ConvSpec& spec) {
  if (spec.kernel_size < 1 || spec.kernel_size % 2 == 0) {
    shape_error(op, "kernel_size must be a positive odd integer, got " +
                        std::to_string(spec.kernel_size));
  }
  if (spec.stride < 1) shape_error(op, "stride must be positive");
  if (spec.padding < 0) shape_error(op, "padding must be non-negative");
  if (spec.in_channels < 1 || spec.out_channels < 1) {
    shape_error(op, "channel counts must be positive");
  }
}

void count(MacCounter* counter, std::uint64_t n) {
  if (counter != nullptr) counter->macs += n;
}

void check_bn(const char* op, const BatchNormParams& p, int channels) {
  const auto n = static_cast<std::size_t>(channels);
  if (p.mean.size() != n) shape_error(op, mismatch("mean length", p.mean.size(), channels));
  if (p.variance.size() != n) {
    shape_error(op, mismatch("variance length", p.variance.size(), channels));
  }
  if (p.scale.size() != n) shape_error(op, mismatch("scale length", p.scale.size(), channels));
  if (p.shift.size() != n) shape_error(op, mismatch("shift length", p.shift.size(), channels));
  for (std::size_t c = 0; c < n; ++c) {
    if (!(p.variance[c] >= 0.0)) shape_error(op, "variance must be non-negative");
    if (!(p.variance[c] + p.epsilon > 0.0)) {
      shape_error(op, "variance + epsilon must be positive on channel " + std::to_string(c));
    }
  }
}

}  // namespace

Tensor3::Tensor3(int h, int w, int c, double fill)
    : height(h), width(w), channels(c),
      data(static_cast<std::size_t>(std::max(h, 0)) * std::max(w, 0) * std::max(c, 0), fill) {}

FilterBank::FilterBank(int out_c, int k, int in_c, double fill)
    : out_channels(out_c), kernel_size(k), in_channels(in_c),
      data(static_cast<std::size_t>(out_c) * k * k * in_c, fill) {}

DepthwiseKernels::DepthwiseKernels(int c, int k, double fill)
    : channels(c), kernel_size(k), data(static_cast<std::size_t>(c) * k * k, fill) {}

DepthwiseKernels DepthwiseKernels::delta(int c, int k) {
  DepthwiseKernels d(c, k);
  for (int ch = 0; ch < c; ++ch) d.at(ch, k / 2, k / 2) = 1.0;
  return d;
}

Matrix::Matrix(int r, int c, double fill)
    : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

BatchNormParams BatchNormParams::identity(int channels) {
  const auto n = static_cast<std::size_t>(channels);
  return {std::vector<double>(n, 0.0), std::vector<double>(n, 1.0),
          std::vector<double>(n, 1.0), std::vector<double>(n, 0.0), 0.0};
}

OutputShape ConvSpec::output_shape(int in_height, int in_width) const {
  const int span_h = in_height + 2 * padding - kernel_size;
  const int span_w = in_width + 2 * padding - kernel_size;
  if (stride < 1 || span_h < 0 || span_w < 0) {
    throw std::invalid_argument("convolution output would be empty for input " +
                                std::to_string(in_height) + "x" + std::to_string(in_width) +
                                " with kernel " + std::to_string(kernel_size) +
                                ", padding " + std::to_string(padding));
  }
  return {span_h / stride + 1, span_w / stride + 1};
}

Tensor3 conv2d_full(const Tensor3& input, const FilterBank& weights, const ConvSpec& spec,
                    MacCounter* counter) {
  constexpr const char* op = "conv2d_full";
  check_tensor(op, input);
  check_spec(op, spec);
  if (input.channels != spec.in_channels) {
    shape_error(op, mismatch("input channels", input.channels, spec.in_channels));
  }
  if (weights.out_channels != spec.out_channels) {
    shape_error(op, mismatch("weight out_channels", weights.out_channels, spec.out_channels));
  }
  if (weights.kernel_size != spec.kernel_size) {
    shape_error(op, mismatch("weight kernel_size", weights.kernel_size, spec.kernel_size));
  }
  if (weights.in_channels != spec.in_channels) {
    shape_error(op, mismatch("weight in_channels", weights.in_channels, spec.in_channels));
  }
  if (weights.data.size() != static_cast<std::size_t>(spec.out_channels) * spec.kernel_size *
                                 spec.kernel_size * spec.in_channels) {
    shape_error(op, "weight data length does not match its dimensions");
  }

  const auto shape = spec.output_shape(input.height, input.width);
  const Tensor3 padded = zero_pad(input, spec.padding);
  Tensor3 out(shape.height, shape.width, spec.out_channels);
  const int k = spec.kernel_size;
  std::uint64_t macs = 0;

  for (int oy = 0; oy < shape.height; ++oy) {
    for (int ox = 0; ox < shape.width; ++ox) {
      for (int o = 0; o < spec.out_channels; ++o) {
        double acc = 0.0;
        for (int ky = 0; ky < k; ++ky) {
          for (int kx = 0; kx < k; ++kx) {
            const int iy = oy * spec.stride + ky;
            const int ix = ox * spec.stride + kx;
            for (int i = 0; i < spec.in_channels; ++i) {
              acc += padded.at(iy, ix, i) * weights.at(o, ky, kx, i);
              ++macs;
            }
          }
        }
        out.at(oy, ox, o) = acc;
      }
    }
  }
  count(counter, macs);
  return out;
}

Tensor3 depthwise_conv(const Tensor3& input, const DepthwiseKernels& kernels, int stride,
                       int padding, MacCounter* counter) {
  constexpr const char* op = "depthwise_conv";
  check_tensor(op, input);
  if (kernels.channels != input.channels) {
    shape_error(op, mismatch("kernel channels", kernels.channels, input.channels));
  }
  const ConvSpec spec{kernels.kernel_size, stride, padding, input.channels, input.channels};
  check_spec(op, spec);
  if (kernels.data.size() !=
      static_cast<std::size_t>(kernels.channels) * kernels.kernel_size * kernels.kernel_size) {
    shape_error(op, "kernel data length does not match its dimensions");
  }

  const auto shape = spec.output_shape(input.height, input.width);
  const Tensor3 padded = zero_pad(input, padding);
  Tensor3 out(shape.height, shape.width, input.channels);
  const int k = kernels.kernel_size;
  std::uint64_t macs = 0;

  for (int oy = 0; oy < shape.height; ++oy) {
    for (int ox = 0; ox < shape.width; ++ox) {
      for (int c = 0; c < input.channels; ++c) {
        double acc = 0.0;
        for (int ky = 0; ky < k; ++ky) {
          for (int kx = 0; kx < k; ++kx) {
            acc += padded.at(oy * stride + ky, ox * stride + kx, c) * kernels.at(c, ky, kx);
            ++macs;
          }
        }
        out.at(oy, ox, c) = acc;
      }
    }
  }
  count(counter, macs);
  return out;
}

Tensor3 pointwise_conv(const Tensor3& input, const Matrix& mix, MacCounter* counter) {
  constexpr const char* op = "pointwise_conv";
  check_tensor(op, input);
  if (mix.cols != input.channels) {
    shape_error(op, mismatch("mix columns", mix.cols, input.channels));
  }
  if (mix.rows < 1) shape_error(op, "mix needs at least one row");
  if (mix.data.size() != static_cast<std::size_t>(mix.rows) * mix.cols) {
    shape_error(op, "mix data length does not match its dimensions");
  }

  Tensor3 out(input.height, input.width, mix.rows);
  std::uint64_t macs = 0;
  for (int y = 0; y < input.height; ++y) {
    for (int x = 0; x < input.width; ++x) {
      for (int o = 0; o < mix.rows; ++o) {
        double acc = 0.0;
        for (int i = 0; i < input.channels; ++i) {
          acc += input.at(y, x, i) * mix.at(o, i);
          ++macs;
        }
        out.at(y, x, o) = acc;
      }
    }
  }
  count(counter, macs);
  return out;
}

Tensor3 depthwise_separable(const Tensor3& input, const DepthwiseKernels& kernels,
                            const Matrix& mix, int stride, int padding, MacCounter* counter) {
  return pointwise_conv(depthwise_conv(input, kernels, stride, padding, counter), mix, counter);
}

FilterBank factorized_weights(const DepthwiseKernels& kernels, const Matrix& mix) {
  if (mix.cols != kernels.channels) {
    throw std::invalid_argument("factorized_weights: " +
                                mismatch("mix columns", mix.cols, kernels.channels));
  }
  FilterBank w(mix.rows, kernels.kernel_size, kernels.channels);
  for (int o = 0; o < mix.rows; ++o) {
    for (int ky = 0; ky < kernels.kernel_size; ++ky) {
      for (int kx = 0; kx < kernels.kernel_size; ++kx) {
        for (int i = 0; i < kernels.channels; ++i) {
          w.at(o, ky, kx, i) = mix.at(o, i) * kernels.at(i, ky, kx);
        }
      }
    }
  }
  return w;
}

Tensor3 batchnorm(const Tensor3& input, const BatchNormParams& params) {
  check_tensor("batchnorm", input);
  check_bn("batchnorm", params, input.channels);
  Tensor3 out = input;
  for (std::size_t idx = 0; idx < out.data.size(); ++idx) {
    const auto c = idx % static_cast<std::size_t>(input.channels);
    out.data[idx] = (input.data[idx] - params.mean[c]) /
                        std::sqrt(params.variance[c] + params.epsilon) * params.scale[c] +
                    params.shift[c];
  }
  return out;
}

Tensor3 relu(const Tensor3& input) {
  Tensor3 out = input;
  for (auto& v : out.data) v = std::max(0.0, v);
  return out;
}

InvertedResidualWeights InvertedResidualWeights::zeros(int in_channels, int expansion_factor,
                                                       int out_channels) {
  const int hidden = in_channels * expansion_factor;
  return {Matrix(hidden, in_channels),
          BatchNormParams::identity(hidden),
          DepthwiseKernels(hidden, 3),
          BatchNormParams::identity(hidden),
          Matrix(out_channels, hidden),
          BatchNormParams::identity(out_channels)};
}

Tensor3 inverted_residual(const Tensor3& input, int expansion_factor,
                          const InvertedResidualWeights& weights, int stride) {
  constexpr const char* op = "inverted_residual";
  check_tensor(op, input);
  if (expansion_factor < 1) shape_error(op, "expansion_factor must be positive");
  if (stride < 1) shape_error(op, "stride must be positive");
  const int hidden = input.channels * expansion_factor;
  if (weights.expand.rows != hidden) {
    shape_error(op, mismatch("expand rows", weights.expand.rows, hidden));
  }
  if (weights.depthwise.channels != hidden) {
    shape_error(op, mismatch("depthwise channels", weights.depthwise.channels, hidden));
  }
  if (weights.depthwise.kernel_size != 3) {
    shape_error(op, mismatch("depthwise kernel_size", weights.depthwise.kernel_size, 3));
  }
  if (weights.project.cols != hidden) {
    shape_error(op, mismatch("project columns", weights.project.cols, hidden));
  }

  Tensor3 x = pointwise_conv(input, weights.expand);
  x = relu(batchnorm(x, weights.expand_bn));
  x = depthwise_conv(x, weights.depthwise, stride, 1);
  x = relu(batchnorm(x, weights.depthwise_bn));
  x = pointwise_conv(x, weights.project);
  x = batchnorm(x, weights.project_bn);

  if (stride == 1 && x.channels == input.channels) {
    for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += input.data[i];
  }
  return x;
}

std::uint64_t mac_count(const ConvDescriptor& op) {
  ConvSpec spec = op.spec;
  if (op.kind == ConvKind::pointwise) {
    spec.kernel_size = 1;
    spec.stride = 1;
    spec.padding = 0;
  }
  const auto shape = spec.output_shape(op.in_height, op.in_width);
  const auto spatial = static_cast<std::uint64_t>(shape.height) * shape.width;
  const auto k2 = static_cast<std::uint64_t>(spec.kernel_size) * spec.kernel_size;
  const auto in_c = static_cast<std::uint64_t>(spec.in_channels);
  const auto out_c = static_cast<std::uint64_t>(spec.out_channels);
  switch (op.kind) {
    case ConvKind::full:
      return spatial * k2 * in_c * out_c;
    case ConvKind::depthwise:
      return spatial * k2 * in_c;
    case ConvKind::pointwise:
      return spatial * in_c * out_c;
  }
  return 0;
}

}  // namespace cct::nn
