#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace cct {

/// 8-bit grayscale image, row-major.
struct GrayFrame {
  int width{0};
  int height{0};
  std::vector<std::uint8_t> pixels;

  GrayFrame() = default;
  GrayFrame(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t& at(int x, int y) noexcept {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  [[nodiscard]] std::uint8_t at(int x, int y) const noexcept {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }

  friend bool operator==(const GrayFrame&, const GrayFrame&) = default;
};

/// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, const GrayFrame& frame);

/// Reads P5 or P2 graymaps with maxval <= 255. Throws std::runtime_error.
[[nodiscard]] GrayFrame read_pgm(const std::filesystem::path& path);

}  // namespace cct
