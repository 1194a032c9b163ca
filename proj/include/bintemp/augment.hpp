// Copyright 2026 The bintemp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bintemp {

/// 8-bit raster, row-major, channels interleaved (1 = gray, 3 = RGB).
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, std::uint8_t fill = 0);
  RasterImage(int width, int height, int channels,
              std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }

  std::uint8_t at(int x, int y, int c) const {
    return pixels_[index(x, y, c)];
  }
  std::uint8_t& at(int x, int y, int c) { return pixels_[index(x, y, c)]; }

  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }
  std::vector<std::uint8_t>& pixels() noexcept { return pixels_; }

  bool operator==(const RasterImage&) const = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<std::uint8_t> pixels_;
};

/// out(x, y) = in(x - dx, y); vacated columns are black. Requires |dx| < width.
RasterImage shift_x(const RasterImage& img, int dx);

/// Adds `delta` to every value, clamped to [0, 255].
RasterImage brightness(const RasterImage& img, int delta);

/// v -> clamp(round(alpha * (v - 127) + 127)), rounding half away from zero.
RasterImage linear_contrast(const RasterImage& img, double alpha);

/// Separable Gaussian, radius ceil(3 sigma), clamp-to-edge borders, kernel
/// normalized to 1. sigma == 0 returns the input unchanged.
RasterImage gaussian_blur(const RasterImage& img, double sigma);

/// Horizontal mirror; used by tests and handy for callers.
RasterImage mirror_x(const RasterImage& img);

enum class AugmentKind { kShiftX, kBrightness, kContrast, kBlur };

/// A randomized augmentation. Integer kinds (shift, brightness) sample
/// uniformly from [lo, hi] inclusive; blur samples sigma from [lo, hi);
/// contrast uses `lo` as its fixed alpha.
struct AugmentOp {
  AugmentKind kind = AugmentKind::kShiftX;
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t seed = 0;

  void validate() const;

  /// Parameter used for draw number `draw_index`. Deterministic in
  /// (seed, draw_index).
  double sample_parameter(std::uint64_t draw_index) const;
};

/// "shift:lo,hi", "bright:lo,hi", "contrast:alpha" or "blur:lo,hi".
AugmentOp parse_augment_op(std::string_view text, std::uint64_t seed = 0);

RasterImage apply_random(const RasterImage& img, const AugmentOp& op,
                         std::uint64_t draw_index);

}  // namespace bintemp
