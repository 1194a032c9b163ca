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

#include "bintemp/augment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "bintemp/error.hpp"
#include "bintemp/rng.hpp"

namespace bintemp {

RasterImage::RasterImage(int width, int height, int channels,
                         std::uint8_t fill)
    : RasterImage(width, height, channels,
                  std::vector<std::uint8_t>(
                      static_cast<std::size_t>(std::max(width, 0)) *
                          static_cast<std::size_t>(std::max(height, 0)) *
                          static_cast<std::size_t>(std::max(channels, 0)),
                      fill)) {}

RasterImage::RasterImage(int width, int height, int channels,
                         std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), channels_(channels),
      pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) {
    fail(ErrorKind::kInvalidInput, "image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    fail(ErrorKind::kInvalidInput, "images must have 1 or 3 channels");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * height * channels) {
    fail(ErrorKind::kInvalidInput, "pixel buffer size does not match image");
  }
}

namespace {

std::uint8_t clamp_byte(long v) {
  return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

RasterImage map_values(const RasterImage& img,
                       const std::array<std::uint8_t, 256>& lut) {
  RasterImage out = img;
  for (auto& v : out.pixels()) v = lut[v];
  return out;
}

}  // namespace

RasterImage shift_x(const RasterImage& img, int dx) {
  if (std::abs(dx) >= img.width()) {
    fail(ErrorKind::kInvalidInput,
         "shift " + std::to_string(dx) + " is not smaller than image width " +
             std::to_string(img.width()));
  }
  RasterImage out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const int src = x - dx;
      if (src < 0 || src >= img.width()) continue;
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(src, y, c);
    }
  }
  return out;
}

RasterImage brightness(const RasterImage& img, int delta) {
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) lut[v] = clamp_byte(static_cast<long>(v) + delta);
  return map_values(img, lut);
}

RasterImage linear_contrast(const RasterImage& img, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorKind::kInvalidInput, "contrast alpha must be positive");
  }
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    lut[v] = clamp_byte(std::lround(alpha * (v - 127) + 127.0));
  }
  return map_values(img, lut);
}

RasterImage gaussian_blur(const RasterImage& img, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    fail(ErrorKind::kInvalidInput, "blur sigma must be non-negative");
  }
  if (sigma == 0.0) return img;

  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> weight(radius + 1);
  double norm = 0.0;
  for (int k = 0; k <= radius; ++k) {
    weight[k] = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
    norm += k == 0 ? weight[k] : 2.0 * weight[k];
  }
  for (double& w : weight) w /= norm;

  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  auto at = [&](const std::vector<double>& buf, int x, int y, int c) {
    return buf[(static_cast<std::size_t>(y) * w + x) * ch + c];
  };

  std::vector<double> src(img.pixels().begin(), img.pixels().end());
  std::vector<double> tmp(src.size());
  // Mirror-paired taps keep the result exactly symmetric under flips.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = weight[0] * at(src, x, y, c);
        for (int k = 1; k <= radius; ++k) {
          const int left = std::max(x - k, 0);
          const int right = std::min(x + k, w - 1);
          acc += weight[k] * (at(src, left, y, c) + at(src, right, y, c));
        }
        tmp[(static_cast<std::size_t>(y) * w + x) * ch + c] = acc;
      }
    }
  }
  RasterImage out(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = weight[0] * at(tmp, x, y, c);
        for (int k = 1; k <= radius; ++k) {
          const int up = std::max(y - k, 0);
          const int down = std::min(y + k, h - 1);
          acc += weight[k] * (at(tmp, x, up, c) + at(tmp, x, down, c));
        }
        out.at(x, y, c) = clamp_byte(std::lround(acc));
      }
    }
  }
  return out;
}

RasterImage mirror_x(const RasterImage& img) {
  RasterImage out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        out.at(img.width() - 1 - x, y, c) = img.at(x, y, c);
      }
    }
  }
  return out;
}

void AugmentOp::validate() const {
  switch (kind) {
    case AugmentKind::kShiftX:
    case AugmentKind::kBrightness:
      if (lo != std::floor(lo) || hi != std::floor(hi) || !(lo <= hi)) {
        fail(ErrorKind::kInvalidInput,
             "shift/brightness ranges need integer bounds with lo <= hi");
      }
      break;
    case AugmentKind::kContrast:
      if (!(lo > 0.0) || !std::isfinite(lo)) {
        fail(ErrorKind::kInvalidInput, "contrast alpha must be positive");
      }
      break;
    case AugmentKind::kBlur:
      if (!(lo >= 0.0) || !(lo <= hi) || !std::isfinite(hi)) {
        fail(ErrorKind::kInvalidInput,
             "blur sigma range needs 0 <= lo <= hi");
      }
      break;
  }
}

double AugmentOp::sample_parameter(std::uint64_t draw_index) const {
  validate();
  Rng rng(seed, draw_index);
  switch (kind) {
    case AugmentKind::kShiftX:
    case AugmentKind::kBrightness:
      return static_cast<double>(rng.uniform_int(static_cast<std::int64_t>(lo),
                                                 static_cast<std::int64_t>(hi)));
    case AugmentKind::kContrast:
      return lo;
    case AugmentKind::kBlur:
      return lo == hi ? lo : rng.uniform(lo, hi);
  }
  return lo;
}

namespace {

double parse_value(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorKind::kParse, "invalid augmentation parameter '" +
                                std::string(text) + "'");
  }
  return value;
}

}  // namespace

AugmentOp parse_augment_op(std::string_view text, std::uint64_t seed) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    fail(ErrorKind::kParse,
         "augmentation must be shift:lo,hi | bright:lo,hi | contrast:alpha | "
         "blur:lo,hi");
  }
  const auto name = text.substr(0, colon);
  const auto args = text.substr(colon + 1);
  AugmentOp op;
  op.seed = seed;
  if (name == "shift") {
    op.kind = AugmentKind::kShiftX;
  } else if (name == "bright" || name == "brightness") {
    op.kind = AugmentKind::kBrightness;
  } else if (name == "contrast") {
    op.kind = AugmentKind::kContrast;
  } else if (name == "blur") {
    op.kind = AugmentKind::kBlur;
  } else {
    fail(ErrorKind::kParse, "unknown augmentation '" + std::string(name) + "'");
  }

  const auto comma = args.find(',');
  if (op.kind == AugmentKind::kContrast) {
    if (comma != std::string_view::npos) {
      fail(ErrorKind::kParse, "contrast takes a single alpha value");
    }
    op.lo = op.hi = parse_value(args);
  } else {
    if (comma == std::string_view::npos) {
      fail(ErrorKind::kParse, std::string(name) + " takes a range lo,hi");
    }
    op.lo = parse_value(args.substr(0, comma));
    op.hi = parse_value(args.substr(comma + 1));
  }
  op.validate();
  return op;
}

RasterImage apply_random(const RasterImage& img, const AugmentOp& op,
                         std::uint64_t draw_index) {
  const double param = op.sample_parameter(draw_index);
  switch (op.kind) {
    case AugmentKind::kShiftX: return shift_x(img, static_cast<int>(param));
    case AugmentKind::kBrightness: return brightness(img, static_cast<int>(param));
    case AugmentKind::kContrast: return linear_contrast(img, param);
    case AugmentKind::kBlur: return gaussian_blur(img, param);
  }
  return img;
}

}  // namespace bintemp
