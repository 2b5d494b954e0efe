// Copyright 2026 The temphase Authors. All Rights Reserved.
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
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace temphase {

/// Single-channel raster, row-major, index = y * width + x.
struct Image2D {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;
  std::optional<double> pixel_size_nm;

  Image2D() = default;
  Image2D(int w, int h, double fill = 0.0) : width(w), height(h) {
    require(w >= 1 && h >= 1, "image dimensions must be positive");
    pixels.assign(static_cast<std::size_t>(w) * h, fill);
  }

  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return pixels.size(); }
};

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(int w, int h) : width(w), height(h) {
    require(w >= 1 && h >= 1, "mask dimensions must be positive");
    bits.assign(static_cast<std::size_t>(w) * h, 0);
  }

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v = true) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t size() const { return bits.size(); }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : bits) n += b != 0;
    return n;
  }
  bool empty() const { return count() == 0; }
  bool operator==(const BinaryMask&) const = default;
};

/// 0 is background; instances are numbered 1..count.
struct LabelMap {
  int width = 0;
  int height = 0;
  int count = 0;
  std::vector<std::int32_t> labels;

  LabelMap() = default;
  LabelMap(int w, int h) : width(w), height(h) {
    labels.assign(static_cast<std::size_t>(w) * h, 0);
  }
  std::int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

/// Interleaved 8-bit RGB.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h) {
    data.assign(static_cast<std::size_t>(w) * h * 3, 0);
  }
  std::uint8_t* px(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* px(int x, int y) const {
    return &data[(static_cast<std::size_t>(y) * width + x) * 3];
  }
};

/// Geometric centre used for radii and point reflections: (n - 1) / 2.
inline double geometric_center(int n) { return (n - 1) / 2.0; }

/// Integer bin holding the zero-frequency term after an fft shift.
inline int dc_bin(int n) { return n / 2; }

inline void require_same_dims(int w1, int h1, int w2, int h2, const char* what) {
  if (w1 != w2 || h1 != h2) {
    fail(ErrorKind::kDimension, std::string(what) + ": dimension mismatch " + std::to_string(w1) +
                                    "x" + std::to_string(h1) + " vs " + std::to_string(w2) + "x" +
                                    std::to_string(h2));
  }
}

}  // namespace temphase
