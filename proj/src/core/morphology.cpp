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

#include "morphology.hpp"

#include <array>
#include <utility>

namespace temphase {
namespace {

struct Offset {
  int dx;
  int dy;
};

constexpr std::array<Offset, 4> kCross = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr std::array<Offset, 8> kSquare = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};

template <typename Offsets>
BinaryMask morph_step(const BinaryMask& in, const Offsets& offsets, bool erode_op) {
  BinaryMask out(in.width, in.height);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      bool v = in.at(x, y);
      for (auto [dx, dy] : offsets) {
        const int nx = x + dx;
        const int ny = y + dy;
        const bool inside = nx >= 0 && ny >= 0 && nx < in.width && ny < in.height;
        const bool nv = inside && in.at(nx, ny);
        if (erode_op) {
          v = v && nv;
        } else {
          v = v || nv;
        }
      }
      out.set(x, y, v);
    }
  }
  return out;
}

BinaryMask morph(const BinaryMask& mask, Structuring se, int iterations, bool erode_op) {
  BinaryMask cur = mask;
  for (int i = 0; i < iterations; ++i) {
    cur = se == Structuring::kCross3 ? morph_step(cur, kCross, erode_op) : morph_step(cur, kSquare, erode_op);
  }
  return cur;
}

}  // namespace

LabelMap label_components(const BinaryMask& mask, Connectivity conn) {
  LabelMap out(mask.width, mask.height);
  std::vector<std::pair<int, int>> stack;
  const int n_off = conn == Connectivity::kEight ? 8 : 4;
  int next = 0;
  for (int y0 = 0; y0 < mask.height; ++y0) {
    for (int x0 = 0; x0 < mask.width; ++x0) {
      const std::size_t i0 = static_cast<std::size_t>(y0) * mask.width + x0;
      if (!mask.bits[i0] || out.labels[i0]) continue;
      ++next;
      out.labels[i0] = next;
      stack.assign(1, {x0, y0});
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (int k = 0; k < n_off; ++k) {
          const int nx = x + kSquare[k].dx;
          const int ny = y + kSquare[k].dy;
          if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) continue;
          const std::size_t ni = static_cast<std::size_t>(ny) * mask.width + nx;
          if (mask.bits[ni] && !out.labels[ni]) {
            out.labels[ni] = next;
            stack.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  out.count = next;
  return out;
}

BinaryMask erode(const BinaryMask& mask, Structuring se, int iterations) {
  return morph(mask, se, iterations, true);
}

BinaryMask dilate(const BinaryMask& mask, Structuring se, int iterations) {
  return morph(mask, se, iterations, false);
}

BinaryMask open(const BinaryMask& mask, Structuring se, int iterations) {
  return dilate(erode(mask, se, iterations), se, iterations);
}

std::vector<Blob> blob_stats(const LabelMap& labels) {
  std::vector<Blob> blobs(labels.count + 1);
  std::vector<double> sx(labels.count + 1, 0.0);
  std::vector<double> sy(labels.count + 1, 0.0);
  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const int l = labels.at(x, y);
      if (!l) continue;
      ++blobs[l].area;
      sx[l] += x;
      sy[l] += y;
    }
  }
  for (int l = 1; l <= labels.count; ++l) {
    blobs[l].label = l;
    if (blobs[l].area > 0) {
      blobs[l].cx = sx[l] / blobs[l].area;
      blobs[l].cy = sy[l] / blobs[l].area;
    }
  }
  return blobs;
}

}  // namespace temphase
