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

#include <cstdint>
#include <filesystem>

#include "image.hpp"

namespace temphase {

/// Classical stand-in for a trained segmentation model.
struct DetectParams {
  double blur_sigma = 3.0;
  double dc_exclusion_radius = 20.0;
  double k_sigma = 4.0;
  double symmetry_tolerance = 5.0;
  int min_blob_area = 4;
};

/// Foreground iff prob >= t.
BinaryMask threshold_mask(const Image2D& prob_map, double t = 0.5);

/// Reads a P5 mask; foreground iff the 8-bit value is >= 128.
BinaryMask import_mask(const std::filesystem::path& path, int expected_w, int expected_h);

/// Blur, per-radius median subtraction, mean + k*sigma threshold outside the
/// DC disk, 8-connected blobs, area filter, point-symmetry filter.
BinaryMask detect_spots(const Image2D& fft_img, const DetectParams& params);

/// Top half, rows 0..H/2-1.
Image2D crop_half(const Image2D& img);
BinaryMask crop_half(const BinaryMask& mask);

/// Rebuilds W x 2H from the top half by point reflection about the
/// geometric centre: (x, y) maps to (W-1-x, H-1-y).
BinaryMask reconstruct_full(const BinaryMask& half);

/// 2|a & b| / (|a| + |b|); 1.0 when both are empty.
double dice(const BinaryMask& a, const BinaryMask& b);

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
};

Confusion confusion(const BinaryMask& pred, const BinaryMask& truth);

}  // namespace temphase
