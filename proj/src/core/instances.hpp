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
#include <vector>

#include "image.hpp"

namespace temphase {

struct WatershedParams {
  /// Sure foreground: distance >= fg_fraction * max distance of the pixel's component.
  double fg_fraction = 0.5;
  int open_iters = 2;
  int dilate_iters = 3;
};

struct Feature {
  int id = 0;
  double cx = 0.0;
  double cy = 0.0;
  int area = 0;
  double equivalent_diameter = 0.0;
  /// Sum of round(255 * enhanced) over the instance.
  std::int64_t pixel_value_count = 0;
  /// Mean linear FFT magnitude over the instance.
  double mean_intensity = 0.0;
};

/// Exact Euclidean distance from each foreground pixel to the nearest
/// background pixel; pixels beyond the image border count as background.
Image2D distance_transform(const BinaryMask& mask);

/// Marker-controlled watershed on the negated distance transform. Every
/// foreground pixel of `mask` receives exactly one label.
LabelMap watershed_instances(const BinaryMask& mask, const WatershedParams& params = {});

/// Markers used by watershed_instances, as a label map; exposed for testing.
LabelMap watershed_markers(const BinaryMask& mask, const WatershedParams& params = {});

/// One feature per label, sorted by descending area (ties by label).
std::vector<Feature> feature_stats(const LabelMap& labels, const Image2D& enhanced_fft,
                                   const Image2D& linear_magnitude);

double equivalent_diameter(int area);

}  // namespace temphase
