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

#include <vector>

#include "image.hpp"

namespace temphase {

enum class Connectivity { kFour, kEight };
enum class Structuring { kCross3, kSquare3 };

/// Labels are assigned in raster order of each component's first pixel.
LabelMap label_components(const BinaryMask& mask, Connectivity conn = Connectivity::kEight);

/// Pixels outside the image count as background for erosion.
BinaryMask erode(const BinaryMask& mask, Structuring se, int iterations = 1);
BinaryMask dilate(const BinaryMask& mask, Structuring se, int iterations = 1);
BinaryMask open(const BinaryMask& mask, Structuring se, int iterations = 1);

struct Blob {
  int label = 0;
  int area = 0;
  double cx = 0.0;
  double cy = 0.0;
};

/// Area and centroid per label 1..count; index 0 is unused.
std::vector<Blob> blob_stats(const LabelMap& labels);

}  // namespace temphase
