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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fftcore.hpp"
#include "instances.hpp"
#include "phase.hpp"

namespace temphase {

enum class MapMode {
  /// |analytic signal|: the one-sided half of the masked spectrum, doubled.
  /// Gives the local fringe amplitude rather than |cos|.
  kEnvelope,
  /// |IFFT(masked spectrum)|.
  kMagnitude,
};

struct ComponentMap {
  std::string name;
  std::string hkl;
  /// Normalized [0,1] amplitude before thresholding.
  Image2D amplitude;
  BinaryMask map;
  double threshold_fraction = 0.35;
  int color_index = 0;
  /// Set when the spectral mask was empty.
  bool empty_mask = false;
};

/// Union of a disk per feature (radius radius_scale * diameter / 2) and its
/// point reflection about (reflect_cx, reflect_cy).
BinaryMask build_feature_mask(const std::vector<Feature>& features, int width, int height, double radius_scale,
                              double reflect_cx, double reflect_cy);

/// Same disks, expressed in the full shifted spectrum of the original
/// image. Partners are reflected about the DC bin so the mask is Hermitian.
BinaryMask feature_mask_in_spectrum(const std::vector<Feature>& features, const ScaleChain& chain,
                                    double radius_scale);

/// Inverse transform of the field restricted to `mask` (shifted coordinates).
ComplexField masked_inverse(const ComplexField& field, const BinaryMask& mask);

ComponentMap component_map(const ComplexField& field, const BinaryMask& mask, double threshold_fraction = 0.35,
                           MapMode mode = MapMode::kEnvelope);

using Rgb = std::array<std::uint8_t, 3>;
const std::vector<Rgb>& default_palette();

/// Grayscale base (min-max normalized) with each map blended at 50% in
/// palette[color_index % palette.size()].
RgbImage overlay(const Image2D& base, const std::vector<ComponentMap>& maps,
                 const std::vector<Rgb>& palette = default_palette());

}  // namespace temphase
