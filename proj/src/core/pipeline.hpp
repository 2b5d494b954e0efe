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

#include <optional>
#include <string>
#include <vector>

#include "detect.hpp"
#include "fftcore.hpp"
#include "imageio.hpp"
#include "instances.hpp"
#include "mapping.hpp"
#include "phase.hpp"

namespace temphase {

struct AnalysisConfig {
  double pixel_size_nm = 0.0;
  ScaleMode scale_mode = ScaleMode::kGeneralized;
  /// 0 keeps the full spectrum.
  int crop_size = 0;
  /// 0 keeps the cropped size.
  int final_size = 0;
  EnhanceParams enhance;
  DetectParams detect;
  WatershedParams watershed;
  MatchParams match;
  double map_threshold = 0.35;
  MapMode map_mode = MapMode::kEnvelope;
  double mask_radius_scale = 1.0;
  int peak_dc_bands = 20;
  double peak_min_prominence = 0.05;
  /// Component maps need one inverse FFT each; batch runs may skip them.
  bool compute_maps = true;
};

/// Mask supplied by an external segmentation model.
struct ExternalMask {
  BinaryMask mask;
  /// The mask covers the top half only and is completed by point reflection.
  bool half = false;
};

struct ComponentResult {
  ComponentMatch match;
  /// Sum of linear FFT magnitude inside the component's feature disks.
  double intensity = 0.0;
};

struct FrameAnalysis {
  ScaleChain chain;
  /// Side of the square actually transformed (non-square inputs are centre-cropped).
  int analyzed_size = 0;
  ComplexField spectrum;
  Image2D fft_image;
  Image2D enhanced;
  Image2D linear_magnitude;
  BinaryMask mask;
  LabelMap labels;
  std::vector<Feature> features;
  MatchResult matches;
  std::vector<ComponentResult> components;
  DiffractionProfile profile;
  std::vector<ProfilePeak> peaks;
  std::vector<ComponentMap> maps;
  /// Input image (after any square crop), for overlays.
  Image2D source;
  std::vector<std::string> warnings;
};

ScaleChain make_scale_chain(int original_size, const AnalysisConfig& config);

/// Image -> FFT -> enhance -> (detect | external mask) -> instances -> match -> maps.
FrameAnalysis analyze_image(const Image2D& image, const DSpacingDB& db, const AnalysisConfig& config,
                            const ExternalMask* external = nullptr);

/// Spectrum, FFT image and radial profile only.
FrameAnalysis prepare_spectrum(const Image2D& image, const AnalysisConfig& config);

}  // namespace temphase
