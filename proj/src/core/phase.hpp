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

#include "imageio.hpp"
#include "instances.hpp"

namespace temphase {

enum class ScaleMode {
  /// 10 * original_size * pixel_size / r, r measured from ((final-1)/2, (final-1)/2).
  kFixedCenter,
  /// d = 10 / (r * dk) with dk = (crop/final) / (original * pixel_size), r from the DC position.
  kGeneralized,
};

/// Bookkeeping from FFT-image pixels back to reciprocal space. Sizes are
/// edge lengths of square images.
struct ScaleChain {
  int original_size = 0;
  double pixel_size_nm = 0.0;
  int crop_size = 0;
  int final_size = 0;
  ScaleMode mode = ScaleMode::kGeneralized;

  void validate() const;
  /// Where the zero-frequency bin lands in the final image.
  double dc_position() const;
  /// Point used as the origin for radii in the final image.
  double center() const;
  double radius(double x, double y) const;
  /// Reciprocal pitch of one final-image pixel, nm^-1.
  double reciprocal_pitch() const;
  /// Maps a final-image coordinate into the full shifted spectrum.
  double to_spectrum(double final_coord) const;
  double spectrum_scale() const { return static_cast<double>(crop_size) / final_size; }
};

/// d-spacing in angstrom for an FFT-image coordinate; throws kDomain at r = 0.
double d_spacing(double x, double y, const ScaleChain& chain);
double d_spacing_at_radius(double r, const ScaleChain& chain);

struct ProfileBand {
  int radius = 0;
  double d_angstrom = 0.0;
  double intensity = 0.0;
  int pixel_count = 0;
};

struct DiffractionProfile {
  std::vector<ProfileBand> bands;
};

/// Sums pixel values in 1-px annuli (band index = rounded radius). Band 0
/// is omitted; bands run to the inscribed radius.
DiffractionProfile radial_profile(const Image2D& fft_img, const ScaleChain& chain,
                                  const BinaryMask* mask = nullptr);

struct ProfilePeak {
  int radius = 0;
  double d_angstrom = 0.0;
  double intensity = 0.0;
  double prominence = 0.0;
};

std::vector<ProfilePeak> find_peaks(const DiffractionProfile& profile, double min_prominence_fraction = 0.05,
                                    int dc_exclusion_bands = 20);

enum class MatchMetric {
  /// 100 * min(d_calc / d_ref, 1).
  kRatio,
  /// 100 * (1 - |d_calc - d_ref| / d_ref).
  kDeviation,
};

double match_percent(double d_calc, double d_ref, MatchMetric metric = MatchMetric::kRatio);

struct MatchParams {
  double rel_tolerance = 0.02;
  MatchMetric metric = MatchMetric::kRatio;
};

struct ComponentMatch {
  std::string name;
  std::string hkl;
  double d_calc = 0.0;
  double d_ref = 0.0;
  double match_pct = 0.0;
  std::vector<int> feature_ids;
  /// Mean equivalent diameter of the grouped features.
  double feature_size_px = 0.0;
  std::int64_t pixel_value_count = 0;
};

struct UnassignedFeature {
  int feature_id = 0;
  /// Empty for a feature sitting on the DC position.
  std::optional<double> d_calc;
};

struct MatchResult {
  /// Sorted by d_calc descending.
  std::vector<ComponentMatch> components;
  std::vector<UnassignedFeature> unassigned;
};

MatchResult match_components(const std::vector<Feature>& features, const ScaleChain& chain, const DSpacingDB& db,
                             const MatchParams& params = {});

}  // namespace temphase
