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

#include "pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace temphase {

ScaleChain make_scale_chain(int original_size, const AnalysisConfig& config) {
  ScaleChain chain;
  chain.original_size = original_size;
  chain.pixel_size_nm = config.pixel_size_nm;
  chain.crop_size = config.crop_size > 0 ? config.crop_size : original_size;
  chain.final_size = config.final_size > 0 ? config.final_size : chain.crop_size;
  chain.mode = config.scale_mode;
  chain.validate();
  return chain;
}

FrameAnalysis prepare_spectrum(const Image2D& image, const AnalysisConfig& config) {
  FrameAnalysis out;
  const int side = std::min(image.width, image.height);
  out.source = side == image.width && side == image.height ? image : center_crop(image, side, side);
  if (side != image.width || side != image.height) {
    out.warnings.push_back("non-square input centre-cropped to " + std::to_string(side) + "x" + std::to_string(side));
  }
  out.analyzed_size = side;
  out.chain = make_scale_chain(side, config);

  out.spectrum = forward_fft(out.source);
  const int crop = out.chain.crop_size;
  const int fin = out.chain.final_size;
  out.fft_image = resize(center_crop(log_magnitude(out.spectrum), crop, crop), fin, fin);
  out.linear_magnitude = resize(center_crop(magnitude_shifted(out.spectrum), crop, crop), fin, fin);
  out.enhanced = enhance(out.fft_image, config.enhance);
  return out;
}

FrameAnalysis analyze_image(const Image2D& image, const DSpacingDB& db, const AnalysisConfig& config,
                            const ExternalMask* external) {
  FrameAnalysis out = prepare_spectrum(image, config);
  const int fin = out.chain.final_size;

  if (external) {
    out.mask = external->half ? reconstruct_full(external->mask) : external->mask;
    require_same_dims(out.mask.width, out.mask.height, fin, fin, "external mask vs FFT image");
  } else {
    out.mask = detect_spots(out.enhanced, config.detect);
  }

  out.labels = watershed_instances(out.mask, config.watershed);
  out.features = feature_stats(out.labels, out.enhanced, out.linear_magnitude);
  out.matches = match_components(out.features, out.chain, db, config.match);
  out.profile = radial_profile(out.enhanced, out.chain, &out.mask);
  if (!out.profile.bands.empty()) {
    out.peaks = find_peaks(out.profile, config.peak_min_prominence, config.peak_dc_bands);
  }

  const double dc = out.chain.dc_position();
  int color = 0;
  for (const auto& m : out.matches.components) {
    std::vector<Feature> selected;
    for (const auto& f : out.features) {
      if (std::find(m.feature_ids.begin(), m.feature_ids.end(), f.id) != m.feature_ids.end()) selected.push_back(f);
    }
    BinaryMask disks = build_feature_mask(selected, fin, fin, config.mask_radius_scale, dc, dc);
    ComponentResult cr{m, 0.0};
    for (std::size_t i = 0; i < disks.size(); ++i) {
      if (disks.bits[i]) cr.intensity += out.linear_magnitude.pixels[i];
    }
    out.components.push_back(cr);

    if (config.compute_maps) {
      BinaryMask spectral = feature_mask_in_spectrum(selected, out.chain, config.mask_radius_scale);
      ComponentMap cm = component_map(out.spectrum, spectral, config.map_threshold, config.map_mode);
      cm.name = m.name;
      cm.hkl = m.hkl;
      cm.color_index = color;
      if (cm.empty_mask) out.warnings.push_back("empty spectral mask for " + m.name + " (" + m.hkl + ")");
      out.maps.push_back(std::move(cm));
    }
    ++color;
  }
  return out;
}

}  // namespace temphase
