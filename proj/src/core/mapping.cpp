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

#include "mapping.hpp"

#include <algorithm>
#include <cmath>

#include "imageio.hpp"

namespace temphase {
namespace {

void stamp_disk(BinaryMask& mask, double cx, double cy, double r) {
  if (!(r > 0.0)) return;
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
  const int x1 = std::min(mask.width - 1, static_cast<int>(std::ceil(cx + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
  const int y1 = std::min(mask.height - 1, static_cast<int>(std::ceil(cy + r)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (std::hypot(x - cx, y - cy) <= r) mask.set(x, y);
    }
  }
}

}  // namespace

BinaryMask build_feature_mask(const std::vector<Feature>& features, int width, int height, double radius_scale,
                              double reflect_cx, double reflect_cy) {
  require(radius_scale >= 0.0, "build_feature_mask: radius_scale must be nonnegative");
  BinaryMask mask(width, height);
  for (const auto& f : features) {
    const double r = radius_scale * f.equivalent_diameter / 2.0;
    stamp_disk(mask, f.cx, f.cy, r);
    stamp_disk(mask, 2.0 * reflect_cx - f.cx, 2.0 * reflect_cy - f.cy, r);
  }
  return mask;
}

BinaryMask feature_mask_in_spectrum(const std::vector<Feature>& features, const ScaleChain& chain,
                                    double radius_scale) {
  std::vector<Feature> mapped = features;
  for (auto& f : mapped) {
    f.cx = chain.to_spectrum(f.cx);
    f.cy = chain.to_spectrum(f.cy);
    f.equivalent_diameter *= chain.spectrum_scale();
  }
  const double dc = dc_bin(chain.original_size);
  return build_feature_mask(mapped, chain.original_size, chain.original_size, radius_scale, dc, dc);
}

ComplexField masked_inverse(const ComplexField& field, const BinaryMask& mask) {
  require_same_dims(mask.width, mask.height, field.width, field.height, "masked_inverse");
  const int w = field.width;
  const int h = field.height;
  ComplexField masked(w, h);
  for (int sy = 0; sy < h; ++sy) {
    const int v = ((sy - h / 2) % h + h) % h;
    for (int sx = 0; sx < w; ++sx) {
      if (!mask.at(sx, sy)) continue;
      const int u = ((sx - w / 2) % w + w) % w;
      masked.at(u, v) = field.at(u, v);
    }
  }
  return inverse_fft_complex(masked);
}

ComponentMap component_map(const ComplexField& field, const BinaryMask& mask, double threshold_fraction,
                           MapMode mode) {
  require_same_dims(mask.width, mask.height, field.width, field.height, "component_map");
  require(threshold_fraction >= 0.0 && threshold_fraction <= 1.0, "component_map: threshold must lie in [0, 1]");
  const int w = field.width;
  const int h = field.height;
  ComponentMap cm;
  cm.threshold_fraction = threshold_fraction;
  cm.amplitude = Image2D(w, h);
  cm.map = BinaryMask(w, h);
  cm.empty_mask = mask.empty();
  if (cm.empty_mask) return cm;

  ComplexField spatial;
  if (mode == MapMode::kMagnitude) {
    spatial = masked_inverse(field, mask);
  } else {
    // One bin of each conjugate pair at weight 2; self-conjugate bins at weight 1.
    ComplexField one_sided(w, h);
    for (int sy = 0; sy < h; ++sy) {
      const int cv = sy - h / 2;
      const int v = (cv % h + h) % h;
      for (int sx = 0; sx < w; ++sx) {
        if (!mask.at(sx, sy)) continue;
        const int cu = sx - w / 2;
        const int u = (cu % w + w) % w;
        const int pu = (w - u) % w;
        const int pv = (h - v) % h;
        double weight = 0.0;
        if (pu == u && pv == v) {
          weight = 1.0;
        } else {
          // Rows cv == 0 and (even h) cv == -h/2 pair within themselves.
          const bool self_row = cv == 0 || (h % 2 == 0 && cv == -h / 2);
          if (cv > 0 || (self_row && cu > 0)) weight = 2.0;
        }
        one_sided.at(u, v) += weight * field.at(u, v);
      }
    }
    spatial = inverse_fft_complex(one_sided);
  }
  for (std::size_t i = 0; i < cm.amplitude.size(); ++i) cm.amplitude.pixels[i] = std::abs(spatial.coeffs[i]);
  const double peak = *std::max_element(cm.amplitude.pixels.begin(), cm.amplitude.pixels.end());
  if (peak > 0.0) {
    for (auto& v : cm.amplitude.pixels) v /= peak;
  }
  for (std::size_t i = 0; i < cm.amplitude.size(); ++i) {
    cm.map.bits[i] = peak > 0.0 && cm.amplitude.pixels[i] >= threshold_fraction;
  }
  return cm;
}

const std::vector<Rgb>& default_palette() {
  static const std::vector<Rgb> palette = {
      Rgb{255, 0, 0},   Rgb{0, 200, 0},   Rgb{0, 90, 255},  Rgb{255, 200, 0},
      Rgb{0, 220, 220}, Rgb{230, 0, 230}, Rgb{255, 120, 0}, Rgb{140, 70, 255},
  };
  return palette;
}

RgbImage overlay(const Image2D& base, const std::vector<ComponentMap>& maps, const std::vector<Rgb>& palette) {
  require(!palette.empty(), "overlay: empty palette");
  for (const auto& m : maps) require_same_dims(m.map.width, m.map.height, base.width, base.height, "overlay");
  Image2D gray = normalize_minmax(base);
  RgbImage out(base.width, base.height);
  std::vector<double> rgb(out.data.size());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = gray.pixels[i] * 255.0;
  }
  for (const auto& m : maps) {
    const Rgb& color = palette[static_cast<std::size_t>(m.color_index) % palette.size()];
    for (std::size_t i = 0; i < m.map.size(); ++i) {
      if (!m.map.bits[i]) continue;
      for (int c = 0; c < 3; ++c) rgb[3 * i + c] = 0.5 * rgb[3 * i + c] + 0.5 * color[c];
    }
  }
  for (std::size_t i = 0; i < rgb.size(); ++i) {
    out.data[i] = static_cast<std::uint8_t>(std::lround(std::clamp(rgb[i], 0.0, 255.0)));
  }
  return out;
}

}  // namespace temphase
