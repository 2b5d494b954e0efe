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

#include "phase.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace temphase {

void ScaleChain::validate() const {
  require(original_size > 0 && crop_size > 0 && final_size > 0, "scale chain sizes must be positive");
  require(final_size <= crop_size && crop_size <= original_size, "scale chain requires final <= crop <= original");
  require(pixel_size_nm > 0.0, "pixel size must be positive");
}

double ScaleChain::dc_position() const {
  const double in_crop = dc_bin(crop_size);
  return (in_crop + 0.5) * final_size / crop_size - 0.5;
}

double ScaleChain::center() const {
  return mode == ScaleMode::kFixedCenter ? geometric_center(final_size) : dc_position();
}

double ScaleChain::radius(double x, double y) const {
  const double c = center();
  return std::hypot(x - c, y - c);
}

double ScaleChain::reciprocal_pitch() const {
  return spectrum_scale() / (original_size * pixel_size_nm);
}

double ScaleChain::to_spectrum(double final_coord) const {
  const double in_crop = (final_coord + 0.5) * spectrum_scale() - 0.5;
  return in_crop + (dc_bin(original_size) - dc_bin(crop_size));
}

double d_spacing_at_radius(double r, const ScaleChain& chain) {
  if (!(r > 0.0)) fail(ErrorKind::kDomain, "d-spacing undefined at the zero-frequency position");
  if (chain.mode == ScaleMode::kFixedCenter) return 10.0 * chain.original_size * chain.pixel_size_nm / r;
  return 10.0 / (r * chain.reciprocal_pitch());
}

double d_spacing(double x, double y, const ScaleChain& chain) {
  return d_spacing_at_radius(chain.radius(x, y), chain);
}

DiffractionProfile radial_profile(const Image2D& fft_img, const ScaleChain& chain, const BinaryMask* mask) {
  require(fft_img.width == fft_img.height, "radial_profile: FFT image must be square");
  if (mask) require_same_dims(mask->width, mask->height, fft_img.width, fft_img.height, "radial_profile");
  const double c = chain.center();
  const int max_band = static_cast<int>(std::floor(std::min(c, fft_img.width - 1 - c)));
  std::vector<double> sums(max_band + 1, 0.0);
  std::vector<int> counts(max_band + 1, 0);
  for (int y = 0; y < fft_img.height; ++y) {
    for (int x = 0; x < fft_img.width; ++x) {
      const int b = static_cast<int>(std::lround(std::hypot(x - c, y - c)));
      if (b < 1 || b > max_band) continue;
      ++counts[b];
      if (!mask || mask->at(x, y)) sums[b] += fft_img.at(x, y);
    }
  }
  DiffractionProfile profile;
  for (int b = 1; b <= max_band; ++b) {
    profile.bands.push_back({b, d_spacing_at_radius(b, chain), sums[b], counts[b]});
  }
  return profile;
}

std::vector<ProfilePeak> find_peaks(const DiffractionProfile& profile, double min_prominence_fraction,
                                    int dc_exclusion_bands) {
  require(!profile.bands.empty(), "find_peaks: empty profile");
  const auto& b = profile.bands;
  const int n = static_cast<int>(b.size());
  auto [lo, hi] = std::minmax_element(b.begin(), b.end(), [](const ProfileBand& x, const ProfileBand& y) {
    return x.intensity < y.intensity;
  });
  const double range = hi->intensity - lo->intensity;
  std::vector<ProfilePeak> peaks;
  if (!(range > 0.0)) return peaks;
  const double min_prom = min_prominence_fraction * range;

  int i = 1;
  while (i < n - 1) {
    if (b[i].intensity <= b[i - 1].intensity) {
      ++i;
      continue;
    }
    // Walk across a plateau; it is a peak only if it then drops.
    int j = i;
    while (j + 1 < n && b[j + 1].intensity == b[i].intensity) ++j;
    if (j + 1 >= n || b[j + 1].intensity > b[i].intensity) {
      i = j + 1;
      continue;
    }
    const int peak = (i + j) / 2;
    const double v = b[peak].intensity;
    double left_min = v;
    for (int k = i - 1; k >= 0 && b[k].intensity <= v; --k) left_min = std::min(left_min, b[k].intensity);
    double right_min = v;
    for (int k = j + 1; k < n && b[k].intensity <= v; ++k) right_min = std::min(right_min, b[k].intensity);
    const double prominence = v - std::max(left_min, right_min);
    if (b[peak].radius > dc_exclusion_bands && prominence >= min_prom && prominence > 0.0) {
      peaks.push_back({b[peak].radius, b[peak].d_angstrom, v, prominence});
    }
    i = j + 1;
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const ProfilePeak& x, const ProfilePeak& y) { return x.intensity > y.intensity; });
  return peaks;
}

double match_percent(double d_calc, double d_ref, MatchMetric metric) {
  require(d_ref > 0.0, "match_percent: reference d-spacing must be positive");
  if (metric == MatchMetric::kRatio) return 100.0 * std::min(d_calc / d_ref, 1.0);
  return 100.0 * (1.0 - std::abs(d_calc - d_ref) / d_ref);
}

MatchResult match_components(const std::vector<Feature>& features, const ScaleChain& chain, const DSpacingDB& db,
                             const MatchParams& params) {
  require(!db.empty(), "match_components: empty d-spacing database");
  require(params.rel_tolerance >= 0.0, "match_components: tolerance must be nonnegative");
  MatchResult result;
  struct Group {
    std::vector<double> d;
    std::vector<int> ids;
    double diameter_sum = 0.0;
    std::int64_t pvc = 0;
  };
  std::map<std::size_t, Group> groups;
  for (const auto& f : features) {
    const double r = chain.radius(f.cx, f.cy);
    if (!(r > 0.0)) {
      result.unassigned.push_back({f.id, std::nullopt});
      continue;
    }
    const double d = d_spacing_at_radius(r, chain);
    std::size_t best = 0;
    double best_dev = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < db.entries.size(); ++e) {
      const double dev = std::abs(d - db.entries[e].d_angstrom) / db.entries[e].d_angstrom;
      if (dev < best_dev) {
        best_dev = dev;
        best = e;
      }
    }
    if (best_dev > params.rel_tolerance) {
      result.unassigned.push_back({f.id, d});
      continue;
    }
    Group& g = groups[best];
    g.d.push_back(d);
    g.ids.push_back(f.id);
    g.diameter_sum += f.equivalent_diameter;
    g.pvc += f.pixel_value_count;
  }
  for (auto& [entry_idx, g] : groups) {
    const auto& entry = db.entries[entry_idx];
    ComponentMatch m;
    m.name = entry.name;
    m.hkl = entry.hkl;
    m.d_ref = entry.d_angstrom;
    double sum = 0.0;
    for (double d : g.d) sum += d;
    m.d_calc = sum / g.d.size();
    m.match_pct = match_percent(m.d_calc, m.d_ref, params.metric);
    m.feature_ids = g.ids;
    m.feature_size_px = g.diameter_sum / g.ids.size();
    m.pixel_value_count = g.pvc;
    result.components.push_back(std::move(m));
  }
  std::stable_sort(result.components.begin(), result.components.end(),
                   [](const ComponentMatch& a, const ComponentMatch& b) {
                     if (a.d_calc != b.d_calc) return a.d_calc > b.d_calc;
                     return std::tie(a.name, a.hkl) < std::tie(b.name, b.hkl);
                   });
  return result;
}

}  // namespace temphase
