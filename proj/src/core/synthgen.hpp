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
#include <optional>
#include <random>
#include <vector>

#include "image.hpp"

namespace temphase {

/// Deterministic across platforms: mt19937_64 is fully specified, and the
/// distributions below are implemented here rather than taken from <random>.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct FringeRegion {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

struct FringeSpec {
  double d_angstrom = 0.0;
  double orientation_rad = 0.0;
  double amplitude = 1.0;
  double phase = 0.0;
  /// Full field when unset.
  std::optional<FringeRegion> region;
};

/// Expected spot pair of one fringe in the shifted, uncropped spectrum.
struct SpotTruth {
  std::size_t fringe = 0;
  double x = 0.0;
  double y = 0.0;
  double partner_x = 0.0;
  double partner_y = 0.0;
  double radius_px = 0.0;
  double period_px = 0.0;
};

struct SynthLattice {
  Image2D image;
  std::vector<SpotTruth> truth;
};

SynthLattice synth_lattice(const std::vector<FringeSpec>& specs, int width, int height, double pixel_size_nm,
                           double noise_sigma, std::uint64_t seed = 0);

struct SpotSpec {
  double x = 0.0;
  double y = 0.0;
  double sigma_px = 3.0;
  double amplitude = 8.0;
  /// Ground-truth disk radius; 0 selects 3 * sigma_px.
  double truth_radius = 0.0;
};

struct SpotBackground {
  double level = 4.0;
  double decay_px = 60.0;
  double noise_sigma = 1.0;
};

struct SynthSpots {
  Image2D image;
  BinaryMask mask;
};

/// Gaussian bumps at each spot and its point reflection about the geometric
/// centre, over a radially decaying background plus Gaussian noise.
SynthSpots synth_fft_spots(const std::vector<SpotSpec>& spots, int width, int height,
                           const SpotBackground& background, std::uint64_t seed = 0);

struct AugmentParams {
  double rotation_deg = 0.2;
  double shift_fraction = 0.05;
  double shear_deg = 0.05;
  double zoom_fraction = 0.05;
  std::uint64_t seed = 0;
};

/// One concrete affine transform. Positive rotation turns +x toward +y;
/// zoom > 1 magnifies; shift moves content right.
struct AffineDraw {
  double rotation_deg = 0.0;
  double shift_x_px = 0.0;
  double shear_deg = 0.0;
  double zoom_x = 1.0;
  double zoom_y = 1.0;
};

AffineDraw draw_affine(const AugmentParams& params, int width, Rng& rng);
/// Bilinear sampling about the geometric centre with reflection padding.
Image2D apply_affine(const Image2D& img, const AffineDraw& draw);
BinaryMask apply_affine(const BinaryMask& mask, const AffineDraw& draw);
Image2D augment(const Image2D& img, const AugmentParams& params);

struct TrainingSource {
  Image2D image;
  BinaryMask mask;
};

struct ExportParams {
  AugmentParams augment;
  int target_size = 1024;
  bool half_crop = true;
};

/// Writes image_NNNN.pgm / mask_NNNN.pgm pairs and manifest.csv.
void export_training_set(const std::vector<TrainingSource>& sources, int count,
                         const std::filesystem::path& out_dir, const ExportParams& params);

}  // namespace temphase
