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

#include "synthgen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "detect.hpp"
#include "fftcore.hpp"
#include "imageio.hpp"

namespace temphase {
namespace {

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Half-sample reflection of a continuous coordinate into [-0.5, n - 0.5].
double reflect_coord(double f, int n) {
  const double period = 2.0 * n;
  double g = std::fmod(f + 0.5, period);
  if (g < 0) g += period;
  if (g > n) g = period - g;
  return g - 0.5;
}

double sample_bilinear(const Image2D& img, double fx, double fy) {
  fx = std::clamp(reflect_coord(fx, img.width), 0.0, img.width - 1.0);
  fy = std::clamp(reflect_coord(fy, img.height), 0.0, img.height - 1.0);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const double tx = fx - x0;
  const double ty = fy - y0;
  return (img.at(x0, y0) * (1 - tx) + img.at(x1, y0) * tx) * (1 - ty) +
         (img.at(x0, y1) * (1 - tx) + img.at(x1, y1) * tx) * ty;
}

bool is_identity(const AffineDraw& d) {
  return d.rotation_deg == 0.0 && d.shift_x_px == 0.0 && d.shear_deg == 0.0 && d.zoom_x == 1.0 && d.zoom_y == 1.0;
}

}  // namespace

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Rng::normal(double mean, double stddev) {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return mean + stddev * z;
  }
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = uniform(0.0, 1.0);
  const double u2 = uniform(0.0, 1.0);
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SynthLattice synth_lattice(const std::vector<FringeSpec>& specs, int width, int height, double pixel_size_nm,
                           double noise_sigma, std::uint64_t seed) {
  require(width >= 2 && height >= 2, "synth_lattice: dimensions must be at least 2");
  require(pixel_size_nm > 0.0, "synth_lattice: pixel size must be positive");
  require(noise_sigma >= 0.0, "synth_lattice: noise sigma must be nonnegative");
  SynthLattice out;
  out.image = Image2D(width, height);
  out.image.pixel_size_nm = pixel_size_nm;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    require(s.d_angstrom > 0.0 && s.amplitude > 0.0, "synth_lattice: d-spacing and amplitude must be positive");
    const double period = s.d_angstrom / (10.0 * pixel_size_nm);
    if (!(period > 2.0 && period < std::min(width, height) / 2.0)) {
      fail(ErrorKind::kArgument, "synth_lattice: d = " + std::to_string(s.d_angstrom) + " A is a period of " +
                                     std::to_string(period) + " px, outside (2, min(dims)/2)");
    }
    const double kx = std::cos(s.orientation_rad) / period;
    const double ky = std::sin(s.orientation_rad) / period;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (s.region && std::hypot(x - s.region->cx, y - s.region->cy) > s.region->radius) continue;
        out.image.at(x, y) += s.amplitude * std::cos(2.0 * std::numbers::pi * (x * kx + y * ky) + s.phase);
      }
    }
    SpotTruth t;
    t.fringe = i;
    t.period_px = period;
    const double u = width * kx;
    const double v = height * ky;
    t.x = dc_bin(width) + u;
    t.y = dc_bin(height) + v;
    t.partner_x = dc_bin(width) - u;
    t.partner_y = dc_bin(height) - v;
    t.radius_px = std::hypot(u, v);
    out.truth.push_back(t);
  }
  if (noise_sigma > 0.0) {
    Rng rng(seed);
    for (auto& p : out.image.pixels) p += rng.normal(0.0, noise_sigma);
  }
  return out;
}

SynthSpots synth_fft_spots(const std::vector<SpotSpec>& spots, int width, int height,
                           const SpotBackground& background, std::uint64_t seed) {
  require(background.decay_px > 0.0 && background.noise_sigma >= 0.0, "synth_fft_spots: bad background");
  SynthSpots out{Image2D(width, height), BinaryMask(width, height)};
  const double cx = geometric_center(width);
  const double cy = geometric_center(height);
  Rng rng(seed);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = background.level * std::exp(-std::hypot(x - cx, y - cy) / background.decay_px);
      if (background.noise_sigma > 0.0) v += rng.normal(0.0, background.noise_sigma);
      out.image.at(x, y) = v;
    }
  }
  for (const auto& s : spots) {
    require(s.sigma_px > 0.0, "synth_fft_spots: spot sigma must be positive");
    const double truth_r = s.truth_radius > 0.0 ? s.truth_radius : 3.0 * s.sigma_px;
    for (auto [sx, sy] : {std::pair{s.x, s.y}, std::pair{2.0 * cx - s.x, 2.0 * cy - s.y}}) {
      const int reach = static_cast<int>(std::ceil(std::max(5.0 * s.sigma_px, truth_r)));
      for (int y = std::max(0, static_cast<int>(sy) - reach); y <= std::min(height - 1, static_cast<int>(sy) + reach); ++y) {
        for (int x = std::max(0, static_cast<int>(sx) - reach); x <= std::min(width - 1, static_cast<int>(sx) + reach); ++x) {
          const double r2 = (x - sx) * (x - sx) + (y - sy) * (y - sy);
          out.image.at(x, y) += s.amplitude * std::exp(-0.5 * r2 / (s.sigma_px * s.sigma_px));
          if (std::sqrt(r2) <= truth_r) out.mask.set(x, y);
        }
      }
    }
  }
  return out;
}

AffineDraw draw_affine(const AugmentParams& params, int width, Rng& rng) {
  require(params.rotation_deg >= 0 && params.shift_fraction >= 0 && params.shear_deg >= 0 && params.zoom_fraction >= 0,
          "augment: ranges must be nonnegative");
  AffineDraw d;
  d.rotation_deg = rng.uniform(-params.rotation_deg, params.rotation_deg);
  d.shift_x_px = rng.uniform(-params.shift_fraction, params.shift_fraction) * width;
  d.shear_deg = rng.uniform(-params.shear_deg, params.shear_deg);
  d.zoom_x = rng.uniform(1.0 - params.zoom_fraction, 1.0 + params.zoom_fraction);
  d.zoom_y = rng.uniform(1.0 - params.zoom_fraction, 1.0 + params.zoom_fraction);
  return d;
}

Image2D apply_affine(const Image2D& img, const AffineDraw& d) {
  if (is_identity(d)) return img;
  require(d.zoom_x > 0.0 && d.zoom_y > 0.0, "apply_affine: zoom must be positive");
  // Forward map A = R * Shear * Zoom about the centre, then shift.
  const double th = deg2rad(d.rotation_deg);
  const double sh = std::tan(deg2rad(d.shear_deg));
  const double c = std::cos(th);
  const double s = std::sin(th);
  const double a00 = c * d.zoom_x;
  const double a01 = (c * sh - s) * d.zoom_y;
  const double a10 = s * d.zoom_x;
  const double a11 = (s * sh + c) * d.zoom_y;
  const double det = a00 * a11 - a01 * a10;
  const double i00 = a11 / det;
  const double i01 = -a01 / det;
  const double i10 = -a10 / det;
  const double i11 = a00 / det;
  const double cx = geometric_center(img.width);
  const double cy = geometric_center(img.height);
  Image2D out(img.width, img.height);
  out.pixel_size_nm = img.pixel_size_nm;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double px = x - cx - d.shift_x_px;
      const double py = y - cy;
      out.at(x, y) = sample_bilinear(img, cx + i00 * px + i01 * py, cy + i10 * px + i11 * py);
    }
  }
  return out;
}

BinaryMask apply_affine(const BinaryMask& mask, const AffineDraw& draw) {
  Image2D as_img(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.size(); ++i) as_img.pixels[i] = mask.bits[i] ? 1.0 : 0.0;
  return threshold_mask(apply_affine(as_img, draw), 0.5);
}

Image2D augment(const Image2D& img, const AugmentParams& params) {
  Rng rng(params.seed);
  return apply_affine(img, draw_affine(params, img.width, rng));
}

void export_training_set(const std::vector<TrainingSource>& sources, int count,
                         const std::filesystem::path& out_dir, const ExportParams& params) {
  require(!sources.empty(), "export_training_set: need at least one source image");
  require(count >= 0, "export_training_set: count must be nonnegative");
  require(params.target_size >= 2 && (!params.half_crop || params.target_size % 2 == 0),
          "export_training_set: target size must be even and at least 2");
  for (const auto& s : sources) {
    require_same_dims(s.image.width, s.image.height, s.mask.width, s.mask.height, "export_training_set");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create '" + out_dir.string() + "': " + ec.message());

  std::ofstream manifest(out_dir / "manifest.csv", std::ios::trunc);
  if (!manifest) fail(ErrorKind::kIo, "cannot write manifest in '" + out_dir.string() + "'");
  manifest << "file,mask_file,source,seed,rotation_deg,shift_x_px,shear_deg,zoom_x,zoom_y\n";
  for (int i = 0; i < count; ++i) {
    const std::size_t src = static_cast<std::size_t>(i) % sources.size();
    const std::uint64_t seed = derive_seed(params.augment.seed, static_cast<std::uint64_t>(i));
    Rng rng(seed);
    const AffineDraw d = draw_affine(params.augment, sources[src].image.width, rng);

    Image2D img = resize(normalize_minmax(apply_affine(sources[src].image, d)), params.target_size, params.target_size);
    Image2D mask_img(sources[src].mask.width, sources[src].mask.height);
    BinaryMask warped = apply_affine(sources[src].mask, d);
    for (std::size_t k = 0; k < warped.size(); ++k) mask_img.pixels[k] = warped.bits[k] ? 1.0 : 0.0;
    BinaryMask mask = threshold_mask(resize(mask_img, params.target_size, params.target_size), 0.5);
    if (params.half_crop) {
      img = crop_half(img);
      mask = crop_half(mask);
    }
    char name[64];
    std::snprintf(name, sizeof name, "image_%04d.pgm", i);
    const std::string image_file = name;
    std::snprintf(name, sizeof name, "mask_%04d.pgm", i);
    const std::string mask_file = name;
    write_pgm(img, out_dir / image_file);
    write_pgm(mask, out_dir / mask_file);

    char row[256];
    std::snprintf(row, sizeof row, "%s,%s,%zu,%llu,%.6f,%.6f,%.6f,%.6f,%.6f\n", image_file.c_str(), mask_file.c_str(),
                  src, static_cast<unsigned long long>(seed), d.rotation_deg, d.shift_x_px, d.shear_deg, d.zoom_x,
                  d.zoom_y);
    manifest << row;
  }
  if (!manifest) fail(ErrorKind::kIo, "manifest write failed");
}

}  // namespace temphase
