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

#include "detect.hpp"

#include <algorithm>
#include <cmath>

#include "fftcore.hpp"
#include "imageio.hpp"
#include "morphology.hpp"

namespace temphase {

BinaryMask threshold_mask(const Image2D& prob_map, double t) {
  require(t > 0.0 && t < 1.0, "threshold_mask: threshold must lie in (0, 1)");
  BinaryMask mask(prob_map.width, prob_map.height);
  for (std::size_t i = 0; i < prob_map.size(); ++i) mask.bits[i] = prob_map.pixels[i] >= t;
  return mask;
}

BinaryMask import_mask(const std::filesystem::path& path, int expected_w, int expected_h) {
  Image2D img = read_pgm(path);
  if (img.width != expected_w || img.height != expected_h) {
    fail(ErrorKind::kDimension, path.string() + ": mask is " + std::to_string(img.width) + "x" +
                                    std::to_string(img.height) + " but " + std::to_string(expected_w) + "x" +
                                    std::to_string(expected_h) + " was expected");
  }
  BinaryMask mask(img.width, img.height);
  for (std::size_t i = 0; i < img.size(); ++i) mask.bits[i] = to_byte(img.pixels[i]) >= 128;
  return mask;
}

BinaryMask detect_spots(const Image2D& fft_img, const DetectParams& params) {
  require(params.blur_sigma >= 0 && params.dc_exclusion_radius >= 0 && params.k_sigma >= 0 &&
              params.symmetry_tolerance >= 0 && params.min_blob_area >= 0,
          "detect_spots: parameters must be nonnegative");
  const int w = fft_img.width;
  const int h = fft_img.height;
  if (std::min(w, h) < 2.0 * params.dc_exclusion_radius) {
    fail(ErrorKind::kArgument, "detect_spots: image smaller than twice the DC exclusion radius");
  }
  const double cx = geometric_center(w);
  const double cy = geometric_center(h);

  Image2D blurred = gaussian_blur(fft_img, params.blur_sigma);

  // Radial background: median of each 1-px annulus.
  const int n_bands = static_cast<int>(std::hypot(cx, cy)) + 2;
  std::vector<int> band(blurred.size());
  std::vector<std::vector<double>> band_values(n_bands);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int b = static_cast<int>(std::hypot(x - cx, y - cy));
      band[static_cast<std::size_t>(y) * w + x] = b;
      band_values[b].push_back(blurred.at(x, y));
    }
  }
  std::vector<double> median(n_bands, 0.0);
  for (int b = 0; b < n_bands; ++b) {
    auto& v = band_values[b];
    if (v.empty()) continue;
    auto mid = v.begin() + v.size() / 2;
    std::nth_element(v.begin(), mid, v.end());
    median[b] = *mid;
  }

  std::vector<double> residual(blurred.size());
  std::vector<std::uint8_t> outside_dc(blurred.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      residual[i] = blurred.pixels[i] - median[band[i]];
      outside_dc[i] = std::hypot(x - cx, y - cy) > params.dc_exclusion_radius;
      if (outside_dc[i]) {
        sum += residual[i];
        sum_sq += residual[i] * residual[i];
        ++n;
      }
    }
  }
  BinaryMask candidate(w, h);
  if (n == 0) return candidate;
  const double mean = sum / n;
  const double stddev = std::sqrt(std::max(0.0, sum_sq / n - mean * mean));
  const double threshold = mean + params.k_sigma * stddev;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    candidate.bits[i] = outside_dc[i] && residual[i] > threshold;
  }

  LabelMap labels = label_components(candidate, Connectivity::kEight);
  std::vector<Blob> blobs = blob_stats(labels);
  std::vector<int> kept;
  for (int l = 1; l <= labels.count; ++l) {
    if (blobs[l].area >= params.min_blob_area) kept.push_back(l);
  }
  std::vector<std::uint8_t> keep(labels.count + 1, 0);
  for (int l : kept) {
    const double px = 2.0 * cx - blobs[l].cx;
    const double py = 2.0 * cy - blobs[l].cy;
    for (int m : kept) {
      if (m == l) continue;
      if (std::hypot(blobs[m].cx - px, blobs[m].cy - py) <= params.symmetry_tolerance) {
        keep[l] = 1;
        break;
      }
    }
  }
  BinaryMask out(w, h);
  for (std::size_t i = 0; i < out.size(); ++i) out.bits[i] = keep[labels.labels[i]] && labels.labels[i] != 0;
  return out;
}

Image2D crop_half(const Image2D& img) {
  require(img.height % 2 == 0, "crop_half: height must be even");
  Image2D out(img.width, img.height / 2);
  out.pixel_size_nm = img.pixel_size_nm;
  std::copy_n(img.pixels.begin(), out.size(), out.pixels.begin());
  return out;
}

BinaryMask crop_half(const BinaryMask& mask) {
  require(mask.height % 2 == 0, "crop_half: height must be even");
  BinaryMask out(mask.width, mask.height / 2);
  std::copy_n(mask.bits.begin(), out.size(), out.bits.begin());
  return out;
}

BinaryMask reconstruct_full(const BinaryMask& half) {
  const int w = half.width;
  const int h = half.height * 2;
  BinaryMask full(w, h);
  std::copy(half.bits.begin(), half.bits.end(), full.bits.begin());
  for (int y = 0; y < half.height; ++y) {
    for (int x = 0; x < w; ++x) {
      if (half.at(x, y)) full.set(w - 1 - x, h - 1 - y);
    }
  }
  return full;
}

double dice(const BinaryMask& a, const BinaryMask& b) {
  require_same_dims(a.width, a.height, b.width, b.height, "dice");
  std::uint64_t inter = 0;
  std::uint64_t na = 0;
  std::uint64_t nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a.bits[i] != 0;
    nb += b.bits[i] != 0;
    inter += a.bits[i] && b.bits[i];
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nb);
}

Confusion confusion(const BinaryMask& pred, const BinaryMask& truth) {
  require_same_dims(pred.width, pred.height, truth.width, truth.height, "confusion");
  Confusion c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred.bits[i] != 0;
    const bool t = truth.bits[i] != 0;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace temphase
