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

#include "fftcore.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace temphase {
namespace {

static_assert(sizeof(Complex) == sizeof(fftw_complex));

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (w, h, sign) and kept for the
// process lifetime.
class PlanCache {
 public:
  fftw_plan get(int w, int h, int sign) {
    std::lock_guard lock(mu_);
    auto key = std::make_tuple(w, h, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_2d(h, w, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (!p) fail(ErrorKind::kArgument, "FFTW could not plan a " + std::to_string(w) + "x" + std::to_string(h) + " transform");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(const ComplexField& in, ComplexField& out, int sign) {
  fftw_plan p = plan_cache().get(in.width, in.height, sign);
  // fftw_execute_dft takes a non-const input; the plan is out-of-place so it is not modified.
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.coeffs.data())),
                   reinterpret_cast<fftw_complex*>(out.coeffs.data()));
}

template <typename T>
std::vector<T> shift_buffer(const std::vector<T>& src, int w, int h) {
  std::vector<T> dst(src.size());
  const int sx = w / 2;
  const int sy = h / 2;
  for (int y = 0; y < h; ++y) {
    const int ty = (y + sy) % h;
    for (int x = 0; x < w; ++x) {
      dst[static_cast<std::size_t>(ty) * w + (x + sx) % w] = src[static_cast<std::size_t>(y) * w + x];
    }
  }
  return dst;
}

// scipy.ndimage "reflect": d c b a | a b c d | d c b a
int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

}  // namespace

ComplexField forward_fft(const Image2D& img) {
  ComplexField in(img.width, img.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (!std::isfinite(img.pixels[i])) fail(ErrorKind::kArgument, "forward_fft: non-finite pixel");
    in.coeffs[i] = img.pixels[i];
  }
  ComplexField out(img.width, img.height);
  execute(in, out, FFTW_FORWARD);
  const double scale = 1.0 / (static_cast<double>(img.width) * img.height);
  for (auto& c : out.coeffs) c *= scale;
  return out;
}

ComplexField inverse_fft_complex(const ComplexField& field) {
  ComplexField out(field.width, field.height);
  execute(field, out, FFTW_BACKWARD);
  return out;
}

Image2D inverse_fft(const ComplexField& field, InverseDiagnostics* diag) {
  ComplexField spatial = inverse_fft_complex(field);
  Image2D img(field.width, field.height);
  double max_re = 0.0;
  double max_im = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    img.pixels[i] = spatial.coeffs[i].real();
    max_re = std::max(max_re, std::abs(spatial.coeffs[i].real()));
    max_im = std::max(max_im, std::abs(spatial.coeffs[i].imag()));
  }
  if (diag) {
    diag->max_abs_real = max_re;
    diag->max_abs_imag = max_im;
    diag->imag_residue = max_im > 1e-4 * max_re;
  }
  return img;
}

ComplexField fft_shift(const ComplexField& field) {
  ComplexField out;
  out.width = field.width;
  out.height = field.height;
  out.coeffs = shift_buffer(field.coeffs, field.width, field.height);
  return out;
}

Image2D fft_shift(const Image2D& img) {
  Image2D out = img;
  out.pixels = shift_buffer(img.pixels, img.width, img.height);
  return out;
}

Image2D magnitude_shifted(const ComplexField& field) {
  Image2D mag(field.width, field.height);
  for (std::size_t i = 0; i < mag.size(); ++i) mag.pixels[i] = std::abs(field.coeffs[i]);
  return fft_shift(mag);
}

Image2D normalize_minmax(const Image2D& img) {
  Image2D out = img;
  auto [lo, hi] = std::minmax_element(img.pixels.begin(), img.pixels.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) {
    std::fill(out.pixels.begin(), out.pixels.end(), 0.0);
    return out;
  }
  const double base = *lo;
  for (auto& v : out.pixels) v = (v - base) / range;
  return out;
}

Image2D log_magnitude(const ComplexField& field) {
  Image2D mag = magnitude_shifted(field);
  for (auto& v : mag.pixels) v = std::log1p(v);
  return normalize_minmax(mag);
}

Image2D center_crop(const Image2D& img, int target_w, int target_h) {
  if (target_w > img.width || target_h > img.height || target_w < 1 || target_h < 1) {
    fail(ErrorKind::kArgument, "center_crop: target " + std::to_string(target_w) + "x" + std::to_string(target_h) +
                                   " does not fit in " + std::to_string(img.width) + "x" + std::to_string(img.height));
  }
  const int x0 = img.width / 2 - target_w / 2;
  const int y0 = img.height / 2 - target_h / 2;
  Image2D out(target_w, target_h);
  out.pixel_size_nm = img.pixel_size_nm;
  for (int y = 0; y < target_h; ++y) {
    std::copy_n(&img.pixels[static_cast<std::size_t>(y + y0) * img.width + x0], target_w,
                &out.pixels[static_cast<std::size_t>(y) * target_w]);
  }
  return out;
}

Image2D resize(const Image2D& img, int target_w, int target_h) {
  require(target_w >= 2 && target_h >= 2, "resize: target dimensions must be at least 2");
  if (target_w == img.width && target_h == img.height) return img;
  Image2D out(target_w, target_h);
  out.pixel_size_nm = img.pixel_size_nm;
  const double sx = static_cast<double>(img.width) / target_w;
  const double sy = static_cast<double>(img.height) / target_h;
  for (int y = 0; y < target_h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double ty = fy - y0;
    for (int x = 0; x < target_w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double tx = fx - x0;
      const double top = img.at(x0, y0) * (1 - tx) + img.at(x1, y0) * tx;
      const double bottom = img.at(x0, y1) * (1 - tx) + img.at(x1, y1) * tx;
      out.at(x, y) = top * (1 - ty) + bottom * ty;
    }
  }
  return out;
}

Image2D gaussian_blur(const Image2D& img, double sigma) {
  require(sigma >= 0.0, "gaussian_blur: sigma must be nonnegative");
  if (sigma == 0.0) return img;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
    sum += kernel[k + radius];
  }
  for (auto& k : kernel) k /= sum;

  const int w = img.width;
  const int h = img.height;
  Image2D tmp(w, h);
  std::vector<double> line;
  for (int y = 0; y < h; ++y) {
    line.resize(w + 2 * radius);
    for (int i = -radius; i < w + radius; ++i) line[i + radius] = img.at(reflect_index(i, w), y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = 0; k <= 2 * radius; ++k) acc += kernel[k] * line[x + k];
      tmp.at(x, y) = acc;
    }
  }
  Image2D out(w, h);
  out.pixel_size_nm = img.pixel_size_nm;
  for (int x = 0; x < w; ++x) {
    line.resize(h + 2 * radius);
    for (int i = -radius; i < h + radius; ++i) line[i + radius] = tmp.at(x, reflect_index(i, h));
    for (int y = 0; y < h; ++y) {
      double acc = 0.0;
      for (int k = 0; k <= 2 * radius; ++k) acc += kernel[k] * line[y + k];
      out.at(x, y) = acc;
    }
  }
  return out;
}

Image2D enhance(const Image2D& img, const EnhanceParams& params) {
  require(params.gamma >= 0.0, "enhance: gamma must be nonnegative");
  require(params.gain > 0.0, "enhance: gain must be positive");
  const double cx = geometric_center(img.width);
  const double cy = geometric_center(img.height);
  const double corner = std::hypot(cx, cy);
  Image2D out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double r = std::hypot(x - cx, y - cy);
      const double factor = corner > 0.0 ? std::exp(params.gamma * (r / corner - 1.0)) : 1.0;
      out.at(x, y) = std::clamp(params.gain * img.at(x, y) * factor, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace temphase
