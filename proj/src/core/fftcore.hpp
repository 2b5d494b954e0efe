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

#include <complex>
#include <vector>

#include "image.hpp"

namespace temphase {

using Complex = std::complex<double>;

/// 2D spectrum with the zero-frequency term at (0,0). The forward transform
/// carries the 1/(M*N) factor; the inverse is an unscaled sum.
struct ComplexField {
  int width = 0;
  int height = 0;
  std::vector<Complex> coeffs;

  ComplexField() = default;
  ComplexField(int w, int h) : width(w), height(h) {
    coeffs.assign(static_cast<std::size_t>(w) * h, Complex{});
  }
  Complex& at(int u, int v) { return coeffs[static_cast<std::size_t>(v) * width + u]; }
  const Complex& at(int u, int v) const { return coeffs[static_cast<std::size_t>(v) * width + u]; }
};

struct EnhanceParams {
  double gamma = 2.0;
  double gain = 1.8;
};

struct InverseDiagnostics {
  double max_abs_real = 0.0;
  double max_abs_imag = 0.0;
  /// Set when max|imag| > 1e-4 * max|real|.
  bool imag_residue = false;
};

ComplexField forward_fft(const Image2D& img);
/// Complex spatial result of the unscaled inverse sum.
ComplexField inverse_fft_complex(const ComplexField& field);
Image2D inverse_fft(const ComplexField& field, InverseDiagnostics* diag = nullptr);

/// Moves the zero-frequency bin from (0,0) to (W/2, H/2).
ComplexField fft_shift(const ComplexField& field);
Image2D fft_shift(const Image2D& img);

/// |F| after shift, without log or normalization.
Image2D magnitude_shifted(const ComplexField& field);
/// log(1 + |F|) after shift, min-max normalized to [0,1].
Image2D log_magnitude(const ComplexField& field);

/// Rescales to [0,1]; a constant image maps to zeros.
Image2D normalize_minmax(const Image2D& img);

Image2D center_crop(const Image2D& img, int target_w, int target_h);
/// Bilinear with pixel-centre alignment.
Image2D resize(const Image2D& img, int target_w, int target_h);
/// Separable, radius ceil(3*sigma), half-sample reflection at the borders.
Image2D gaussian_blur(const Image2D& img, double sigma);

/// Multiplies by exp(gamma * (r/R - 1)) (r from the geometric centre, R the
/// centre-to-corner distance), applies gain, clamps to [0,1].
Image2D enhance(const Image2D& img, const EnhanceParams& params);

}  // namespace temphase
