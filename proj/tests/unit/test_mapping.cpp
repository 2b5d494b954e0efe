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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fftcore.hpp"
#include "imageio.hpp"
#include "mapping.hpp"
#include "synthgen.hpp"
#include "test_util.hpp"

using namespace temphase;

namespace {

Image2D fringe(int n, double period, double theta = 0.0) {
  Image2D img(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      img.at(x, y) = std::cos(2 * std::numbers::pi * (x * std::cos(theta) + y * std::sin(theta)) / period);
  return img;
}

Feature feature(double cx, double cy, double diameter) {
  Feature f;
  f.id = 1;
  f.cx = cx;
  f.cy = cy;
  f.equivalent_diameter = diameter;
  return f;
}

}  // namespace

TEST_SUITE("mapping") {
  TEST_CASE("feature mask draws the spot and its reflection") {
    auto m = build_feature_mask({feature(300, 400, 20.03)}, 1024, 1024, 1.0, 511.5, 511.5);
    CHECK(m.at(300, 400));
    CHECK(m.at(723, 623));
    CHECK(m.at(310, 400));
    CHECK_FALSE(m.at(311, 400));
    const double per_disk = m.count() / 2.0;
    CHECK(std::abs(per_disk - std::numbers::pi * 100.0) < 0.05 * std::numbers::pi * 100.0);
    CHECK(build_feature_mask({feature(300, 400, 20.03)}, 1024, 1024, 0.0, 511.5, 511.5).empty());
  }

  TEST_CASE("spectrum mask stays Hermitian about the DC bin") {
    ScaleChain chain{64, 0.02, 64, 64, ScaleMode::kGeneralized};
    auto m = feature_mask_in_spectrum({feature(40, 30, 3.0)}, chain, 1.0);
    for (int y = 1; y < 64; ++y)
      for (int x = 1; x < 64; ++x) CHECK(m.at(x, y) == m.at(64 - x, 64 - y));
    CHECK(m.at(40, 30));
    CHECK(m.at(24, 34));
  }

  TEST_CASE("single-tone map covers the full field") {
    const int n = 64;
    BinaryMask mask(n, n);
    mask.set(40, 32);
    mask.set(24, 32);
    auto cm = component_map(forward_fft(fringe(n, 8.0)), mask);
    CHECK_FALSE(cm.empty_mask);
    CHECK(cm.map.count() >= 0.99 * n * n);
  }

  TEST_CASE("envelope map covers a rotated fringe") {
    const int n = 128;
    auto field = forward_fft(fringe(n, 8.0, 0.35));
    auto mag = magnitude_shifted(field);
    BinaryMask mask(n, n);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        if (!(x == n / 2 && y == n / 2) && mag.at(x, y) > 0.02) mask.set(x, y);
    auto cm = component_map(field, mask);
    // Off-grid frequencies leak past the mask, which rounds the envelope at the borders.
    CHECK(cm.map.count() >= 0.95 * n * n);
  }

  TEST_CASE("full mask in magnitude mode thresholds the original image") {
    auto img = testutil::random_image(32, 32, 4, -1.0, 1.0);
    BinaryMask all(32, 32);
    for (auto& b : all.bits) b = 1;
    auto cm = component_map(forward_fft(img), all, 0.35, MapMode::kMagnitude);
    double peak = 0.0;
    for (double v : img.pixels) peak = std::max(peak, std::abs(v));
    for (std::size_t i = 0; i < img.size(); ++i) {
      const double a = std::abs(img.pixels[i]);
      if (std::abs(a - 0.35 * peak) < 1e-9) continue;
      CHECK((cm.map.bits[i] != 0) == (a >= 0.35 * peak));
    }
  }

  TEST_CASE("empty mask gives an empty map") {
    auto cm = component_map(forward_fft(fringe(16, 4.0)), BinaryMask(16, 16));
    CHECK(cm.empty_mask);
    CHECK(cm.map.empty());
  }

  TEST_CASE("masked inverse is linear over disjoint masks") {
    const int n = 32;
    auto F = forward_fft(testutil::random_image(n, n, 12));
    BinaryMask a(n, n), b(n, n), u(n, n);
    Rng rng(3);
    for (int i = 0; i < n * n; ++i) {
      const double r = rng.uniform(0, 1);
      a.bits[i] = r < 0.3;
      b.bits[i] = r >= 0.3 && r < 0.6;
      u.bits[i] = a.bits[i] | b.bits[i];
    }
    auto ia = masked_inverse(F, a), ib = masked_inverse(F, b), iu = masked_inverse(F, u);
    for (std::size_t i = 0; i < iu.coeffs.size(); ++i) CHECK(std::abs(iu.coeffs[i] - (ia.coeffs[i] + ib.coeffs[i])) < 1e-12);
  }

  TEST_CASE("overlay blending") {
    Image2D base(4, 1);
    base.pixels = {0.0, 1.0, 2.0, 4.0};
    auto gray = overlay(base, {});
    for (int x = 0; x < 4; ++x) {
      const auto* p = gray.px(x, 0);
      CHECK(p[0] == p[1]);
      CHECK(p[1] == p[2]);
      CHECK(p[0] == to_byte(base.pixels[x] / 4.0));
    }

    const std::vector<Rgb> palette = {{255, 0, 0}, {0, 0, 255}};
    ComponentMap all;
    all.map = BinaryMask(4, 1);
    for (auto& b : all.map.bits) b = 1;
    auto red = overlay(base, {all}, palette);
    for (int x = 0; x < 4; ++x) CHECK(red.px(x, 0)[0] >= 127);

    ComponentMap left, right;
    left.map = BinaryMask(4, 1);
    right.map = BinaryMask(4, 1);
    left.map.set(0, 0);
    left.map.set(1, 0);
    right.map.set(2, 0);
    right.map.set(3, 0);
    right.color_index = 1;
    auto both = overlay(base, {left, right}, palette);
    for (int x = 0; x < 4; ++x) {
      const double g = base.pixels[x] / 4.0 * 255.0;
      const auto& c = palette[x < 2 ? 0 : 1];
      for (int k = 0; k < 3; ++k) CHECK(both.px(x, 0)[k] == std::lround(0.5 * g + 0.5 * c[k]));
    }
    CHECK(overlay(base, {left, right}, palette).data == both.data);
  }
}
