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
#include "imageio.hpp"
#include "morphology.hpp"
#include "detect.hpp"
#include "synthgen.hpp"
#include "test_util.hpp"

using namespace temphase;
using testutil::TempDir;

namespace {

std::pair<double, double> centroid(const Image2D& img) {
  double s = 0, sx = 0, sy = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      s += img.at(x, y);
      sx += x * img.at(x, y);
      sy += y * img.at(x, y);
    }
  return {sx / s, sy / s};
}

Image2D blob(int n, double cx, double cy, double sigma) {
  Image2D img(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      img.at(x, y) = std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2 * sigma * sigma));
  return img;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_SUITE("synthgen") {
  TEST_CASE("rng is deterministic and seeds are distinct") {
    Rng a(7), b(7);
    for (int i = 0; i < 10; ++i) {
      CHECK(a.uniform(0, 1) == b.uniform(0, 1));
      CHECK(a.normal(0, 1) == b.normal(0, 1));
    }
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  }

  TEST_CASE("lattice spot lands at the bookkeeping radius") {
    auto s = synth_lattice({{1.6, 0.0, 1.0, 0.0, std::nullopt}}, 1024, 1024, 0.02, 0.0);
    REQUIRE(s.truth.size() == 1);
    CHECK(s.truth[0].radius_px == doctest::Approx(128.0));
    CHECK(s.truth[0].period_px == doctest::Approx(8.0));
    CHECK(s.truth[0].x == doctest::Approx(640.0));
    CHECK(s.truth[0].partner_x == doctest::Approx(384.0));
    CHECK(s.image.at(0, 0) == doctest::Approx(1.0));
    CHECK(s.image.at(4, 0) == doctest::Approx(-1.0));
  }

  TEST_CASE("empty lattice is black") {
    auto s = synth_lattice({}, 64, 64, 0.02, 0.0);
    CHECK(s.truth.empty());
    for (double v : s.image.pixels) CHECK(v == 0.0);
  }

  TEST_CASE("orthogonal fringes give four spots at equal radius") {
    auto s = synth_lattice({{1.6, 0.0, 1.0, 0.0, std::nullopt}, {1.6, std::numbers::pi / 2, 1.0, 0.0, std::nullopt}},
                           512, 512, 0.02, 0.0);
    REQUIRE(s.truth.size() == 2);
    CHECK(s.truth[0].radius_px == doctest::Approx(s.truth[1].radius_px));
    const double a0 = std::atan2(s.truth[0].y - 256, s.truth[0].x - 256);
    const double a1 = std::atan2(s.truth[1].y - 256, s.truth[1].x - 256);
    CHECK(std::abs(std::abs(a1 - a0) - std::numbers::pi / 2) < 1e-9);
  }

  TEST_CASE("lattice period must be resolvable") {
    CHECK_THROWS_AS(synth_lattice({{0.3, 0.0, 1.0, 0.0, std::nullopt}}, 64, 64, 0.02, 0.0), Error);
    CHECK_THROWS_AS(synth_lattice({{20.0, 0.0, 1.0, 0.0, std::nullopt}}, 64, 64, 0.02, 0.0), Error);
  }

  TEST_CASE("lattice region confines the fringe") {
    FringeSpec f{1.6, 0.0, 1.0, 0.0, FringeRegion{32, 32, 10}};
    auto s = synth_lattice({f}, 64, 64, 0.02, 0.0);
    CHECK(s.image.at(0, 0) == 0.0);
    CHECK(s.image.at(32, 32) != 0.0);
  }

  TEST_CASE("spot fixtures") {
    SpotBackground bg;
    auto s = synth_fft_spots({{300, 200, 3, 8, 0}, {700, 500, 3, 8, 0}, {600, 300, 3, 8, 0}}, 1024, 1024, bg, 1);
    CHECK(label_components(s.mask).count == 6);
    CHECK(reconstruct_full(crop_half(s.mask)) == s.mask);
    auto none = synth_fft_spots({}, 128, 128, bg, 1);
    CHECK(none.mask.empty());
    auto again = synth_fft_spots({}, 128, 128, bg, 1);
    CHECK(again.image.pixels == none.image.pixels);
  }

  TEST_CASE("augment identity and determinism") {
    auto img = testutil::random_image(64, 64, 2);
    AugmentParams zero{0, 0, 0, 0, 5};
    CHECK(augment(img, zero).pixels == img.pixels);
    AugmentParams p;
    p.seed = 9;
    CHECK(augment(img, p).pixels == augment(img, p).pixels);
    p.seed = 10;
    CHECK(augment(img, p).pixels != augment(img, AugmentParams{}).pixels);
  }

  TEST_CASE("rotation moves a point along its arc") {
    const int n = 257;
    const double c = 128.0;
    for (double deg : {0.2, 20.0}) {
      auto img = blob(n, c + 100.0, c, 1.5);
      AffineDraw d;
      d.rotation_deg = deg;
      auto [x, y] = centroid(apply_affine(img, d));
      const double th = deg * std::numbers::pi / 180.0;
      CHECK(std::hypot(x - (c + 100 * std::cos(th)), y - (c + 100 * std::sin(th))) < 1.0);
    }
  }

  TEST_CASE("shift and zoom follow the forward map") {
    const int n = 129;
    auto img = blob(n, 84.0, 64.0, 1.5);
    AffineDraw d;
    d.shift_x_px = 5.0;
    d.zoom_x = 1.1;
    auto [x, y] = centroid(apply_affine(img, d));
    CHECK(x == doctest::Approx(64.0 + 1.1 * 20.0 + 5.0).epsilon(0.01));
    CHECK(y == doctest::Approx(64.0).epsilon(0.01));
  }

  TEST_CASE("draws stay within their ranges") {
    Rng rng(3);
    AugmentParams p;
    for (int i = 0; i < 200; ++i) {
      auto d = draw_affine(p, 1000, rng);
      CHECK(std::abs(d.rotation_deg) <= 0.2);
      CHECK(std::abs(d.shift_x_px) <= 50.0);
      CHECK(std::abs(d.shear_deg) <= 0.05);
      CHECK(std::abs(d.zoom_x - 1.0) <= 0.05);
      CHECK(std::abs(d.zoom_y - 1.0) <= 0.05);
    }
  }

  TEST_CASE("training export") {
    SpotBackground bg;
    auto s = synth_fft_spots({{300, 200, 3, 8, 0}}, 256, 256, bg, 1);
    TempDir dir("export");
    ExportParams params;
    params.target_size = 128;
    export_training_set({{s.image, s.mask}}, 10, dir.path(), params);
    CHECK(count_lines(testutil::read_text(dir / "manifest.csv")) == 11);
    auto img = read_pgm(dir / "image_0009.pgm");
    CHECK(img.width == 128);
    CHECK(img.height == 64);
    CHECK(read_pgm(dir / "mask_0000.pgm").height == 64);

    TempDir big("export_big");
    export_training_set({{s.image, s.mask}}, 1, big.path(), ExportParams{});
    auto full = read_pgm(big / "image_0000.pgm");
    CHECK(full.width == 1024);
    CHECK(full.height == 512);

    TempDir empty("export_empty");
    export_training_set({{s.image, s.mask}}, 0, empty.path(), params);
    CHECK(count_lines(testutil::read_text(empty / "manifest.csv")) == 1);
    CHECK(std::distance(std::filesystem::directory_iterator(empty.path()), std::filesystem::directory_iterator()) == 1);

    TempDir again("export_again");
    export_training_set({{s.image, s.mask}}, 10, again.path(), params);
    CHECK(testutil::read_text(again / "manifest.csv") == testutil::read_text(dir / "manifest.csv"));
    CHECK(testutil::read_text(again / "image_0004.pgm") == testutil::read_text(dir / "image_0004.pgm"));
  }
}
