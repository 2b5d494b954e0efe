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

#include "detect.hpp"
#include "doctest.h"
#include "imageio.hpp"
#include "pipeline.hpp"
#include "report.hpp"
#include "synthgen.hpp"
#include "test_util.hpp"
#include "timeline.hpp"

using namespace temphase;
using testutil::TempDir;

namespace {

DSpacingDB table_db() { return {{{"Li", "011", 2.416}, {"Li2O", "111", 2.6528}, {"Li2O", "022", 1.593}}}; }

FringeSpec fringe(double d, double deg, double amp = 1.0) {
  return {d, deg * std::numbers::pi / 180.0, amp, 0.0, std::nullopt};
}

AnalysisConfig config(double p) {
  AnalysisConfig cfg;
  cfg.pixel_size_nm = p;
  return cfg;
}

const ComponentResult* find(const FrameAnalysis& fa, const std::string& name, const std::string& hkl) {
  for (const auto& c : fa.components)
    if (c.match.name == name && c.match.hkl == hkl) return &c;
  return nullptr;
}

ImageStack ramp_stack(int frames, int n, double p, int onset, double noise) {
  ImageStack st;
  for (int k = 1; k <= frames; ++k) {
    std::vector<FringeSpec> specs = {fringe(2.416, 20.0, 0.5 + 0.05 * k)};
    if (onset > 0 && k >= onset) specs.push_back(fringe(2.6528, 110.0, 1.0));
    st.frames.push_back(synth_lattice(specs, n, n, p, noise, derive_seed(3, k)).image);
  }
  return st;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("noise-free two-fringe image recovers both spacings") {
    auto s = synth_lattice({fringe(2.416, 20.0), fringe(2.6528, 110.0)}, 512, 512, 0.05, 0.0);
    auto fa = analyze_image(s.image, table_db(), config(0.05));
    REQUIRE(fa.components.size() == 2);
    for (auto [name, hkl, d] : {std::tuple{"Li", "011", 2.416}, std::tuple{"Li2O", "111", 2.6528}}) {
      const auto* c = find(fa, name, hkl);
      REQUIRE(c != nullptr);
      CHECK(std::abs(c->match.d_calc - d) / d < 0.01);
      CHECK(c->match.match_pct >= 99.0);
      CHECK(c->match.feature_ids.size() == 2);
      CHECK(c->intensity > 0.0);
    }
    CHECK(fa.maps.size() == 2);
    for (const auto& m : fa.maps) CHECK(m.map.count() >= 0.95 * 512 * 512);
  }

  TEST_CASE("imported masks reproduce detection") {
    auto s = synth_lattice({fringe(2.416, 20.0), fringe(2.6528, 110.0)}, 256, 256, 0.05, 0.0);
    auto cfg = config(0.05);
    cfg.compute_maps = false;
    auto base = analyze_image(s.image, table_db(), cfg);
    REQUIRE(!base.mask.empty());

    ExternalMask full{base.mask, false};
    auto again = analyze_image(s.image, table_db(), cfg, &full);
    CHECK(dice(again.mask, base.mask) == 1.0);
    CHECK(again.components.size() == base.components.size());

    ExternalMask half{crop_half(base.mask), true};
    auto from_half = analyze_image(s.image, table_db(), cfg, &half);
    CHECK(from_half.mask.height == 256);
    CHECK(from_half.components.size() == base.components.size());

    ExternalMask wrong{BinaryMask(128, 128), false};
    try {
      analyze_image(s.image, table_db(), cfg, &wrong);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kDimension);
    }
  }

  TEST_CASE("non-square inputs are centre-cropped") {
    auto s = synth_lattice({fringe(2.416, 20.0)}, 300, 256, 0.05, 0.0);
    auto cfg = config(0.05);
    cfg.compute_maps = false;
    auto fa = analyze_image(s.image, table_db(), cfg);
    CHECK(fa.analyzed_size == 256);
    CHECK(fa.fft_image.width == 256);
  }

  TEST_CASE("crop and resize chain keeps spacings") {
    auto s = synth_lattice({fringe(2.416, 20.0), fringe(2.6528, 110.0)}, 1024, 1024, 0.05, 0.0);
    auto cfg = config(0.05);
    cfg.crop_size = 768;
    cfg.final_size = 512;
    cfg.compute_maps = false;
    auto fa = analyze_image(s.image, table_db(), cfg);
    CHECK(fa.fft_image.width == 512);
    const auto* li = find(fa, "Li", "011");
    REQUIRE(li != nullptr);
    CHECK(std::abs(li->match.d_calc - 2.416) / 2.416 < 0.01);
  }

  TEST_CASE("configuration errors") {
    auto img = Image2D(64, 64);
    CHECK_THROWS_AS(analyze_image(img, table_db(), config(0.0)), Error);
    auto cfg = config(0.05);
    cfg.crop_size = 128;
    CHECK_THROWS_AS(analyze_image(img, table_db(), cfg), Error);
  }
}

TEST_SUITE("timeline") {
  TEST_CASE("frame times") {
    CHECK(frame_time(1, 2.46) == doctest::Approx(2.46));
    CHECK(frame_time(6, 2.46) == doctest::Approx(14.76));
    CHECK(frame_time(22, 2.46) == doctest::Approx(54.12));
    CHECK_THROWS_AS(frame_time(0, 2.46), Error);
  }

  TEST_CASE("growing fringe gives a nondecreasing intensity column") {
    auto cfg = config(0.05);
    cfg.compute_maps = false;
    auto prof = process_stack(ramp_stack(12, 256, 0.05, 0, 0.0), table_db(), cfg);
    const auto li = prof.index_of("Li", "011");
    REQUIRE(li.has_value());
    for (std::size_t k = 1; k < prof.frame_count(); ++k) CHECK(prof.intensity[k][*li] > prof.intensity[k - 1][*li]);
    CHECK(prof.first_detection[*li] == 1);
  }

  TEST_CASE("late fringe is first detected at its onset frame") {
    auto cfg = config(0.05);
    cfg.compute_maps = false;
    auto stack = ramp_stack(10, 256, 0.05, 6, 0.3);
    auto prof = process_stack(stack, table_db(), cfg);
    const auto li2o = prof.index_of("Li2O", "111");
    REQUIRE(li2o.has_value());
    CHECK(prof.first_detection[*li2o] == 6);
    for (int k = 0; k < 5; ++k) CHECK(prof.intensity[k][*li2o] == 0.0);

    StackOptions four;
    four.workers = 4;
    auto par = process_stack(stack, table_db(), cfg, four);
    CHECK(intensity_profile_csv(par) == intensity_profile_csv(prof));
  }

  TEST_CASE("single-frame stack equals single-image analysis") {
    auto cfg = config(0.05);
    cfg.compute_maps = false;
    auto stack = ramp_stack(1, 256, 0.05, 1, 0.0);
    auto prof = process_stack(stack, table_db(), cfg);
    auto fa = analyze_image(stack.frames[0], table_db(), cfg);
    REQUIRE(prof.components.size() == fa.components.size());
    for (const auto& c : fa.components) CHECK(prof.intensity[0][*prof.index_of(c.match.name, c.match.hkl)] == c.intensity);
  }

  TEST_CASE("a failing frame becomes a zero row with a warning") {
    auto cfg = config(0.05);
    cfg.compute_maps = false;
    StackOptions opts;
    opts.on_frame = [](int k, const FrameAnalysis&) {
      if (k == 2) throw std::runtime_error("boom");
    };
    auto prof = process_stack(ramp_stack(3, 128, 0.05, 0, 0.0), table_db(), cfg, opts);
    REQUIRE(prof.components.size() >= 1);
    for (double v : prof.intensity[1]) CHECK(v == 0.0);
    CHECK(prof.intensity[0][0] > 0.0);
    REQUIRE(prof.warnings.size() == 1);
    CHECK(prof.warnings[0] == "frame 2: boom");
  }

  TEST_CASE("empty stack is rejected") {
    try {
      process_stack(ImageStack{}, table_db(), config(0.05));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kEmptyStack);
    }
  }

  TEST_CASE("first detection on handcrafted profiles") {
    IntensityProfile p;
    p.components = {{"A", "100", 3.0}, {"B", "110", 2.0}};
    p.intensity = {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
    p.match_pct = {{99.5, 0.0}, {99.5, 0.0}, {99.5, 0.0}};
    CHECK(first_detection(p, 0) == 1);
    CHECK_FALSE(first_detection(p, 1).has_value());
    p.match_pct[0][0] = 90.0;
    CHECK(first_detection(p, 0) == 2);
    p.intensity[1][0] = 0.01;
    CHECK(first_detection(p, 0) == 3);
  }
}

TEST_SUITE("report") {
  TEST_CASE("components csv row format") {
    ComponentMatch m;
    m.name = "Li";
    m.hkl = "011";
    m.d_calc = 2.41641;
    m.d_ref = 2.416;
    m.match_pct = match_percent(2.41641, 2.416);
    m.feature_size_px = 20.03;
    m.pixel_value_count = 28078;
    ComponentMatch o = m;
    o.name = "Li2O";
    o.hkl = "111";
    o.d_calc = 2.62746;
    o.d_ref = 2.6528;
    o.match_pct = match_percent(2.62746, 2.6528);
    const auto csv = components_csv({m, o});
    CHECK(csv ==
          "name,hkl,d_calc,d_ref,match_pct,feature_size_px,pixel_value_count\n"
          "Li2O,111,2.62746,2.6528,99.04,20.03,28078\n"
          "Li,011,2.41641,2.416,100.00,20.03,28078\n");
    CHECK(components_csv({}) == "name,hkl,d_calc,d_ref,match_pct,feature_size_px,pixel_value_count\n");
  }

  TEST_CASE("intensity profile csv has one row per frame") {
    IntensityProfile p;
    p.components = {{"Li", "011", 2.416}};
    p.intensity.assign(100, {1.5});
    p.match_pct.assign(100, {100.0});
    p.frame_period_s = 2.46;
    const auto csv = intensity_profile_csv(p);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "frame,time_s,Li(011)");
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      const auto a = line.find(','), b = line.find(',', a + 1);
      CHECK(std::stoi(line.substr(0, a)) == rows);
      CHECK(std::stod(line.substr(a + 1, b - a - 1)) == doctest::Approx(rows * 2.46).epsilon(1e-9));
    }
    CHECK(rows == 100);
  }

  TEST_CASE("radial profile csv d column decreases") {
    ScaleChain chain{64, 0.037, 64, 64, ScaleMode::kGeneralized};
    const auto csv = radial_profile_csv(radial_profile(Image2D(64, 64, 1.0), chain));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "d_angstrom,intensity");
    double prev = 1e300;
    while (std::getline(in, line)) {
      const double d = std::stod(line.substr(0, line.find(',')));
      CHECK(d < prev);
      prev = d;
    }
  }

  TEST_CASE("emitted reports are deterministic") {
    auto s = synth_lattice({fringe(2.416, 20.0)}, 256, 256, 0.05, 0.0);
    auto fa = analyze_image(s.image, table_db(), config(0.05));
    TempDir a("rep_a"), b("rep_b");
    nlohmann::json params = {{"pixel_size_nm", 0.05}};
    emit_report(fa, params, a.path());
    emit_maps(fa, a.path());
    emit_report(fa, params, b.path());
    emit_maps(fa, b.path());
    for (const char* f : {"components.csv", "radial_profile.csv", "report.json", "overlay.ppm"}) {
      CHECK(std::filesystem::exists(a / f));
      CHECK(testutil::read_text(a / f) == testutil::read_text(b / f));
    }
    CHECK(std::filesystem::exists(a / map_file_name("Li", "011")));
    auto j = nlohmann::json::parse(testutil::read_text(a / "report.json"));
    CHECK(j["parameters"]["pixel_size_nm"] == 0.05);
    CHECK(j["components"].size() == 1);
  }

  TEST_CASE("map file names are sanitized") {
    CHECK(map_file_name("Li2O", "111") == "map_Li2O_111.pgm");
    CHECK(map_file_name("a/b c", "-1 1 0") == map_file_name("a/b c", "-1 1 0"));
    CHECK(map_file_name("a/b c", "1").find('/') == std::string::npos);
  }
}
