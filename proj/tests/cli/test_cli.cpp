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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kCli = TEMPHASE_CLI_PATH;
const std::string kDb = TEMPHASE_SOURCE_DIR "/data/dspacing_sample.csv";

struct Run {
  int code;
  std::string output;
};

Run run(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / ("temphase_cli_log_" + std::to_string(::getpid()));
  const std::string cmd = "'" + kCli + "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(log);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("temphase_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& s) const { return (dir / s).string(); }
};

}  // namespace

TEST_CASE("usage errors exit 1 and help exits 0") {
  CHECK(run("").code == 1);
  CHECK(run("--help").code == 0);
  CHECK(run("bogus").code == 1);
  auto r = run("analyze x.pgm --db " + kDb);
  CHECK(r.code == 1);
  CHECK(r.output.find("--pixel-size") != std::string::npos);
  CHECK(run("analyze /nonexistent.pgm --pixel-size 0.05 --db " + kDb).code == 1);
}

TEST_CASE("synth, analyze, eval and radial") {
  Scratch s;
  auto synth = run("synth --fringes 1.6:0:1 --size 1024 --pixel-size 0.02 --out " + s / "fx");
  REQUIRE(synth.code == 0);
  const auto truth = slurp(s / "fx/truth.csv");
  CHECK(truth.find(",128.0000\n") != std::string::npos);
  CHECK(fs::exists(s / "fx/lattice.pgm"));
  CHECK(fs::exists(s / "fx/lattice.mrc"));
  CHECK(fs::exists(s / "fx/manifest.json"));

  REQUIRE(run("synth --fringes 2.416:20:1 --fringes 2.6528:110:1 --size 512 --pixel-size 0.05 --out " + s / "two")
              .code == 0);
  auto an = run("analyze " + s / "two/lattice.pgm" + " --pixel-size 0.05 --db " + kDb + " --out " + s / "run");
  CHECK(an.code == 0);
  for (const char* f : {"components.csv", "radial_profile.csv", "report.json", "overlay.ppm"})
    CHECK(fs::exists(fs::path(s / "run") / f));
  CHECK(slurp(s / "run/components.csv").find("Li,011,") != std::string::npos);

  auto again = run("analyze " + s / "two/lattice.pgm" + " --pixel-size 0.05 --db " + kDb + " --out " + s / "run2");
  CHECK(slurp(s / "run/components.csv") == slurp(s / "run2/components.csv"));

  auto ev = run("eval --pred " + s / "run/detection_mask.pgm" + " --truth " + s / "run/detection_mask.pgm" +
                " --out " + s / "ev");
  CHECK(ev.code == 0);
  CHECK(ev.output.find("dice 1.000000") != std::string::npos);
  CHECK(slurp(s / "ev/eval.json").find("\"dice\": 1.0") != std::string::npos);

  auto rad = run("radial " + s / "two/lattice.pgm" + " --pixel-size 0.037 --out " + s / "rad");
  CHECK(rad.code == 0);
  std::istringstream csv(slurp(s / "rad/radial_profile.csv"));
  std::string line;
  std::getline(csv, line);
  double prev = 1e300;
  int rows = 0;
  while (std::getline(csv, line)) {
    const double d = std::stod(line.substr(0, line.find(',')));
    CHECK(d < prev);
    prev = d;
    ++rows;
  }
  CHECK(rows > 100);
  CHECK_FALSE(fs::exists(s / "rad/components.csv"));
}

TEST_CASE("half-mode mask import") {
  Scratch s;
  REQUIRE(run("synth --fringes 2.416:20:1 --size 256 --pixel-size 0.05 --out " + s / "fx").code == 0);
  REQUIRE(run("analyze " + s / "fx/lattice.pgm" + " --pixel-size 0.05 --db " + kDb + " --out " + s / "a").code == 0);
  CHECK(run("analyze " + s / "fx/lattice.pgm" + " --pixel-size 0.05 --db " + kDb + " --mask " +
            s / "a/detection_mask.pgm" + " --half --out " + s / "b")
            .code == 1);

  std::istringstream pgm(slurp(s / "a/detection_mask.pgm"));
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  pgm >> magic >> w >> h >> maxval;
  pgm.get();
  std::string payload(static_cast<std::size_t>(w) * h / 2, '\0');
  pgm.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  std::ofstream(s / "half.pgm", std::ios::binary) << "P5\n" << w << " " << h / 2 << "\n255\n" << payload;

  auto half = run("analyze " + s / "fx/lattice.pgm" + " --pixel-size 0.05 --db " + kDb + " --mask " + s / "half.pgm" +
                  " --half --out " + s / "c");
  CHECK(half.code == 0);
  CHECK(slurp(s / "c/components.csv").find("\nLi,011,") != std::string::npos);

  // The completed mask keeps the supplied top half and mirrors it through the image centre.
  std::istringstream full(slurp(s / "c/detection_mask.pgm"));
  full >> magic >> w >> h >> maxval;
  full.get();
  std::string px(static_cast<std::size_t>(w) * h, '\0');
  full.read(px.data(), static_cast<std::streamsize>(px.size()));
  CHECK(px.substr(0, payload.size()) == payload);
  bool mirrored = true;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      mirrored = mirrored && px[y * w + x] == px[(h - 1 - y) * w + (w - 1 - x)];
  CHECK(mirrored);
}

TEST_CASE("empty result exits 2 with reports written") {
  Scratch s;
  REQUIRE(run("synth --fringes 3.3:0:1 --size 256 --pixel-size 0.05 --out " + s / "fx").code == 0);
  auto r = run("analyze " + s / "fx/lattice.pgm" + " --pixel-size 0.05 --db " + kDb + " --out " + s / "a");
  CHECK(r.code == 2);
  CHECK(slurp(s / "a/components.csv") == "name,hkl,d_calc,d_ref,match_pct,feature_size_px,pixel_value_count\n");
}

TEST_CASE("stack subcommand") {
  Scratch s;
  REQUIRE(run("synth --fringes 2.416:20:1 --fringes 2.6528:110:1:3 --size 128 --pixel-size 0.05 --noise 0.2 "
              "--frames 5 --out " + s / "fx")
              .code == 0);
  auto one = run("stack " + s / "fx/lattice.mrc" + " --pixel-size 0.05 --db " + kDb + " --workers 1 --out " + s / "w1");
  REQUIRE(one.code == 0);
  auto three = run("stack " + s / "fx/lattice.mrc" + " --pixel-size 0.05 --db " + kDb +
                   " --workers 3 --no-frame-artifacts --out " + s / "w3");
  REQUIRE(three.code == 0);
  const auto csv = slurp(s / "w1/intensity_profile.csv");
  CHECK(csv == slurp(s / "w3/intensity_profile.csv"));
  CHECK(csv.find("\n1,2.46,") != std::string::npos);
  CHECK(csv.find("\n2,4.92,") != std::string::npos);
  CHECK(fs::exists(s / "w1/frames/overlay_frame005.ppm"));
  CHECK_FALSE(fs::exists(s / "w3/frames"));
  CHECK(one.output.find("Li2O(111) first detected at frame 3") != std::string::npos);

  std::ofstream(s / "empty.mrc", std::ios::binary) << std::string(1024, '\0');
  CHECK(run("stack " + s / "empty.mrc" + " --pixel-size 0.05 --db " + kDb + " --out " + s / "e").code == 1);
}

TEST_CASE("training export from spot fixtures") {
  Scratch s;
  auto r = run("synth --spots 100:80:3:8 --spots 150:60 --size 256 --seed 3 --training-count 4 --target-size 128 "
               "--out " + s / "sp");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(s / "sp/spots.pgm"));
  CHECK(fs::exists(s / "sp/training/image_0003.pgm"));
  const auto manifest = slurp(s / "sp/training/manifest.csv");
  CHECK(std::count(manifest.begin(), manifest.end(), '\n') == 5);
  CHECK(run("synth --fringes 1.6:0 --pixel-size 0.02 --out " + s / "bad").code == 1);
}
