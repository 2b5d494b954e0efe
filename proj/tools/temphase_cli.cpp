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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "temphase/temphase.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitEmpty = 2;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(tp_status status, const std::string& context) {
  if (status != TP_OK) throw CliError(context + ": " + tp_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Image = std::unique_ptr<tp_image, Deleter<tp_image, tp_image_free>>;
using Stack = std::unique_ptr<tp_stack, Deleter<tp_stack, tp_stack_free>>;
using Db = std::unique_ptr<tp_db, Deleter<tp_db, tp_db_free>>;
using Mask = std::unique_ptr<tp_mask, Deleter<tp_mask, tp_mask_free>>;
using Analysis = std::unique_ptr<tp_analysis, Deleter<tp_analysis, tp_analysis_free>>;
using Profile = std::unique_ptr<tp_profile, Deleter<tp_profile, tp_profile_free>>;

struct ConfigFlags {
  tp_config config{};
  std::string scale_mode = "generalized";
  std::string match_metric = "ratio";
  std::string map_mode = "envelope";
  bool no_maps = false;

  ConfigFlags() { tp_config_init(&config); }

  void add(CLI::App* app) {
    app->add_option("--pixel-size", config.pixel_size_nm, "Pixel size in nm/px")
        ->required()
        ->check(CLI::PositiveNumber);
    app->add_option("--scale-mode", scale_mode, "d-spacing scale: generalized or fixed")
        ->check(CLI::IsMember({"generalized", "fixed"}))
        ->capture_default_str();
    app->add_option("--crop", config.crop_size, "Central FFT crop size (0 = none)")->capture_default_str();
    app->add_option("--final", config.final_size, "Resized FFT image size (0 = crop size)")->capture_default_str();
    app->add_option("--gamma", config.enhance_gamma, "Radial enhancement exponent")->capture_default_str();
    app->add_option("--gain", config.enhance_gain, "Enhancement gain")->capture_default_str();
    app->add_option("--blur-sigma", config.blur_sigma, "Detector blur sigma (px)")->capture_default_str();
    app->add_option("--dc-radius", config.dc_exclusion_radius, "Detector DC exclusion radius (px)")
        ->capture_default_str();
    app->add_option("--k-sigma", config.k_sigma, "Detector threshold in noise sigmas")->capture_default_str();
    app->add_option("--symmetry-tol", config.symmetry_tolerance, "Partner centroid tolerance (px)")
        ->capture_default_str();
    app->add_option("--min-area", config.min_blob_area, "Minimum blob area (px)")->capture_default_str();
    app->add_option("--fg-fraction", config.fg_fraction, "Watershed sure-foreground fraction")
        ->capture_default_str();
    app->add_option("--open-iters", config.open_iters, "Watershed opening iterations")->capture_default_str();
    app->add_option("--dilate-iters", config.dilate_iters, "Watershed dilation iterations")->capture_default_str();
    app->add_option("--match-tol", config.match_tolerance, "Relative d-spacing match tolerance")
        ->capture_default_str();
    app->add_option("--match-metric", match_metric, "Match percentage: ratio or deviation")
        ->check(CLI::IsMember({"ratio", "deviation"}))
        ->capture_default_str();
    app->add_option("--map-threshold", config.map_threshold, "Component map threshold fraction")
        ->capture_default_str();
    app->add_option("--map-mode", map_mode, "Component map: envelope or magnitude")
        ->check(CLI::IsMember({"envelope", "magnitude"}))
        ->capture_default_str();
    app->add_option("--mask-scale", config.mask_radius_scale, "Feature mask radius scale")->capture_default_str();
    app->add_flag("--no-maps", no_maps, "Skip IFFT component maps");
  }

  const tp_config& resolve() {
    config.scale_mode = scale_mode == "fixed" ? TP_SCALE_FIXED_CENTER : TP_SCALE_GENERALIZED;
    config.match_metric = match_metric == "deviation" ? TP_MATCH_DEVIATION : TP_MATCH_RATIO;
    config.map_mode = map_mode == "magnitude" ? TP_MAP_MAGNITUDE : TP_MAP_ENVELOPE;
    config.compute_maps = no_maps ? 0 : 1;
    return config;
  }

  json to_json() const {
    return {{"pixel_size_nm", config.pixel_size_nm},
            {"scale_mode", scale_mode},
            {"crop_size", config.crop_size},
            {"final_size", config.final_size},
            {"enhance_gamma", config.enhance_gamma},
            {"enhance_gain", config.enhance_gain},
            {"blur_sigma", config.blur_sigma},
            {"dc_exclusion_radius", config.dc_exclusion_radius},
            {"k_sigma", config.k_sigma},
            {"symmetry_tolerance", config.symmetry_tolerance},
            {"min_blob_area", config.min_blob_area},
            {"fg_fraction", config.fg_fraction},
            {"open_iters", config.open_iters},
            {"dilate_iters", config.dilate_iters},
            {"match_tolerance", config.match_tolerance},
            {"match_metric", match_metric},
            {"map_threshold", config.map_threshold},
            {"map_mode", map_mode},
            {"mask_radius_scale", config.mask_radius_scale},
            {"compute_maps", !no_maps}};
  }
};

Image read_image(const std::string& path) {
  tp_image* raw = nullptr;
  check(tp_image_read(path.c_str(), &raw), path);
  return Image(raw);
}

Db read_db(const std::string& path) {
  tp_db* raw = nullptr;
  check(tp_db_read(path.c_str(), &raw), path);
  return Db(raw);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError("cannot create output directory " + dir + ": " + ec.message());
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw CliError("cannot write " + path.string());
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::string image;
  std::string db;
  std::string out = ".";
  std::string mask;
  bool half = false;
  double prob_threshold = 0.0;
  ConfigFlags flags;
};

int run_analyze(AnalyzeArgs& a) {
  const tp_config& cfg = a.flags.resolve();
  Image image = read_image(a.image);
  Db db = read_db(a.db);
  ensure_dir(a.out);

  Mask mask;
  if (!a.mask.empty()) {
    int size = 0;
    check(tp_fft_image_size(&cfg, image.get(), &size), a.image);
    const int h = a.half ? size / 2 : size;
    tp_mask* raw = nullptr;
    if (a.prob_threshold > 0.0) {
      check(tp_mask_read_probability(a.mask.c_str(), a.prob_threshold, size, h, &raw), a.mask);
    } else {
      check(tp_mask_read(a.mask.c_str(), size, h, &raw), a.mask);
    }
    mask.reset(raw);
  }

  tp_analysis* raw = nullptr;
  check(tp_analyze(image.get(), db.get(), &cfg, mask.get(), a.half ? 1 : 0, &raw), a.image);
  Analysis analysis(raw);

  json run = a.flags.to_json();
  run["image"] = a.image;
  run["db"] = a.db;
  run["mask"] = a.mask.empty() ? json(nullptr) : json(a.mask);
  run["half"] = a.half;
  if (a.prob_threshold > 0.0) run["prob_threshold"] = a.prob_threshold;
  check(tp_analysis_write_report(analysis.get(), a.out.c_str(), run.dump().c_str()), a.out);
  if (cfg.compute_maps) check(tp_analysis_write_maps(analysis.get(), a.out.c_str()), a.out);

  tp_mask* det = nullptr;
  check(tp_analysis_detection_mask(analysis.get(), &det), "detection mask");
  Mask detection(det);
  check(tp_mask_write_pgm(detection.get(), (fs::path(a.out) / "detection_mask.pgm").c_str()), a.out);

  const size_t n = tp_analysis_component_count(analysis.get());
  std::printf("features: %zu\n", tp_analysis_feature_count(analysis.get()));
  for (size_t i = 0; i < n; ++i) {
    tp_component c{};
    check(tp_analysis_component(analysis.get(), i, &c), "component");
    std::printf("%s(%s) d_calc=%.5f d_ref=%.5f match=%.2f%%\n", c.name, c.hkl, c.d_calc, c.d_ref, c.match_pct);
  }
  if (n == 0) {
    std::fprintf(stderr, "no components matched\n");
    return kExitEmpty;
  }
  return kExitOk;
}

// ---- stack -----------------------------------------------------------------

struct StackArgs {
  std::string mrc;
  std::string db;
  std::string out = ".";
  int workers = 1;
  double frame_time = 2.46;
  double min_match = 98.0;
  double min_intensity = 0.02;
  bool no_frames = false;
  ConfigFlags flags;
};

int run_stack(StackArgs& a) {
  if (a.no_frames) a.flags.no_maps = true;
  const tp_config& cfg = a.flags.resolve();
  tp_stack* sraw = nullptr;
  check(tp_stack_read_mrc(a.mrc.c_str(), a.frame_time, &sraw), a.mrc);
  Stack stack(sraw);
  Db db = read_db(a.db);
  ensure_dir(a.out);

  const std::string frames_dir = (fs::path(a.out) / "frames").string();
  tp_stack_options opts;
  tp_stack_options_init(&opts);
  opts.workers = a.workers;
  opts.min_match_pct = a.min_match;
  opts.min_intensity_fraction = a.min_intensity;
  opts.frames_dir = a.no_frames ? nullptr : frames_dir.c_str();

  tp_profile* praw = nullptr;
  check(tp_stack_process(stack.get(), db.get(), &cfg, &opts, &praw), a.mrc);
  Profile profile(praw);

  json run = a.flags.to_json();
  run["stack"] = a.mrc;
  run["db"] = a.db;
  run["workers"] = a.workers;
  run["frame_time_s"] = a.frame_time;
  run["min_match_pct"] = a.min_match;
  run["min_intensity_fraction"] = a.min_intensity;
  double cell[3] = {0, 0, 0};
  check(tp_stack_cell(stack.get(), cell), a.mrc);
  run["header_cell_angstrom"] = {cell[0], cell[1], cell[2]};

  const fs::path out(a.out);
  check(tp_profile_write_csv(profile.get(), (out / "intensity_profile.csv").c_str()), a.out);
  check(tp_profile_write_json(profile.get(), (out / "profile.json").c_str(), run.dump().c_str()), a.out);

  const size_t n = tp_profile_component_count(profile.get());
  std::printf("frames: %zu\n", tp_profile_frame_count(profile.get()));
  for (size_t i = 0; i < n; ++i) {
    tp_profile_component c{};
    check(tp_profile_get_component(profile.get(), i, &c), "component");
    if (c.first_detection_frame > 0) {
      double t = 0.0;
      check(tp_frame_time(c.first_detection_frame, a.frame_time, &t), "frame time");
      std::printf("%s(%s) first detected at frame %d (%.2f s)\n", c.name, c.hkl, c.first_detection_frame, t);
    } else {
      std::printf("%s(%s) never above detection floor\n", c.name, c.hkl);
    }
  }
  if (n == 0) {
    std::fprintf(stderr, "no components matched in any frame\n");
    return kExitEmpty;
  }
  return kExitOk;
}

// ---- synth -----------------------------------------------------------------

std::vector<double> split_numbers(const std::string& spec, char sep) {
  std::vector<double> values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError("malformed number '" + item + "' in '" + spec + "'");
    }
  }
  return values;
}

tp_fringe parse_fringe(const std::string& spec) {
  auto v = split_numbers(spec, ':');
  if (v.size() < 3 || v.size() > 5) throw CliError("--fringes expects d:theta_deg:amp[:onset[:amp_end]], got " + spec);
  tp_fringe f{v[0], v[1], v[2], 0.0, 0, 0.0};
  if (v.size() > 3) f.onset_frame = static_cast<int>(v[3]);
  if (v.size() > 4) f.amplitude_end = v[4];
  return f;
}

tp_spot parse_spot(const std::string& spec) {
  auto v = split_numbers(spec, ':');
  if (v.size() < 2 || v.size() > 5) throw CliError("--spots expects x:y[:sigma[:amp[:radius]]], got " + spec);
  tp_spot s{v[0], v[1], 3.0, 8.0, 0.0};
  if (v.size() > 2) s.sigma_px = v[2];
  if (v.size() > 3) s.amplitude = v[3];
  if (v.size() > 4) s.truth_radius = v[4];
  return s;
}

struct SynthArgs {
  std::vector<std::string> fringes;
  std::vector<std::string> spots;
  std::string out = ".";
  int size = 1024;
  double pixel_size = 0.0;
  double noise = 0.0;
  uint64_t seed = 0;
  int frames = 1;
  double frame_time = 2.46;
  double spot_noise = 1.0;
  int training_count = 0;
  int target_size = 1024;
  bool no_half = false;
};

int run_synth(SynthArgs& a) {
  if (a.fringes.empty() && a.spots.empty()) throw CliError("synth needs --fringes and/or --spots");
  ensure_dir(a.out);
  const fs::path out(a.out);
  json manifest = {{"seed", a.seed}, {"size", a.size}, {"outputs", json::array()}};

  if (!a.fringes.empty()) {
    if (a.pixel_size <= 0.0) throw CliError("--pixel-size is required with --fringes");
    std::vector<tp_fringe> fringes;
    for (const auto& s : a.fringes) fringes.push_back(parse_fringe(s));

    // Truth positions do not depend on noise or onset.
    std::vector<tp_fringe> steady = fringes;
    for (auto& f : steady) f.onset_frame = 0;
    std::vector<tp_spot_truth> truth(fringes.size());
    tp_image* traw = nullptr;
    check(tp_synth_lattice(steady.data(), steady.size(), a.size, a.size, a.pixel_size, 0.0, a.seed, &traw,
                           truth.data()),
          "synth");
    Image discard(traw);

    tp_stack* sraw = nullptr;
    check(tp_synth_lattice_stack(fringes.data(), fringes.size(), a.size, a.size, a.pixel_size, a.noise, a.seed,
                                 a.frames, a.frame_time, &sraw),
          "synth");
    Stack stack(sraw);
    check(tp_stack_write_mrc(stack.get(), (out / "lattice.mrc").c_str()), a.out);
    tp_image* fraw = nullptr;
    check(tp_stack_frame(stack.get(), 0, &fraw), "synth");
    Image first(fraw);
    check(tp_image_write_pgm(first.get(), (out / "lattice.pgm").c_str()), a.out);

    std::ostringstream csv;
    csv << "fringe,d_angstrom,orientation_deg,x,y,partner_x,partner_y,radius_px\n";
    char line[256];
    for (size_t i = 0; i < fringes.size(); ++i) {
      const auto& t = truth[i];
      std::snprintf(line, sizeof line, "%zu,%.10g,%.10g,%.4f,%.4f,%.4f,%.4f,%.4f\n", i, fringes[i].d_angstrom,
                    fringes[i].orientation_deg, t.x, t.y, t.partner_x, t.partner_y, t.radius_px);
      csv << line;
      std::printf("fringe %zu: d=%.5g A spot radius %.2f px\n", i, fringes[i].d_angstrom, t.radius_px);
    }
    write_file(out / "truth.csv", csv.str());

    manifest["pixel_size_nm"] = a.pixel_size;
    manifest["noise_sigma"] = a.noise;
    manifest["frames"] = a.frames;
    manifest["frame_time_s"] = a.frame_time;
    manifest["fringes"] = a.fringes;
    for (const char* f : {"lattice.pgm", "lattice.mrc", "truth.csv"}) manifest["outputs"].push_back(f);
  }

  if (!a.spots.empty()) {
    std::vector<tp_spot> spots;
    for (const auto& s : a.spots) spots.push_back(parse_spot(s));
    tp_spot_background bg;
    tp_spot_background_init(&bg);
    bg.noise_sigma = a.spot_noise;
    tp_image* iraw = nullptr;
    tp_mask* mraw = nullptr;
    check(tp_synth_spots(spots.data(), spots.size(), a.size, a.size, &bg, a.seed, &iraw, &mraw), "synth");
    Image image(iraw);
    Mask mask(mraw);
    check(tp_image_write_pgm(image.get(), (out / "spots.pgm").c_str()), a.out);
    check(tp_mask_write_pgm(mask.get(), (out / "spots_mask.pgm").c_str()), a.out);
    manifest["spots"] = a.spots;
    manifest["spot_noise_sigma"] = a.spot_noise;
    manifest["outputs"].push_back("spots.pgm");
    manifest["outputs"].push_back("spots_mask.pgm");

    if (a.training_count > 0) {
      tp_augment aug;
      tp_augment_init(&aug);
      aug.seed = a.seed;
      const tp_image* images[] = {image.get()};
      const tp_mask* masks[] = {mask.get()};
      const std::string dir = (out / "training").string();
      check(tp_export_training_set(images, masks, 1, a.training_count, dir.c_str(), &aug, a.target_size,
                                   a.no_half ? 0 : 1),
            dir);
      manifest["training"] = {{"count", a.training_count},
                              {"target_size", a.target_size},
                              {"half_crop", !a.no_half},
                              {"manifest", "training/manifest.csv"}};
    }
  }

  write_file(out / "manifest.json", manifest.dump(2) + "\n");
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string pred;
  std::string truth;
  std::string out;
  double prob_threshold = 0.0;
};

int run_eval(EvalArgs& a) {
  tp_mask* traw = nullptr;
  check(tp_mask_read(a.truth.c_str(), 0, 0, &traw), a.truth);
  Mask truth(traw);
  int w = 0, h = 0;
  check(tp_mask_size(truth.get(), &w, &h), a.truth);
  tp_mask* praw = nullptr;
  if (a.prob_threshold > 0.0) {
    check(tp_mask_read_probability(a.pred.c_str(), a.prob_threshold, w, h, &praw), a.pred);
  } else {
    check(tp_mask_read(a.pred.c_str(), w, h, &praw), a.pred);
  }
  Mask pred(praw);

  double dice = 0.0;
  tp_confusion c{};
  check(tp_mask_dice(pred.get(), truth.get(), &dice), "dice");
  check(tp_mask_confusion(pred.get(), truth.get(), &c), "confusion");
  std::printf("dice %.6f\ntp %llu fp %llu fn %llu tn %llu\n", dice, static_cast<unsigned long long>(c.tp),
              static_cast<unsigned long long>(c.fp), static_cast<unsigned long long>(c.fn),
              static_cast<unsigned long long>(c.tn));
  if (!a.out.empty()) {
    ensure_dir(a.out);
    json j = {{"pred", a.pred},
              {"truth", a.truth},
              {"dice", dice},
              {"confusion", {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}}}};
    write_file(fs::path(a.out) / "eval.json", j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- radial ----------------------------------------------------------------

struct RadialArgs {
  std::string image;
  std::string out = ".";
  std::string mask;
  ConfigFlags flags;
};

int run_radial(RadialArgs& a) {
  const tp_config& cfg = a.flags.resolve();
  Image image = read_image(a.image);
  Mask mask;
  if (!a.mask.empty()) {
    int size = 0;
    check(tp_fft_image_size(&cfg, image.get(), &size), a.image);
    tp_mask* raw = nullptr;
    check(tp_mask_read(a.mask.c_str(), size, size, &raw), a.mask);
    mask.reset(raw);
  }
  ensure_dir(a.out);
  const std::string csv = (fs::path(a.out) / "radial_profile.csv").string();
  check(tp_radial_profile_write(image.get(), &cfg, mask.get(), csv.c_str()), a.image);
  std::printf("%s\n", csv.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temphase: FFT phase identification for TEM images and stacks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tp_version()));

  AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "Identify crystalline components in one image");
  cmd_analyze->add_option("image", analyze.image, "Input image (.pgm or .mrc)")->required();
  cmd_analyze->add_option("--db", analyze.db, "d-spacing database CSV")->required();
  cmd_analyze->add_option("--out", analyze.out, "Output directory")->capture_default_str();
  cmd_analyze->add_option("--mask", analyze.mask, "External FFT feature mask (.pgm)");
  cmd_analyze->add_flag("--half", analyze.half, "Mask holds the top half of the FFT image");
  cmd_analyze->add_option("--prob-threshold", analyze.prob_threshold,
                          "Treat --mask as a probability map thresholded here");
  analyze.flags.add(cmd_analyze);

  StackArgs stack;
  auto* cmd_stack = app.add_subcommand("stack", "Per-frame component intensities over an MRC stack");
  cmd_stack->add_option("mrc", stack.mrc, "Input MRC stack")->required();
  cmd_stack->add_option("--db", stack.db, "d-spacing database CSV")->required();
  cmd_stack->add_option("--out", stack.out, "Output directory")->capture_default_str();
  cmd_stack->add_option("--workers", stack.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_stack->add_option("--frame-time", stack.frame_time, "Exposure per frame (s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_stack->add_option("--min-match", stack.min_match, "Match percentage for first detection")
      ->capture_default_str();
  cmd_stack->add_option("--min-intensity", stack.min_intensity,
                        "Intensity fraction of the component maximum for first detection")
      ->capture_default_str();
  cmd_stack->add_flag("--no-frame-artifacts", stack.no_frames, "Skip per-frame overlays");
  stack.flags.add(cmd_stack);

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "Generate synthetic fixtures");
  cmd_synth->add_option("--fringes", synth.fringes, "Lattice fringe d:theta_deg:amp[:onset[:amp_end]]");
  cmd_synth->add_option("--spots", synth.spots, "FFT spot x:y[:sigma[:amp[:radius]]]");
  cmd_synth->add_option("--out", synth.out, "Output directory")->capture_default_str();
  cmd_synth->add_option("--size", synth.size, "Image edge length (px)")->capture_default_str();
  cmd_synth->add_option("--pixel-size", synth.pixel_size, "Pixel size in nm/px (lattice fixtures)");
  cmd_synth->add_option("--noise", synth.noise, "Gaussian noise sigma for lattice images")->capture_default_str();
  cmd_synth->add_option("--spot-noise", synth.spot_noise, "Gaussian noise sigma for spot images")
      ->capture_default_str();
  cmd_synth->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  cmd_synth->add_option("--frames", synth.frames, "Frames in lattice.mrc")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_synth->add_option("--frame-time", synth.frame_time, "Exposure per frame (s)")->capture_default_str();
  cmd_synth->add_option("--training-count", synth.training_count, "Augmented training pairs from the spot fixture")
      ->capture_default_str();
  cmd_synth->add_option("--target-size", synth.target_size, "Training image size")->capture_default_str();
  cmd_synth->add_flag("--no-half", synth.no_half, "Export full training images instead of top halves");

  EvalArgs eval;
  auto* cmd_eval = app.add_subcommand("eval", "Dice and confusion counts between two masks");
  cmd_eval->add_option("--pred", eval.pred, "Predicted mask (.pgm)")->required();
  cmd_eval->add_option("--truth", eval.truth, "Ground-truth mask (.pgm)")->required();
  cmd_eval->add_option("--out", eval.out, "Directory for eval.json");
  cmd_eval->add_option("--prob-threshold", eval.prob_threshold, "Treat --pred as a probability map");

  RadialArgs radial;
  auto* cmd_radial = app.add_subcommand("radial", "Diffraction-like radial profile of an image's FFT");
  cmd_radial->add_option("image", radial.image, "Input image (.pgm or .mrc)")->required();
  cmd_radial->add_option("--out", radial.out, "Output directory")->capture_default_str();
  cmd_radial->add_option("--mask", radial.mask, "Restrict integration to this FFT mask (.pgm)");
  radial.flags.add(cmd_radial);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (*cmd_analyze) return run_analyze(analyze);
    if (*cmd_stack) return run_stack(stack);
    if (*cmd_synth) return run_synth(synth);
    if (*cmd_eval) return run_eval(eval);
    if (*cmd_radial) return run_radial(radial);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
