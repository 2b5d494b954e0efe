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

#include "temphase/temphase.h"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <new>
#include <numbers>
#include <string>

#include "detect.hpp"
#include "imageio.hpp"
#include "pipeline.hpp"
#include "report.hpp"
#include "synthgen.hpp"
#include "timeline.hpp"

struct tp_image {
  temphase::Image2D image;
};
struct tp_stack {
  temphase::ImageStack stack;
};
struct tp_db {
  temphase::DSpacingDB db;
};
struct tp_mask {
  temphase::BinaryMask mask;
};
struct tp_analysis {
  temphase::FrameAnalysis analysis;
};
struct tp_profile {
  temphase::IntensityProfile profile;
};

namespace {

using temphase::ErrorKind;

thread_local std::string g_last_error;

tp_status to_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument: return TP_ERR_ARGUMENT;
    case ErrorKind::kIo: return TP_ERR_IO;
    case ErrorKind::kFormat: return TP_ERR_FORMAT;
    case ErrorKind::kUnsupportedMode: return TP_ERR_UNSUPPORTED_MODE;
    case ErrorKind::kEmptyStack: return TP_ERR_EMPTY_STACK;
    case ErrorKind::kDimension: return TP_ERR_DIMENSION;
    case ErrorKind::kDomain: return TP_ERR_DOMAIN;
  }
  return TP_ERR_INTERNAL;
}

template <typename F>
tp_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return TP_OK;
  } catch (const temphase::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TP_ERR_INTERNAL;
  }
}

template <typename T>
void not_null(const T* p, const char* what) {
  if (!p) temphase::fail(ErrorKind::kArgument, std::string("null argument: ") + what);
}

temphase::AnalysisConfig to_config(const tp_config* c) {
  not_null(c, "config");
  temphase::AnalysisConfig cfg;
  temphase::require(c->pixel_size_nm > 0.0, "pixel size must be positive (--pixel-size)");
  cfg.pixel_size_nm = c->pixel_size_nm;
  cfg.scale_mode = c->scale_mode == TP_SCALE_FIXED_CENTER ? temphase::ScaleMode::kFixedCenter
                                                          : temphase::ScaleMode::kGeneralized;
  cfg.crop_size = c->crop_size;
  cfg.final_size = c->final_size;
  cfg.enhance = {c->enhance_gamma, c->enhance_gain};
  cfg.detect = {c->blur_sigma, c->dc_exclusion_radius, c->k_sigma, c->symmetry_tolerance, c->min_blob_area};
  cfg.watershed = {c->fg_fraction, c->open_iters, c->dilate_iters};
  cfg.match.rel_tolerance = c->match_tolerance;
  cfg.match.metric = c->match_metric == TP_MATCH_DEVIATION ? temphase::MatchMetric::kDeviation
                                                           : temphase::MatchMetric::kRatio;
  cfg.map_threshold = c->map_threshold;
  cfg.map_mode = c->map_mode == TP_MAP_MAGNITUDE ? temphase::MapMode::kMagnitude : temphase::MapMode::kEnvelope;
  cfg.mask_radius_scale = c->mask_radius_scale;
  cfg.peak_min_prominence = c->peak_min_prominence;
  cfg.peak_dc_bands = c->peak_dc_bands;
  cfg.compute_maps = c->compute_maps != 0;
  return cfg;
}

nlohmann::json parse_run_json(const char* run_json) {
  if (!run_json || !*run_json) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(run_json);
  } catch (const nlohmann::json::exception& e) {
    temphase::fail(ErrorKind::kArgument, std::string("run parameters are not valid JSON: ") + e.what());
  }
}

bool has_mrc_extension(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext == ".mrc" || ext == ".mrcs";
}

}  // namespace

extern "C" {

const char* tp_last_error(void) { return g_last_error.c_str(); }

const char* tp_version(void) { return "0.3.0"; }

tp_status tp_image_read(const char* path, tp_image** out) {
  return guarded([&] {
    not_null(path, "path");
    not_null(out, "out");
    temphase::Image2D img;
    if (has_mrc_extension(path)) {
      img = std::move(temphase::read_mrc(path).frames.front());
    } else {
      img = temphase::read_pgm(path);
    }
    *out = new tp_image{std::move(img)};
  });
}

tp_status tp_image_create(int width, int height, const double* pixels, tp_image** out) {
  return guarded([&] {
    not_null(pixels, "pixels");
    not_null(out, "out");
    temphase::Image2D img(width, height);
    std::copy_n(pixels, img.size(), img.pixels.begin());
    *out = new tp_image{std::move(img)};
  });
}

tp_status tp_image_size(const tp_image* image, int* width, int* height) {
  return guarded([&] {
    not_null(image, "image");
    if (width) *width = image->image.width;
    if (height) *height = image->image.height;
  });
}

tp_status tp_image_pixels(const tp_image* image, double* out, size_t count) {
  return guarded([&] {
    not_null(image, "image");
    not_null(out, "out");
    temphase::require(count >= image->image.size(), "output buffer too small");
    std::copy(image->image.pixels.begin(), image->image.pixels.end(), out);
  });
}

tp_status tp_image_write_pgm(const tp_image* image, const char* path) {
  return guarded([&] {
    not_null(image, "image");
    not_null(path, "path");
    temphase::write_pgm(image->image, path);
  });
}

void tp_image_free(tp_image* image) { delete image; }

tp_status tp_stack_read_mrc(const char* path, double frame_period_s, tp_stack** out) {
  return guarded([&] {
    not_null(path, "path");
    not_null(out, "out");
    *out = new tp_stack{temphase::read_mrc(path, frame_period_s)};
  });
}

tp_status tp_stack_frame_count(const tp_stack* stack, size_t* count) {
  return guarded([&] {
    not_null(stack, "stack");
    not_null(count, "count");
    *count = stack->stack.frames.size();
  });
}

tp_status tp_stack_cell(const tp_stack* stack, double cell[3]) {
  return guarded([&] {
    not_null(stack, "stack");
    not_null(cell, "cell");
    for (int i = 0; i < 3; ++i) cell[i] = stack->stack.cell_angstrom[i];
  });
}

tp_status tp_stack_frame(const tp_stack* stack, size_t index, tp_image** out) {
  return guarded([&] {
    not_null(stack, "stack");
    not_null(out, "out");
    temphase::require(index < stack->stack.frames.size(), "frame index out of range");
    *out = new tp_image{stack->stack.frames[index]};
  });
}

tp_status tp_stack_write_mrc(const tp_stack* stack, const char* path) {
  return guarded([&] {
    not_null(stack, "stack");
    not_null(path, "path");
    temphase::write_mrc(stack->stack, path);
  });
}

void tp_stack_free(tp_stack* stack) { delete stack; }

tp_status tp_db_read(const char* path, tp_db** out) {
  return guarded([&] {
    not_null(path, "path");
    not_null(out, "out");
    *out = new tp_db{temphase::read_dspacing_db(path)};
  });
}

size_t tp_db_size(const tp_db* db) { return db ? db->db.entries.size() : 0; }

void tp_db_free(tp_db* db) { delete db; }

tp_status tp_mask_read(const char* path, int expected_width, int expected_height, tp_mask** out) {
  return guarded([&] {
    not_null(path, "path");
    not_null(out, "out");
    if (expected_width <= 0 || expected_height <= 0) {
      temphase::Image2D img = temphase::read_pgm(path);
      expected_width = img.width;
      expected_height = img.height;
    }
    *out = new tp_mask{temphase::import_mask(path, expected_width, expected_height)};
  });
}

tp_status tp_mask_read_probability(const char* path, double threshold, int expected_width, int expected_height,
                                   tp_mask** out) {
  return guarded([&] {
    not_null(path, "path");
    not_null(out, "out");
    temphase::Image2D img = temphase::read_pgm(path);
    if (expected_width > 0 && expected_height > 0 &&
        (img.width != expected_width || img.height != expected_height)) {
      temphase::fail(ErrorKind::kDimension, std::string(path) + ": probability map is " + std::to_string(img.width) +
                                                "x" + std::to_string(img.height) + " but " +
                                                std::to_string(expected_width) + "x" +
                                                std::to_string(expected_height) + " was expected");
    }
    *out = new tp_mask{temphase::threshold_mask(img, threshold)};
  });
}

tp_status tp_mask_size(const tp_mask* mask, int* width, int* height) {
  return guarded([&] {
    not_null(mask, "mask");
    if (width) *width = mask->mask.width;
    if (height) *height = mask->mask.height;
  });
}

size_t tp_mask_count(const tp_mask* mask) { return mask ? mask->mask.count() : 0; }

tp_status tp_mask_write_pgm(const tp_mask* mask, const char* path) {
  return guarded([&] {
    not_null(mask, "mask");
    not_null(path, "path");
    temphase::write_pgm(mask->mask, path);
  });
}

void tp_mask_free(tp_mask* mask) { delete mask; }

tp_status tp_mask_dice(const tp_mask* pred, const tp_mask* truth, double* out) {
  return guarded([&] {
    not_null(pred, "pred");
    not_null(truth, "truth");
    not_null(out, "out");
    *out = temphase::dice(pred->mask, truth->mask);
  });
}

tp_status tp_mask_confusion(const tp_mask* pred, const tp_mask* truth, tp_confusion* out) {
  return guarded([&] {
    not_null(pred, "pred");
    not_null(truth, "truth");
    not_null(out, "out");
    auto c = temphase::confusion(pred->mask, truth->mask);
    *out = {c.tp, c.fp, c.fn, c.tn};
  });
}

void tp_config_init(tp_config* c) {
  if (!c) return;
  const temphase::AnalysisConfig d;
  c->pixel_size_nm = 0.0;
  c->scale_mode = TP_SCALE_GENERALIZED;
  c->crop_size = d.crop_size;
  c->final_size = d.final_size;
  c->enhance_gamma = d.enhance.gamma;
  c->enhance_gain = d.enhance.gain;
  c->blur_sigma = d.detect.blur_sigma;
  c->dc_exclusion_radius = d.detect.dc_exclusion_radius;
  c->k_sigma = d.detect.k_sigma;
  c->symmetry_tolerance = d.detect.symmetry_tolerance;
  c->min_blob_area = d.detect.min_blob_area;
  c->fg_fraction = d.watershed.fg_fraction;
  c->open_iters = d.watershed.open_iters;
  c->dilate_iters = d.watershed.dilate_iters;
  c->match_tolerance = d.match.rel_tolerance;
  c->match_metric = TP_MATCH_RATIO;
  c->map_threshold = d.map_threshold;
  c->map_mode = TP_MAP_ENVELOPE;
  c->mask_radius_scale = d.mask_radius_scale;
  c->peak_min_prominence = d.peak_min_prominence;
  c->peak_dc_bands = d.peak_dc_bands;
  c->compute_maps = 1;
}

tp_status tp_fft_image_size(const tp_config* config, const tp_image* image, int* size) {
  return guarded([&] {
    not_null(image, "image");
    not_null(size, "size");
    auto cfg = to_config(config);
    *size = temphase::make_scale_chain(std::min(image->image.width, image->image.height), cfg).final_size;
  });
}

tp_status tp_analyze(const tp_image* image, const tp_db* db, const tp_config* config, const tp_mask* mask,
                     int mask_is_half, tp_analysis** out) {
  return guarded([&] {
    not_null(image, "image");
    not_null(db, "db");
    not_null(out, "out");
    auto cfg = to_config(config);
    auto result = std::make_unique<tp_analysis>();
    if (mask) {
      temphase::ExternalMask ext{mask->mask, mask_is_half != 0};
      result->analysis = temphase::analyze_image(image->image, db->db, cfg, &ext);
    } else {
      result->analysis = temphase::analyze_image(image->image, db->db, cfg);
    }
    *out = result.release();
  });
}

size_t tp_analysis_feature_count(const tp_analysis* a) { return a ? a->analysis.features.size() : 0; }

size_t tp_analysis_component_count(const tp_analysis* a) { return a ? a->analysis.components.size() : 0; }

tp_status tp_analysis_component(const tp_analysis* a, size_t index, tp_component* out) {
  return guarded([&] {
    not_null(a, "analysis");
    not_null(out, "out");
    temphase::require(index < a->analysis.components.size(), "component index out of range");
    const auto& c = a->analysis.components[index];
    *out = {c.match.name.c_str(), c.match.hkl.c_str(), c.match.d_calc, c.match.d_ref, c.match.match_pct,
            c.match.feature_size_px, c.match.pixel_value_count, c.intensity, c.match.feature_ids.size()};
  });
}

tp_status tp_analysis_detection_mask(const tp_analysis* a, tp_mask** out) {
  return guarded([&] {
    not_null(a, "analysis");
    not_null(out, "out");
    *out = new tp_mask{a->analysis.mask};
  });
}

tp_status tp_analysis_write_report(const tp_analysis* a, const char* out_dir, const char* run_json) {
  return guarded([&] {
    not_null(a, "analysis");
    not_null(out_dir, "out_dir");
    temphase::emit_report(a->analysis, parse_run_json(run_json), out_dir);
  });
}

tp_status tp_analysis_write_maps(const tp_analysis* a, const char* out_dir) {
  return guarded([&] {
    not_null(a, "analysis");
    not_null(out_dir, "out_dir");
    temphase::emit_maps(a->analysis, out_dir);
  });
}

void tp_analysis_free(tp_analysis* a) { delete a; }

tp_status tp_radial_profile_write(const tp_image* image, const tp_config* config, const tp_mask* mask,
                                  const char* csv_path) {
  return guarded([&] {
    not_null(image, "image");
    not_null(csv_path, "csv_path");
    auto cfg = to_config(config);
    auto fa = temphase::prepare_spectrum(image->image, cfg);
    auto profile = temphase::radial_profile(fa.enhanced, fa.chain, mask ? &mask->mask : nullptr);
    temphase::write_text(csv_path, temphase::radial_profile_csv(profile));
  });
}

void tp_stack_options_init(tp_stack_options* o) {
  if (!o) return;
  const temphase::StackOptions d;
  o->workers = d.workers;
  o->min_match_pct = d.min_match_pct;
  o->min_intensity_fraction = d.min_intensity_fraction;
  o->frames_dir = nullptr;
}

tp_status tp_stack_process(const tp_stack* stack, const tp_db* db, const tp_config* config,
                           const tp_stack_options* options, tp_profile** out) {
  return guarded([&] {
    not_null(stack, "stack");
    not_null(db, "db");
    not_null(out, "out");
    auto cfg = to_config(config);
    temphase::StackOptions opts;
    std::filesystem::path frames_dir;
    if (options) {
      opts.workers = options->workers;
      opts.min_match_pct = options->min_match_pct;
      opts.min_intensity_fraction = options->min_intensity_fraction;
      if (options->frames_dir) frames_dir = options->frames_dir;
    }
    if (frames_dir.empty()) {
      cfg.compute_maps = false;
    } else {
      temphase::ensure_directory(frames_dir);
      opts.on_frame = [frames_dir](int k, const temphase::FrameAnalysis& fa) {
        char name[64];
        std::snprintf(name, sizeof name, "overlay_frame%03d.ppm", k);
        temphase::write_ppm(temphase::overlay(fa.source, fa.maps), frames_dir / name);
      };
    }
    *out = new tp_profile{temphase::process_stack(stack->stack, db->db, cfg, opts)};
  });
}

size_t tp_profile_frame_count(const tp_profile* p) { return p ? p->profile.frame_count() : 0; }

size_t tp_profile_component_count(const tp_profile* p) { return p ? p->profile.components.size() : 0; }

tp_status tp_profile_get_component(const tp_profile* p, size_t index, tp_profile_component* out) {
  return guarded([&] {
    not_null(p, "profile");
    not_null(out, "out");
    temphase::require(index < p->profile.components.size(), "component index out of range");
    const auto& c = p->profile.components[index];
    const auto& fd = p->profile.first_detection[index];
    *out = {c.name.c_str(), c.hkl.c_str(), c.d_ref, fd ? *fd : 0};
  });
}

tp_status tp_profile_intensity(const tp_profile* p, size_t frame, size_t component, double* out) {
  return guarded([&] {
    not_null(p, "profile");
    not_null(out, "out");
    temphase::require(frame < p->profile.frame_count() && component < p->profile.components.size(),
                      "profile index out of range");
    *out = p->profile.intensity[frame][component];
  });
}

tp_status tp_profile_write_csv(const tp_profile* p, const char* path) {
  return guarded([&] {
    not_null(p, "profile");
    not_null(path, "path");
    temphase::write_text(path, temphase::intensity_profile_csv(p->profile));
  });
}

tp_status tp_profile_write_json(const tp_profile* p, const char* path, const char* run_json) {
  return guarded([&] {
    not_null(p, "profile");
    not_null(path, "path");
    auto j = temphase::profile_summary(p->profile);
    j["parameters"] = parse_run_json(run_json);
    temphase::write_text(path, j.dump(2) + "\n");
  });
}

void tp_profile_free(tp_profile* p) { delete p; }

tp_status tp_match_percent(double d_calc, double d_ref, int metric, double* out) {
  return guarded([&] {
    not_null(out, "out");
    *out = temphase::match_percent(d_calc, d_ref,
                                   metric == TP_MATCH_DEVIATION ? temphase::MatchMetric::kDeviation
                                                                : temphase::MatchMetric::kRatio);
  });
}

tp_status tp_frame_time(int frame, double frame_period_s, double* out) {
  return guarded([&] {
    not_null(out, "out");
    *out = temphase::frame_time(frame, frame_period_s);
  });
}

namespace {

std::vector<temphase::FringeSpec> fringes_for_frame(const tp_fringe* fringes, size_t count, int frame, int frames) {
  std::vector<temphase::FringeSpec> specs;
  for (size_t i = 0; i < count; ++i) {
    const auto& f = fringes[i];
    if (f.onset_frame > 0 && frame < f.onset_frame) continue;
    double amp = f.amplitude;
    if (f.amplitude_end > 0.0 && frames > 1) {
      amp = f.amplitude + (f.amplitude_end - f.amplitude) * (frame - 1) / static_cast<double>(frames - 1);
    }
    specs.push_back({f.d_angstrom, f.orientation_deg * std::numbers::pi / 180.0, amp, f.phase, std::nullopt});
  }
  return specs;
}

}  // namespace

tp_status tp_synth_lattice(const tp_fringe* fringes, size_t count, int width, int height, double pixel_size_nm,
                           double noise_sigma, uint64_t seed, tp_image** out, tp_spot_truth* truth) {
  return guarded([&] {
    not_null(out, "out");
    if (count) not_null(fringes, "fringes");
    auto specs = fringes_for_frame(fringes, count, 1, 1);
    auto s = temphase::synth_lattice(specs, width, height, pixel_size_nm, noise_sigma, seed);
    if (truth) {
      for (size_t i = 0; i < s.truth.size(); ++i) {
        const auto& t = s.truth[i];
        truth[i] = {t.x, t.y, t.partner_x, t.partner_y, t.radius_px};
      }
    }
    *out = new tp_image{std::move(s.image)};
  });
}

tp_status tp_synth_lattice_stack(const tp_fringe* fringes, size_t count, int width, int height,
                                 double pixel_size_nm, double noise_sigma, uint64_t seed, int frames,
                                 double frame_period_s, tp_stack** out) {
  return guarded([&] {
    not_null(out, "out");
    if (count) not_null(fringes, "fringes");
    temphase::require(frames >= 1, "frame count must be at least 1");
    temphase::require(frame_period_s > 0.0, "frame period must be positive");
    temphase::ImageStack stack;
    stack.frame_period_s = frame_period_s;
    stack.pixel_size_nm = pixel_size_nm;
    for (int k = 1; k <= frames; ++k) {
      auto specs = fringes_for_frame(fringes, count, k, frames);
      auto s = temphase::synth_lattice(specs, width, height, pixel_size_nm, noise_sigma,
                                       temphase::derive_seed(seed, static_cast<std::uint64_t>(k)));
      stack.frames.push_back(std::move(s.image));
    }
    *out = new tp_stack{std::move(stack)};
  });
}

void tp_spot_background_init(tp_spot_background* b) {
  if (!b) return;
  const temphase::SpotBackground d;
  *b = {d.level, d.decay_px, d.noise_sigma};
}

tp_status tp_synth_spots(const tp_spot* spots, size_t count, int width, int height,
                         const tp_spot_background* background, uint64_t seed, tp_image** image, tp_mask** mask) {
  return guarded([&] {
    not_null(image, "image");
    not_null(mask, "mask");
    if (count) not_null(spots, "spots");
    std::vector<temphase::SpotSpec> specs;
    for (size_t i = 0; i < count; ++i) {
      specs.push_back({spots[i].x, spots[i].y, spots[i].sigma_px, spots[i].amplitude, spots[i].truth_radius});
    }
    temphase::SpotBackground bg;
    if (background) bg = {background->level, background->decay_px, background->noise_sigma};
    auto s = temphase::synth_fft_spots(specs, width, height, bg, seed);
    *image = new tp_image{std::move(s.image)};
    *mask = new tp_mask{std::move(s.mask)};
  });
}

void tp_augment_init(tp_augment* a) {
  if (!a) return;
  const temphase::AugmentParams d;
  *a = {d.rotation_deg, d.shift_fraction, d.shear_deg, d.zoom_fraction, d.seed};
}

tp_status tp_export_training_set(const tp_image* const* images, const tp_mask* const* masks, size_t source_count,
                                 int count, const char* out_dir, const tp_augment* augment, int target_size,
                                 int half_crop) {
  return guarded([&] {
    not_null(images, "images");
    not_null(masks, "masks");
    not_null(out_dir, "out_dir");
    std::vector<temphase::TrainingSource> sources;
    for (size_t i = 0; i < source_count; ++i) {
      not_null(images[i], "image");
      not_null(masks[i], "mask");
      sources.push_back({images[i]->image, masks[i]->mask});
    }
    temphase::ExportParams params;
    if (augment) {
      params.augment = {augment->rotation_deg, augment->shift_fraction, augment->shear_deg, augment->zoom_fraction,
                        augment->seed};
    }
    params.target_size = target_size;
    params.half_crop = half_crop != 0;
    temphase::export_training_set(sources, count, out_dir, params);
  });
}

}  // extern "C"
