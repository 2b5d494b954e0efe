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

#ifndef TEMPHASE_TEMPHASE_H
#define TEMPHASE_TEMPHASE_H

/*
 * C interface to the temphase library: FFT-based phase identification in
 * high-resolution TEM images and image stacks.
 *
 * Objects are opaque handles created by tp_*_read / tp_*_create style calls
 * and released with the matching tp_*_free. Every fallible call returns a
 * tp_status; on failure tp_last_error() returns a message for the calling
 * thread. Strings returned by accessors are owned by the handle and stay
 * valid until it is freed.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TP_BUILDING_LIBRARY)
#    define TP_API __declspec(dllexport)
#  else
#    define TP_API __declspec(dllimport)
#  endif
#else
#  define TP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tp_status {
  TP_OK = 0,
  TP_ERR_ARGUMENT = 1,
  TP_ERR_IO = 2,
  TP_ERR_FORMAT = 3,
  TP_ERR_UNSUPPORTED_MODE = 4,
  TP_ERR_EMPTY_STACK = 5,
  TP_ERR_DIMENSION = 6,
  TP_ERR_DOMAIN = 7,
  TP_ERR_INTERNAL = 99
} tp_status;

typedef enum tp_scale_mode { TP_SCALE_GENERALIZED = 0, TP_SCALE_FIXED_CENTER = 1 } tp_scale_mode;
typedef enum tp_match_metric { TP_MATCH_RATIO = 0, TP_MATCH_DEVIATION = 1 } tp_match_metric;
typedef enum tp_map_mode { TP_MAP_ENVELOPE = 0, TP_MAP_MAGNITUDE = 1 } tp_map_mode;

typedef struct tp_image tp_image;
typedef struct tp_stack tp_stack;
typedef struct tp_db tp_db;
typedef struct tp_mask tp_mask;
typedef struct tp_analysis tp_analysis;
typedef struct tp_profile tp_profile;

TP_API const char* tp_last_error(void);
TP_API const char* tp_version(void);

/* ---- images ------------------------------------------------------------ */

/* P5 PGM, or the first frame of an .mrc file. */
TP_API tp_status tp_image_read(const char* path, tp_image** out);
TP_API tp_status tp_image_create(int width, int height, const double* pixels, tp_image** out);
TP_API tp_status tp_image_size(const tp_image* image, int* width, int* height);
/* Copies width*height values into `out`. */
TP_API tp_status tp_image_pixels(const tp_image* image, double* out, size_t count);
TP_API tp_status tp_image_write_pgm(const tp_image* image, const char* path);
TP_API void tp_image_free(tp_image* image);

/* ---- stacks ------------------------------------------------------------ */

TP_API tp_status tp_stack_read_mrc(const char* path, double frame_period_s, tp_stack** out);
TP_API tp_status tp_stack_frame_count(const tp_stack* stack, size_t* count);
/* Header cell lengths in angstrom; zeros when unset in the file. */
TP_API tp_status tp_stack_cell(const tp_stack* stack, double cell[3]);
TP_API tp_status tp_stack_frame(const tp_stack* stack, size_t index, tp_image** out);
TP_API tp_status tp_stack_write_mrc(const tp_stack* stack, const char* path);
TP_API void tp_stack_free(tp_stack* stack);

/* ---- d-spacing database ------------------------------------------------- */

TP_API tp_status tp_db_read(const char* path, tp_db** out);
TP_API size_t tp_db_size(const tp_db* db);
TP_API void tp_db_free(tp_db* db);

/* ---- masks -------------------------------------------------------------- */

/* Binary mask from a P5 file (foreground >= 128). Zero expected dimensions
 * accept any size. */
TP_API tp_status tp_mask_read(const char* path, int expected_width, int expected_height, tp_mask** out);
/* Probability map from a P5 file (value/255), foreground iff >= threshold. */
TP_API tp_status tp_mask_read_probability(const char* path, double threshold, int expected_width,
                                          int expected_height, tp_mask** out);
TP_API tp_status tp_mask_size(const tp_mask* mask, int* width, int* height);
TP_API size_t tp_mask_count(const tp_mask* mask);
TP_API tp_status tp_mask_write_pgm(const tp_mask* mask, const char* path);
TP_API void tp_mask_free(tp_mask* mask);

typedef struct tp_confusion {
  uint64_t tp, fp, fn, tn;
} tp_confusion;

TP_API tp_status tp_mask_dice(const tp_mask* pred, const tp_mask* truth, double* out);
TP_API tp_status tp_mask_confusion(const tp_mask* pred, const tp_mask* truth, tp_confusion* out);

/* ---- configuration ------------------------------------------------------ */

typedef struct tp_config {
  double pixel_size_nm;      /* required, > 0 */
  int scale_mode;            /* tp_scale_mode */
  int crop_size;             /* 0 keeps the full spectrum */
  int final_size;            /* 0 keeps the cropped size */
  double enhance_gamma;
  double enhance_gain;
  double blur_sigma;
  double dc_exclusion_radius;
  double k_sigma;
  double symmetry_tolerance;
  int min_blob_area;
  double fg_fraction;
  int open_iters;
  int dilate_iters;
  double match_tolerance;
  int match_metric;          /* tp_match_metric */
  double map_threshold;
  int map_mode;              /* tp_map_mode */
  double mask_radius_scale;
  double peak_min_prominence;
  int peak_dc_bands;
  int compute_maps;          /* nonzero computes IFFT component maps */
} tp_config;

/* Fills every field with its default; pixel_size_nm is left at 0. */
TP_API void tp_config_init(tp_config* config);

/* Edge length of the FFT image the pipeline produces for `image`. */
TP_API tp_status tp_fft_image_size(const tp_config* config, const tp_image* image, int* size);

/* ---- single-image analysis ---------------------------------------------- */

typedef struct tp_component {
  const char* name;
  const char* hkl;
  double d_calc;
  double d_ref;
  double match_pct;
  double feature_size_px;
  int64_t pixel_value_count;
  double intensity;
  size_t feature_count;
} tp_component;

/* `mask` may be NULL (classical detector). With `mask_is_half` nonzero the
 * mask holds the top half of the FFT image and is completed by point
 * reflection. */
TP_API tp_status tp_analyze(const tp_image* image, const tp_db* db, const tp_config* config, const tp_mask* mask,
                            int mask_is_half, tp_analysis** out);
TP_API size_t tp_analysis_feature_count(const tp_analysis* analysis);
TP_API size_t tp_analysis_component_count(const tp_analysis* analysis);
TP_API tp_status tp_analysis_component(const tp_analysis* analysis, size_t index, tp_component* out);
TP_API tp_status tp_analysis_detection_mask(const tp_analysis* analysis, tp_mask** out);
/* components.csv, radial_profile.csv, report.json. `run_json` (may be NULL)
 * is a JSON object stored under "parameters". */
TP_API tp_status tp_analysis_write_report(const tp_analysis* analysis, const char* out_dir, const char* run_json);
/* overlay.ppm and map_<name>_<hkl>.pgm files. */
TP_API tp_status tp_analysis_write_maps(const tp_analysis* analysis, const char* out_dir);
TP_API void tp_analysis_free(tp_analysis* analysis);

/* Circular integration of the enhanced FFT image, written as CSV. */
TP_API tp_status tp_radial_profile_write(const tp_image* image, const tp_config* config, const tp_mask* mask,
                                         const char* csv_path);

/* ---- stacks over time --------------------------------------------------- */

typedef struct tp_stack_options {
  int workers;
  double min_match_pct;
  double min_intensity_fraction;
  const char* frames_dir;    /* per-frame overlays when non-NULL */
} tp_stack_options;

TP_API void tp_stack_options_init(tp_stack_options* options);

typedef struct tp_profile_component {
  const char* name;
  const char* hkl;
  double d_ref;
  int first_detection_frame; /* 1-based; 0 when never detected */
} tp_profile_component;

TP_API tp_status tp_stack_process(const tp_stack* stack, const tp_db* db, const tp_config* config,
                                  const tp_stack_options* options, tp_profile** out);
TP_API size_t tp_profile_frame_count(const tp_profile* profile);
TP_API size_t tp_profile_component_count(const tp_profile* profile);
TP_API tp_status tp_profile_get_component(const tp_profile* profile, size_t index, tp_profile_component* out);
TP_API tp_status tp_profile_intensity(const tp_profile* profile, size_t frame, size_t component, double* out);
TP_API tp_status tp_profile_write_csv(const tp_profile* profile, const char* path);
TP_API tp_status tp_profile_write_json(const tp_profile* profile, const char* path, const char* run_json);
TP_API void tp_profile_free(tp_profile* profile);

/* ---- scalar helpers ----------------------------------------------------- */

TP_API tp_status tp_match_percent(double d_calc, double d_ref, int metric, double* out);
TP_API tp_status tp_frame_time(int frame, double frame_period_s, double* out);

/* ---- synthetic fixtures -------------------------------------------------- */

typedef struct tp_fringe {
  double d_angstrom;
  double orientation_deg;
  double amplitude;
  double phase;
  int onset_frame;           /* stacks only: first 1-based frame carrying the fringe; 0 = all */
  double amplitude_end;      /* stacks only: amplitude at the last frame; <= 0 keeps it constant */
} tp_fringe;

typedef struct tp_spot_truth {
  double x, y;
  double partner_x, partner_y;
  double radius_px;
} tp_spot_truth;

/* `truth` may be NULL; otherwise it receives `count` entries. */
TP_API tp_status tp_synth_lattice(const tp_fringe* fringes, size_t count, int width, int height,
                                  double pixel_size_nm, double noise_sigma, uint64_t seed, tp_image** out,
                                  tp_spot_truth* truth);
TP_API tp_status tp_synth_lattice_stack(const tp_fringe* fringes, size_t count, int width, int height,
                                        double pixel_size_nm, double noise_sigma, uint64_t seed, int frames,
                                        double frame_period_s, tp_stack** out);

typedef struct tp_spot {
  double x, y;
  double sigma_px;
  double amplitude;
  double truth_radius;       /* 0 selects 3 * sigma_px */
} tp_spot;

typedef struct tp_spot_background {
  double level;
  double decay_px;
  double noise_sigma;
} tp_spot_background;

TP_API void tp_spot_background_init(tp_spot_background* background);
TP_API tp_status tp_synth_spots(const tp_spot* spots, size_t count, int width, int height,
                                const tp_spot_background* background, uint64_t seed, tp_image** image,
                                tp_mask** mask);

typedef struct tp_augment {
  double rotation_deg;
  double shift_fraction;
  double shear_deg;
  double zoom_fraction;
  uint64_t seed;
} tp_augment;

TP_API void tp_augment_init(tp_augment* augment);
TP_API tp_status tp_export_training_set(const tp_image* const* images, const tp_mask* const* masks,
                                        size_t source_count, int count, const char* out_dir,
                                        const tp_augment* augment, int target_size, int half_crop);

#ifdef __cplusplus
}
#endif

#endif /* TEMPHASE_TEMPHASE_H */
