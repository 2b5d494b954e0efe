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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pipeline.hpp"
#include "timeline.hpp"

namespace temphase {

/// `name,hkl,d_calc,d_ref,match_pct,feature_size_px,pixel_value_count`, sorted by d_calc descending.
std::string components_csv(const std::vector<ComponentMatch>& components);
/// `d_angstrom,intensity`, one row per band.
std::string radial_profile_csv(const DiffractionProfile& profile);
/// `frame,time_s,<name>(<hkl>)...`, frames 1-based.
std::string intensity_profile_csv(const IntensityProfile& profile);

nlohmann::json analysis_summary(const FrameAnalysis& analysis);
nlohmann::json profile_summary(const IntensityProfile& profile);

void write_text(const std::filesystem::path& path, const std::string& text);
void ensure_directory(const std::filesystem::path& dir);

/// components.csv, radial_profile.csv and report.json (run parameters merged with the summary).
void emit_report(const FrameAnalysis& analysis, const nlohmann::json& run_parameters,
                 const std::filesystem::path& out_dir);
/// overlay.ppm plus one map_<name>_<hkl>.pgm per component map.
void emit_maps(const FrameAnalysis& analysis, const std::filesystem::path& out_dir);

std::string map_file_name(const std::string& name, const std::string& hkl);

}  // namespace temphase
