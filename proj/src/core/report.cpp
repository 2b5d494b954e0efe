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

#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "imageio.hpp"
#include "mapping.hpp"

namespace temphase {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::string components_csv(const std::vector<ComponentMatch>& components) {
  std::vector<ComponentMatch> sorted = components;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ComponentMatch& a, const ComponentMatch& b) { return a.d_calc > b.d_calc; });
  std::string out = "name,hkl,d_calc,d_ref,match_pct,feature_size_px,pixel_value_count\n";
  for (const auto& c : sorted) {
    out += c.name + "," + c.hkl + "," + fmt("%.5f", c.d_calc) + "," + fmt("%.10g", c.d_ref) + "," +
           fmt("%.2f", c.match_pct) + "," + fmt("%.2f", c.feature_size_px) + "," +
           std::to_string(c.pixel_value_count) + "\n";
  }
  return out;
}

std::string radial_profile_csv(const DiffractionProfile& profile) {
  std::string out = "d_angstrom,intensity\n";
  for (const auto& b : profile.bands) out += fmt("%.5f", b.d_angstrom) + "," + fmt("%.6f", b.intensity) + "\n";
  return out;
}

std::string intensity_profile_csv(const IntensityProfile& profile) {
  std::string out = "frame,time_s";
  for (const auto& c : profile.components) out += "," + c.name + "(" + c.hkl + ")";
  out += "\n";
  for (std::size_t i = 0; i < profile.frame_count(); ++i) {
    const int k = static_cast<int>(i + 1);
    out += std::to_string(k) + "," + fmt("%.9g", frame_time(k, profile.frame_period_s));
    for (double v : profile.intensity[i]) out += "," + fmt("%.9g", v);
    out += "\n";
  }
  return out;
}

nlohmann::json analysis_summary(const FrameAnalysis& a) {
  nlohmann::json j;
  j["scale_chain"] = {
      {"original_size", a.chain.original_size},
      {"crop_size", a.chain.crop_size},
      {"final_size", a.chain.final_size},
      {"pixel_size_nm", a.chain.pixel_size_nm},
      {"mode", a.chain.mode == ScaleMode::kFixedCenter ? "fixed_center" : "generalized"},
      {"center_px", a.chain.center()},
  };
  j["feature_count"] = a.features.size();
  j["foreground_pixels"] = a.mask.count();
  auto comps = nlohmann::json::array();
  for (const auto& c : a.components) {
    comps.push_back({{"name", c.match.name},
                     {"hkl", c.match.hkl},
                     {"d_calc", c.match.d_calc},
                     {"d_ref", c.match.d_ref},
                     {"match_pct", c.match.match_pct},
                     {"feature_ids", c.match.feature_ids},
                     {"intensity", c.intensity}});
  }
  j["components"] = comps;
  auto unassigned = nlohmann::json::array();
  for (const auto& u : a.matches.unassigned) {
    nlohmann::json e{{"feature_id", u.feature_id}};
    e["d_calc"] = u.d_calc ? nlohmann::json(*u.d_calc) : nlohmann::json(nullptr);
    unassigned.push_back(e);
  }
  j["unassigned_features"] = unassigned;
  auto peaks = nlohmann::json::array();
  for (const auto& p : a.peaks) {
    peaks.push_back({{"radius_px", p.radius}, {"d_angstrom", p.d_angstrom}, {"intensity", p.intensity},
                     {"prominence", p.prominence}});
  }
  j["profile_peaks"] = peaks;
  auto maps = nlohmann::json::array();
  for (const auto& m : a.maps) {
    maps.push_back({{"name", m.name},
                    {"hkl", m.hkl},
                    {"file", map_file_name(m.name, m.hkl)},
                    {"threshold_fraction", m.threshold_fraction},
                    {"coverage_pixels", m.map.count()},
                    {"empty_mask", m.empty_mask}});
  }
  j["maps"] = maps;
  j["warnings"] = a.warnings;
  return j;
}

nlohmann::json profile_summary(const IntensityProfile& p) {
  nlohmann::json j;
  j["frame_count"] = p.frame_count();
  j["frame_period_s"] = p.frame_period_s;
  auto comps = nlohmann::json::array();
  for (std::size_t c = 0; c < p.components.size(); ++c) {
    nlohmann::json e{{"name", p.components[c].name}, {"hkl", p.components[c].hkl}, {"d_ref", p.components[c].d_ref}};
    if (p.first_detection[c]) {
      e["first_detection_frame"] = *p.first_detection[c];
      e["first_detection_time_s"] = frame_time(*p.first_detection[c], p.frame_period_s);
    } else {
      e["first_detection_frame"] = nullptr;
    }
    comps.push_back(e);
  }
  j["components"] = comps;
  j["warnings"] = p.warnings;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorKind::kIo, "write failed for '" + path.string() + "'");
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    fail(ErrorKind::kIo, "cannot create output directory '" + dir.string() + "'" + (ec ? ": " + ec.message() : ""));
  }
}

void emit_report(const FrameAnalysis& analysis, const nlohmann::json& run_parameters,
                 const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  std::vector<ComponentMatch> matches;
  for (const auto& c : analysis.components) matches.push_back(c.match);
  write_text(out_dir / "components.csv", components_csv(matches));
  write_text(out_dir / "radial_profile.csv", radial_profile_csv(analysis.profile));
  nlohmann::json report = analysis_summary(analysis);
  report["parameters"] = run_parameters;
  write_text(out_dir / "report.json", report.dump(2) + "\n");
}

std::string map_file_name(const std::string& name, const std::string& hkl) {
  std::string out = "map_" + name + "_" + hkl + ".pgm";
  for (auto& ch : out) {
    if (ch == '/' || ch == '\\' || ch == ' ') ch = '_';
  }
  return out;
}

void emit_maps(const FrameAnalysis& analysis, const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  write_ppm(overlay(analysis.source, analysis.maps), out_dir / "overlay.ppm");
  for (const auto& m : analysis.maps) write_pgm(m.map, out_dir / map_file_name(m.name, m.hkl));
}

}  // namespace temphase
