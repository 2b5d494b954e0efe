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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pipeline.hpp"

namespace temphase {

struct ComponentKey {
  std::string name;
  std::string hkl;
  double d_ref = 0.0;
  bool operator==(const ComponentKey& o) const { return name == o.name && hkl == o.hkl; }
};

struct IntensityProfile {
  /// Ordered by d_ref descending, then name and hkl.
  std::vector<ComponentKey> components;
  /// intensity[frame][component]; frames are 0-based here, 1-based in reports.
  std::vector<std::vector<double>> intensity;
  /// Match percentage per frame and component; 0 where unmatched.
  std::vector<std::vector<double>> match_pct;
  double frame_period_s = kDefaultFramePeriodS;
  /// 1-based frame of first detection per component.
  std::vector<std::optional<int>> first_detection;
  std::vector<std::string> warnings;

  std::size_t frame_count() const { return intensity.size(); }
  std::optional<std::size_t> index_of(const std::string& name, const std::string& hkl) const;
};

struct StackOptions {
  int workers = 1;
  double min_match_pct = 98.0;
  double min_intensity_fraction = 0.02;
  /// Called from worker threads with the 1-based frame index; must be thread-safe.
  std::function<void(int, const FrameAnalysis&)> on_frame;
};

/// Exposure time at the end of 1-based frame k.
double frame_time(int k, double frame_period_s);

IntensityProfile process_stack(const ImageStack& stack, const DSpacingDB& db, const AnalysisConfig& config,
                               const StackOptions& options = {});

std::optional<int> first_detection(const IntensityProfile& profile, std::size_t component,
                                   double min_match_pct = 98.0, double min_intensity_fraction = 0.02);

}  // namespace temphase
