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

#include "timeline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <tuple>

namespace temphase {

std::optional<std::size_t> IntensityProfile::index_of(const std::string& name, const std::string& hkl) const {
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].name == name && components[i].hkl == hkl) return i;
  }
  return std::nullopt;
}

double frame_time(int k, double frame_period_s) {
  require(k >= 1, "frame_time: frames are numbered from 1");
  require(frame_period_s > 0.0, "frame_time: frame period must be positive");
  return k * frame_period_s;
}

IntensityProfile process_stack(const ImageStack& stack, const DSpacingDB& db, const AnalysisConfig& config,
                               const StackOptions& options) {
  if (stack.frames.empty()) fail(ErrorKind::kEmptyStack, "process_stack: stack has no frames");
  require(options.workers >= 1, "process_stack: workers must be at least 1");
  require(stack.frame_period_s > 0.0, "process_stack: frame period must be positive");
  require(!db.empty(), "process_stack: empty d-spacing database");

  struct FrameResult {
    std::vector<ComponentResult> components;
    std::vector<std::string> warnings;
  };
  const std::size_t n = stack.frames.size();
  std::vector<FrameResult> results(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        FrameAnalysis fa = analyze_image(stack.frames[i], db, config);
        results[i].components = fa.components;
        results[i].warnings = fa.warnings;
        if (options.on_frame) options.on_frame(static_cast<int>(i + 1), fa);
      } catch (const std::exception& e) {
        results[i].components.clear();
        results[i].warnings.push_back(e.what());
      }
    }
  };
  const int n_workers = static_cast<int>(std::min<std::size_t>(options.workers, n));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }

  IntensityProfile profile;
  profile.frame_period_s = stack.frame_period_s;
  std::vector<ComponentKey> ordered;
  for (const auto& r : results) {
    for (const auto& c : r.components) {
      ComponentKey k{c.match.name, c.match.hkl, c.match.d_ref};
      if (std::find(ordered.begin(), ordered.end(), k) == ordered.end()) ordered.push_back(k);
    }
  }
  std::sort(ordered.begin(), ordered.end(), [](const ComponentKey& a, const ComponentKey& b) {
    if (a.d_ref != b.d_ref) return a.d_ref > b.d_ref;
    return std::tie(a.name, a.hkl) < std::tie(b.name, b.hkl);
  });
  profile.components = ordered;

  profile.intensity.assign(n, std::vector<double>(ordered.size(), 0.0));
  profile.match_pct.assign(n, std::vector<double>(ordered.size(), 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& c : results[i].components) {
      const auto idx = *profile.index_of(c.match.name, c.match.hkl);
      profile.intensity[i][idx] = c.intensity;
      profile.match_pct[i][idx] = c.match.match_pct;
    }
    for (const auto& w : results[i].warnings) {
      profile.warnings.push_back("frame " + std::to_string(i + 1) + ": " + w);
    }
  }
  for (std::size_t c = 0; c < ordered.size(); ++c) {
    profile.first_detection.push_back(
        first_detection(profile, c, options.min_match_pct, options.min_intensity_fraction));
  }
  return profile;
}

std::optional<int> first_detection(const IntensityProfile& profile, std::size_t component, double min_match_pct,
                                   double min_intensity_fraction) {
  require(component < profile.components.size(), "first_detection: unknown component");
  double peak = 0.0;
  for (const auto& row : profile.intensity) peak = std::max(peak, row[component]);
  if (!(peak > 0.0)) return std::nullopt;
  for (std::size_t i = 0; i < profile.frame_count(); ++i) {
    const double v = profile.intensity[i][component];
    if (v > 0.0 && profile.match_pct[i][component] >= min_match_pct && v >= min_intensity_fraction * peak) {
      return static_cast<int>(i + 1);
    }
  }
  return std::nullopt;
}

}  // namespace temphase
