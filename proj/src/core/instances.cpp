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

#include "instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

#include "morphology.hpp"

namespace temphase {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Felzenszwalb-Huttenlocher lower envelope of parabolas, squared distances.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  d.assign(n, 0.0);
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (f[v[k]] == kInf) {
      v[k] = q;
      continue;
    }
    double s;
    while (true) {
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = f[v[k]] == kInf ? kInf : dq * dq + f[v[k]];
  }
}

}  // namespace

double equivalent_diameter(int area) { return 2.0 * std::sqrt(area / std::numbers::pi); }

Image2D distance_transform(const BinaryMask& mask) {
  // Pad by one background pixel on every side so the border acts as background.
  const int w = mask.width + 2;
  const int h = mask.height + 2;
  std::vector<double> grid(static_cast<std::size_t>(w) * h, 0.0);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (mask.at(x, y)) grid[static_cast<std::size_t>(y + 1) * w + x + 1] = kInf;
    }
  }
  std::vector<double> f;
  std::vector<double> d;
  std::vector<int> v;
  std::vector<double> z;
  for (int x = 0; x < w; ++x) {
    f.resize(h);
    for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
    edt_1d(f, d, v, z);
    for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  for (int y = 0; y < h; ++y) {
    f.assign(grid.begin() + static_cast<std::ptrdiff_t>(y) * w, grid.begin() + static_cast<std::ptrdiff_t>(y + 1) * w);
    edt_1d(f, d, v, z);
    std::copy(d.begin(), d.end(), grid.begin() + static_cast<std::ptrdiff_t>(y) * w);
  }
  Image2D out(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      out.at(x, y) = std::sqrt(grid[static_cast<std::size_t>(y + 1) * w + x + 1]);
    }
  }
  return out;
}

LabelMap watershed_markers(const BinaryMask& mask, const WatershedParams& params) {
  require(params.fg_fraction >= 0.0 && params.fg_fraction <= 1.0, "watershed: fg_fraction must lie in [0, 1]");
  require(params.open_iters >= 0 && params.dilate_iters >= 0, "watershed: iteration counts must be nonnegative");
  const int w = mask.width;
  const int h = mask.height;

  // Sure foreground from the opened mask, thresholded per connected component.
  BinaryMask opened = open(mask, Structuring::kCross3, params.open_iters);
  auto sure_fg = [&](const BinaryMask& m) {
    Image2D dist = distance_transform(m);
    LabelMap comps = label_components(m, Connectivity::kEight);
    std::vector<double> comp_max(comps.count + 1, 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      comp_max[comps.labels[i]] = std::max(comp_max[comps.labels[i]], dist.pixels[i]);
    }
    BinaryMask fg(w, h);
    for (std::size_t i = 0; i < m.size(); ++i) {
      const int c = comps.labels[i];
      fg.bits[i] = c != 0 && dist.pixels[i] >= params.fg_fraction * comp_max[c];
    }
    return fg;
  };
  BinaryMask fg = sure_fg(opened);

  // A component of the input that lost every marker to the opening gets
  // markers from its own, unopened, distance transform.
  LabelMap comps = label_components(mask, Connectivity::kEight);
  std::vector<std::uint8_t> has_marker(comps.count + 1, 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (fg.bits[i] && comps.labels[i]) has_marker[comps.labels[i]] = 1;
  }
  bool orphaned = false;
  for (int c = 1; c <= comps.count; ++c) orphaned = orphaned || !has_marker[c];
  if (orphaned) {
    BinaryMask orphan_mask(w, h);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      orphan_mask.bits[i] = comps.labels[i] != 0 && !has_marker[comps.labels[i]];
    }
    BinaryMask orphan_fg = sure_fg(orphan_mask);
    for (std::size_t i = 0; i < mask.size(); ++i) fg.bits[i] = fg.bits[i] || orphan_fg.bits[i];
  }
  return label_components(fg, Connectivity::kEight);
}

LabelMap watershed_instances(const BinaryMask& mask, const WatershedParams& params) {
  const int w = mask.width;
  const int h = mask.height;
  LabelMap labels = watershed_markers(mask, params);
  if (labels.count == 0) return labels;

  // Sure background (complement of the dilated mask) never floods; the
  // flood is further restricted to the original foreground.
  BinaryMask dilated = dilate(mask, Structuring::kSquare3, params.dilate_iters);
  Image2D dist = distance_transform(mask);

  // Priority flood: deepest (largest distance) first, FIFO among ties.
  using Item = std::tuple<double, std::uint64_t, int>;
  auto cmp = [](const Item& a, const Item& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<1>(a) > std::get<1>(b);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> queue(cmp);
  std::uint64_t order = 0;
  std::vector<std::uint8_t> queued(mask.size(), 0);
  auto push_neighbours = [&](int idx) {
    const int x = idx % w;
    const int y = idx / w;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const int ni = ny * w + nx;
        if (queued[ni] || labels.labels[ni] || !mask.bits[ni] || !dilated.bits[ni]) continue;
        queued[ni] = 1;
        queue.emplace(dist.pixels[ni], order++, ni);
      }
    }
  };
  for (int i = 0; i < w * h; ++i) {
    if (labels.labels[i]) push_neighbours(i);
  }
  // Marker pixels per label, for resolving pixels where two floods meet.
  std::vector<std::vector<int>> seeds(labels.count + 1);
  for (int i = 0; i < w * h; ++i) {
    if (labels.labels[i]) seeds[labels.labels[i]].push_back(i);
  }
  auto seed_distance = [&](int label, int x, int y) {
    double best = kInf;
    for (int s : seeds[label]) {
      const double dx = s % w - x;
      const double dy = s / w - y;
      best = std::min(best, dx * dx + dy * dy);
    }
    return best;
  };
  std::vector<int> adjacent;
  while (!queue.empty()) {
    const int idx = std::get<2>(queue.top());
    queue.pop();
    const int x = idx % w;
    const int y = idx / w;
    adjacent.clear();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const int l = labels.labels[ny * w + nx];
        if (l && std::find(adjacent.begin(), adjacent.end(), l) == adjacent.end()) adjacent.push_back(l);
      }
    }
    // A pixel touching several floods joins the one with the nearest marker.
    int best = adjacent.front();
    if (adjacent.size() > 1) {
      std::sort(adjacent.begin(), adjacent.end());
      double best_d = kInf;
      for (int l : adjacent) {
        const double d = seed_distance(l, x, y);
        if (d < best_d) {
          best_d = d;
          best = l;
        }
      }
    }
    labels.labels[idx] = best;
    push_neighbours(idx);
  }
  return labels;
}

std::vector<Feature> feature_stats(const LabelMap& labels, const Image2D& enhanced_fft,
                                   const Image2D& linear_magnitude) {
  require_same_dims(labels.width, labels.height, enhanced_fft.width, enhanced_fft.height, "feature_stats");
  require_same_dims(labels.width, labels.height, linear_magnitude.width, linear_magnitude.height, "feature_stats");
  std::vector<Feature> features(labels.count);
  std::vector<double> sx(labels.count, 0.0);
  std::vector<double> sy(labels.count, 0.0);
  std::vector<double> smag(labels.count, 0.0);
  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const int l = labels.at(x, y);
      if (!l) continue;
      Feature& f = features[l - 1];
      ++f.area;
      sx[l - 1] += x;
      sy[l - 1] += y;
      smag[l - 1] += linear_magnitude.at(x, y);
      f.pixel_value_count += std::lround(std::clamp(enhanced_fft.at(x, y), 0.0, 1.0) * 255.0);
    }
  }
  std::vector<Feature> out;
  for (int l = 1; l <= labels.count; ++l) {
    Feature f = features[l - 1];
    if (f.area == 0) continue;
    f.id = l;
    f.cx = sx[l - 1] / f.area;
    f.cy = sy[l - 1] / f.area;
    f.equivalent_diameter = equivalent_diameter(f.area);
    f.mean_intensity = smag[l - 1] / f.area;
    out.push_back(f);
  }
  std::stable_sort(out.begin(), out.end(), [](const Feature& a, const Feature& b) { return a.area > b.area; });
  return out;
}

}  // namespace temphase
