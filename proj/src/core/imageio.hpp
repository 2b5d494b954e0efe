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

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "image.hpp"

namespace temphase {

inline constexpr double kDefaultFramePeriodS = 2.46;

struct ImageStack {
  std::vector<Image2D> frames;
  double frame_period_s = kDefaultFramePeriodS;
  std::optional<double> pixel_size_nm;
  /// Header cell lengths in angstrom (words 11-13); zero when the writer left them unset.
  std::array<double, 3> cell_angstrom{0.0, 0.0, 0.0};
  int mode = 2;
};

struct DSpacingEntry {
  std::string name;
  std::string hkl;
  double d_angstrom = 0.0;
};

struct DSpacingDB {
  std::vector<DSpacingEntry> entries;
  bool empty() const { return entries.empty(); }
};

// MRC2014 subset: nx/ny/nz at bytes 0-11, mode at 12, cell at 40-51,
// NSYMBT at 92, data at 1024 + NSYMBT. Little-endian only.
ImageStack parse_mrc(std::span<const std::byte> bytes, double frame_period_s = kDefaultFramePeriodS);
ImageStack read_mrc(const std::filesystem::path& path, double frame_period_s = kDefaultFramePeriodS);

/// Writes a mode-2 (float32) stack. Used for fixtures, not as an interchange writer.
void write_mrc(const ImageStack& stack, const std::filesystem::path& path);

/// Binary P5. Samples are scaled to [0,1] by maxval; 16-bit samples are big-endian.
Image2D read_pgm(const std::filesystem::path& path);
/// Binary P6, used to read back overlays.
RgbImage read_ppm(const std::filesystem::path& path);

/// Values are clamped to [0,1] and written as 8-bit P5.
void write_pgm(const Image2D& image, const std::filesystem::path& path);
void write_pgm(const BinaryMask& mask, const std::filesystem::path& path);
void write_ppm(const RgbImage& image, const std::filesystem::path& path);

std::uint8_t to_byte(double v);

/// CSV with header `name,hkl,d_angstrom`. Blank lines and lines starting
/// with '#' are skipped.
DSpacingDB parse_dspacing_db(std::istream& in);
DSpacingDB read_dspacing_db(const std::filesystem::path& path);

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);

}  // namespace temphase
