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

#include "imageio.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace temphase {
namespace {

constexpr std::size_t kMrcHeaderBytes = 1024;

static_assert(std::endian::native == std::endian::little, "MRC parser assumes a little-endian host");

template <typename T>
T load_le(std::span<const std::byte> bytes, std::size_t offset) {
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  return v;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Netpbm header: magic, then width, height, maxval separated by whitespace
// with optional '#' comments, then exactly one whitespace byte.
struct PnmHeader {
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t data_offset = 0;
};

PnmHeader parse_pnm_header(std::span<const std::byte> bytes, const std::string& path) {
  PnmHeader h;
  std::size_t pos = 0;
  auto ch = [&](std::size_t i) { return static_cast<char>(bytes[i]); };
  auto skip_ws = [&] {
    while (pos < bytes.size()) {
      char c = ch(pos);
      if (c == '#') {
        while (pos < bytes.size() && ch(pos) != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto token = [&] {
    skip_ws();
    std::string t;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(ch(pos))) && ch(pos) != '#') {
      t.push_back(ch(pos++));
    }
    if (t.empty()) fail(ErrorKind::kFormat, path + ": truncated PNM header");
    return t;
  };
  auto number = [&] {
    std::string t = token();
    try {
      std::size_t used = 0;
      int v = std::stoi(t, &used);
      if (used != t.size() || v <= 0) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail(ErrorKind::kFormat, path + ": bad PNM header field '" + t + "'");
    }
  };
  if (bytes.size() < 2) fail(ErrorKind::kFormat, path + ": file too short for a PNM header");
  h.magic = std::string{ch(0), ch(1)};
  pos = 2;
  h.width = number();
  h.height = number();
  h.maxval = number();
  if (pos >= bytes.size()) fail(ErrorKind::kFormat, path + ": missing PNM payload");
  h.data_offset = pos + 1;
  return h;
}

void write_bytes(const std::filesystem::path& path, const std::string& header,
                 std::span<const std::uint8_t> payload) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for '" + path.string() + "'");
}

}  // namespace

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  in.seekg(0, std::ios::end);
  auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::byte> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (!in) fail(ErrorKind::kIo, "read failed for '" + path.string() + "'");
  return bytes;
}

ImageStack parse_mrc(std::span<const std::byte> bytes, double frame_period_s) {
  require(frame_period_s > 0.0, "frame period must be positive");
  if (bytes.size() < kMrcHeaderBytes) {
    fail(ErrorKind::kFormat, "truncated MRC header: expected 1024 bytes, file ends at byte offset " +
                                 std::to_string(bytes.size()));
  }
  const auto nx = load_le<std::int32_t>(bytes, 0);
  const auto ny = load_le<std::int32_t>(bytes, 4);
  const auto nz = load_le<std::int32_t>(bytes, 8);
  const auto mode = load_le<std::int32_t>(bytes, 12);
  const auto nsymbt = load_le<std::int32_t>(bytes, 92);

  std::size_t sample_bytes = 0;
  switch (mode) {
    case 0: sample_bytes = 1; break;
    case 1: sample_bytes = 2; break;
    case 2: sample_bytes = 4; break;
    case 6: sample_bytes = 2; break;
    default:
      fail(ErrorKind::kUnsupportedMode, "unsupported MRC mode " + std::to_string(mode) +
                                            " (accepted: 0, 1, 2, 6)");
  }
  if (nz == 0) fail(ErrorKind::kEmptyStack, "MRC stack has nz = 0");
  if (nx < 1 || ny < 1 || nz < 0 || nsymbt < 0) {
    fail(ErrorKind::kFormat, "invalid MRC header dimensions nx=" + std::to_string(nx) +
                                 " ny=" + std::to_string(ny) + " nz=" + std::to_string(nz) +
                                 " nsymbt=" + std::to_string(nsymbt));
  }

  ImageStack stack;
  stack.frame_period_s = frame_period_s;
  stack.mode = mode;
  for (int i = 0; i < 3; ++i) stack.cell_angstrom[i] = load_le<float>(bytes, 40 + 4 * i);

  const std::size_t data_offset = kMrcHeaderBytes + static_cast<std::size_t>(nsymbt);
  const std::size_t frame_samples = static_cast<std::size_t>(nx) * ny;
  const std::size_t needed = data_offset + frame_samples * nz * sample_bytes;
  if (bytes.size() < needed) {
    fail(ErrorKind::kFormat, "truncated MRC data: expected " + std::to_string(needed) +
                                 " bytes, file ends at byte offset " + std::to_string(bytes.size()));
  }

  stack.frames.reserve(nz);
  std::size_t offset = data_offset;
  for (int z = 0; z < nz; ++z) {
    Image2D frame(nx, ny);
    for (std::size_t i = 0; i < frame_samples; ++i, offset += sample_bytes) {
      double v = 0.0;
      switch (mode) {
        case 0: v = load_le<std::int8_t>(bytes, offset); break;
        case 1: v = load_le<std::int16_t>(bytes, offset); break;
        case 2: v = load_le<float>(bytes, offset); break;
        case 6: v = load_le<std::uint16_t>(bytes, offset); break;
      }
      if (!std::isfinite(v)) {
        fail(ErrorKind::kFormat, "non-finite MRC sample at byte offset " + std::to_string(offset));
      }
      frame.pixels[i] = v;
    }
    stack.frames.push_back(std::move(frame));
  }
  return stack;
}

ImageStack read_mrc(const std::filesystem::path& path, double frame_period_s) {
  auto bytes = read_file_bytes(path);
  try {
    return parse_mrc(bytes, frame_period_s);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_mrc(const ImageStack& stack, const std::filesystem::path& path) {
  require(!stack.frames.empty(), "cannot write an empty stack");
  const auto& f0 = stack.frames.front();
  std::vector<std::byte> header(kMrcHeaderBytes, std::byte{0});
  auto put_i32 = [&](std::size_t off, std::int32_t v) { std::memcpy(header.data() + off, &v, 4); };
  auto put_f32 = [&](std::size_t off, float v) { std::memcpy(header.data() + off, &v, 4); };
  put_i32(0, f0.width);
  put_i32(4, f0.height);
  put_i32(8, static_cast<std::int32_t>(stack.frames.size()));
  put_i32(12, 2);
  put_i32(28, f0.width);
  put_i32(32, f0.height);
  put_i32(36, static_cast<std::int32_t>(stack.frames.size()));
  for (int i = 0; i < 3; ++i) put_f32(40 + 4 * i, static_cast<float>(stack.cell_angstrom[i]));
  for (int i = 0; i < 3; ++i) put_f32(52 + 4 * i, 90.0f);
  put_i32(64, 1);
  put_i32(68, 2);
  put_i32(72, 3);
  std::memcpy(header.data() + 208, "MAP ", 4);
  header[212] = std::byte{0x44};
  header[213] = std::byte{0x44};

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  std::vector<float> buf;
  for (const auto& f : stack.frames) {
    require_same_dims(f.width, f.height, f0.width, f0.height, "write_mrc");
    buf.assign(f.pixels.begin(), f.pixels.end());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 4));
  }
  if (!out) fail(ErrorKind::kIo, "write failed for '" + path.string() + "'");
}

Image2D read_pgm(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  auto h = parse_pnm_header(bytes, path.string());
  if (h.magic == "P6") {
    fail(ErrorKind::kFormat, path.string() + ": P6 colour image; use read_ppm for overlays");
  }
  if (h.magic != "P5") fail(ErrorKind::kFormat, path.string() + ": not a binary PGM (magic '" + h.magic + "')");
  if (h.maxval != 255 && h.maxval != 65535) {
    fail(ErrorKind::kFormat, path.string() + ": unsupported maxval " + std::to_string(h.maxval));
  }
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
  const std::size_t bps = h.maxval == 255 ? 1 : 2;
  if (bytes.size() < h.data_offset + n * bps) {
    fail(ErrorKind::kFormat, path.string() + ": truncated PGM payload, expected " + std::to_string(n * bps) +
                                 " bytes at offset " + std::to_string(h.data_offset) + ", file ends at " +
                                 std::to_string(bytes.size()));
  }
  Image2D img(h.width, h.height);
  const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data()) + h.data_offset;
  for (std::size_t i = 0; i < n; ++i) {
    unsigned v = bps == 1 ? p[i] : (static_cast<unsigned>(p[2 * i]) << 8) | p[2 * i + 1];
    img.pixels[i] = static_cast<double>(v) / h.maxval;
  }
  return img;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  auto h = parse_pnm_header(bytes, path.string());
  if (h.magic != "P6") fail(ErrorKind::kFormat, path.string() + ": not a binary PPM (magic '" + h.magic + "')");
  if (h.maxval != 255) fail(ErrorKind::kFormat, path.string() + ": only maxval 255 PPM supported");
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height * 3;
  if (bytes.size() < h.data_offset + n) fail(ErrorKind::kFormat, path.string() + ": truncated PPM payload");
  RgbImage img(h.width, h.height);
  std::memcpy(img.data.data(), bytes.data() + h.data_offset, n);
  return img;
}

std::uint8_t to_byte(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

void write_pgm(const Image2D& image, const std::filesystem::path& path) {
  std::vector<std::uint8_t> payload(image.size());
  std::transform(image.pixels.begin(), image.pixels.end(), payload.begin(), to_byte);
  write_bytes(path, "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n",
              payload);
}

void write_pgm(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> payload(mask.size());
  std::transform(mask.bits.begin(), mask.bits.end(), payload.begin(),
                 [](std::uint8_t b) -> std::uint8_t { return b ? 255 : 0; });
  write_bytes(path, "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n",
              payload);
}

void write_ppm(const RgbImage& image, const std::filesystem::path& path) {
  write_bytes(path, "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n",
              image.data);
}

DSpacingDB parse_dspacing_db(std::istream& in) {
  DSpacingDB db;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split_csv(t);
    if (!have_header) {
      if (fields != std::vector<std::string>{"name", "hkl", "d_angstrom"}) {
        fail(ErrorKind::kFormat, "line " + std::to_string(line_no) + ": expected header 'name,hkl,d_angstrom'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      fail(ErrorKind::kFormat, "line " + std::to_string(line_no) + ": expected 3 fields 'name,hkl,d_angstrom'");
    }
    double d = 0.0;
    try {
      std::size_t used = 0;
      d = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument(fields[2]);
    } catch (const std::exception&) {
      fail(ErrorKind::kFormat, "line " + std::to_string(line_no) + ": bad d-spacing '" + fields[2] + "'");
    }
    if (!(d > 0.0) || !std::isfinite(d)) {
      fail(ErrorKind::kArgument, "line " + std::to_string(line_no) + ": d-spacing must be positive, got " + fields[2]);
    }
    if (!seen.emplace(fields[0], fields[1]).second) {
      fail(ErrorKind::kArgument, "line " + std::to_string(line_no) + ": duplicate entry " + fields[0] + " (" +
                                     fields[1] + ")");
    }
    db.entries.push_back({fields[0], fields[1], d});
  }
  if (!have_header) fail(ErrorKind::kFormat, "d-spacing database is missing its header line");
  return db;
}

DSpacingDB read_dspacing_db(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  try {
    return parse_dspacing_db(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace temphase
