// Copyright 2026 the fdv authors
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

#ifndef FDV_FRAME_IO_HPP
#define FDV_FRAME_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "fdv/errors.hpp"
#include "fdv/frame.hpp"

namespace fdv {

// Binary frame file, everything little-endian:
//   magic "FDV1"
//   u32 rows, u32 cols
//   f64 x8 sensor echo: az_fov, el_fov, az_res, el_res, max_range,
//                       frame_rate, range_sigma, velocity_sigma
//   u64 seed
//   rows*cols cell records of 62 bytes:
//     u8 valid | f64 x, y, z, doppler | i32 truth object id |
//     f64 truth velocity x, y, z | u8 truth moving
// Invalid cells are zero-filled so identical frames serialize byte-identically.

inline constexpr char kFrameMagic[4] = {'F', 'D', 'V', '1'};
inline constexpr std::size_t kFrameHeaderBytes = 4 + 8 + 8 * 8 + 8;
inline constexpr std::size_t kCellRecordBytes = 1 + 4 * 8 + 4 + 3 * 8 + 1;

namespace detail {

class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back((v >> (8 * i)) & 0xFF);
  }
  void i32(std::int32_t v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back((v >> (8 * i)) & 0xFF);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

 private:
  std::vector<std::uint8_t>& out_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size)
      : data_(data), size_(size) {}

  std::uint8_t u8() { return data_[take(1)]; }
  std::uint32_t u32() {
    const std::size_t at = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(data_[at + i]) << (8 * i);
    return v;
  }
  std::int32_t i32() { return std::bit_cast<std::int32_t>(u32()); }
  std::uint64_t u64() {
    const std::size_t at = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(data_[at + i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }

 private:
  std::size_t take(std::size_t n) {
    if (pos_ + n > size_) throw IoError("frame file: truncated");
    const std::size_t at = pos_;
    pos_ += n;
    return at;
  }
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<std::uint8_t> encode_frame(const FrameGrid& grid) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(kFrameHeaderBytes + grid.cells.size() * kCellRecordBytes);
  detail::ByteWriter w(bytes);
  for (char c : kFrameMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(static_cast<std::uint32_t>(grid.rows));
  w.u32(static_cast<std::uint32_t>(grid.cols));
  const SensorConfig& s = grid.sensor;
  w.f64(s.azimuth_fov_deg);
  w.f64(s.elevation_fov_deg);
  w.f64(s.azimuth_res_deg);
  w.f64(s.elevation_res_deg);
  w.f64(s.max_range_m);
  w.f64(s.frame_rate_hz);
  w.f64(s.range_noise_sigma_m);
  w.f64(s.velocity_noise_sigma_mps);
  w.u64(grid.seed);
  for (const auto& cell : grid.cells) {
    if (cell) {
      w.u8(1);
      w.f64(cell->point.x);
      w.f64(cell->point.y);
      w.f64(cell->point.z);
      w.f64(cell->point.doppler);
      w.i32(cell->truth_object_id);
      w.f64(cell->truth_velocity.x());
      w.f64(cell->truth_velocity.y());
      w.f64(cell->truth_velocity.z());
      w.u8(cell->truth_moving ? 1 : 0);
    } else {
      for (std::size_t i = 0; i < kCellRecordBytes; ++i) w.u8(0);
    }
  }
  return bytes;
}

inline FrameGrid decode_frame(const std::uint8_t* data, std::size_t size) {
  detail::ByteReader r(data, size);
  for (char expected : kFrameMagic)
    if (r.u8() != static_cast<std::uint8_t>(expected))
      throw IoError("frame file: bad magic");
  FrameGrid grid;
  grid.rows = static_cast<int>(r.u32());
  grid.cols = static_cast<int>(r.u32());
  if (grid.rows <= 0 || grid.cols <= 0 || grid.rows > 1'000'000 ||
      grid.cols > 1'000'000)
    throw IoError("frame file: implausible grid dimensions");
  SensorConfig& s = grid.sensor;
  s.azimuth_fov_deg = r.f64();
  s.elevation_fov_deg = r.f64();
  s.azimuth_res_deg = r.f64();
  s.elevation_res_deg = r.f64();
  s.max_range_m = r.f64();
  s.frame_rate_hz = r.f64();
  s.range_noise_sigma_m = r.f64();
  s.velocity_noise_sigma_mps = r.f64();
  grid.seed = r.u64();
  const std::size_t n = static_cast<std::size_t>(grid.rows) * grid.cols;
  if (size != kFrameHeaderBytes + n * kCellRecordBytes)
    throw IoError("frame file: payload length does not match rows*cols");
  grid.cells.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t valid = r.u8();
    CellRecord cell;
    cell.point.x = r.f64();
    cell.point.y = r.f64();
    cell.point.z = r.f64();
    cell.point.doppler = r.f64();
    cell.truth_object_id = r.i32();
    cell.truth_velocity.x() = r.f64();
    cell.truth_velocity.y() = r.f64();
    cell.truth_velocity.z() = r.f64();
    cell.truth_moving = r.u8() != 0;
    if (valid) grid.cells[i] = cell;
  }
  return grid;
}

inline void write_frame(const FrameGrid& grid, const std::filesystem::path& path) {
  const auto bytes = encode_frame(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

inline FrameGrid read_frame(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_frame(bytes.data(), bytes.size());
}

/// Lossless CSV export (17 significant digits) for debugging.
inline void write_frame_csv(const FrameGrid& grid,
                            const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "row,col,x,y,z,doppler,truth_object_id,truth_vx,truth_vy,truth_vz,"
         "truth_moving\n";
  out.precision(std::numeric_limits<double>::max_digits10);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const auto& cell = grid.at(r, c);
      if (!cell) continue;
      out << r << ',' << c << ',' << cell->point.x << ',' << cell->point.y
          << ',' << cell->point.z << ',' << cell->point.doppler << ','
          << cell->truth_object_id << ',' << cell->truth_velocity.x() << ','
          << cell->truth_velocity.y() << ',' << cell->truth_velocity.z() << ','
          << (cell->truth_moving ? 1 : 0) << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace fdv

#endif  // FDV_FRAME_IO_HPP
