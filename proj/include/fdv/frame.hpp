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

#ifndef FDV_FRAME_HPP
#define FDV_FRAME_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fdv/errors.hpp"

namespace fdv {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

/// Scanner geometry and noise model.
///
/// The grid is organized (elevation x azimuth): row 0 is the lowest elevation,
/// column 0 the rightmost azimuth (most negative, ISO vehicle frame with x
/// forward, y left, z up). Angles of a cell are the bin centers.
struct SensorConfig {
  double azimuth_fov_deg = 120.0;
  double elevation_fov_deg = 30.0;
  double azimuth_res_deg = 0.2;
  double elevation_res_deg = 0.2;
  double max_range_m = 150.0;
  double frame_rate_hz = 10.0;
  double range_noise_sigma_m = 0.025;
  double velocity_noise_sigma_mps = 0.031;

  int rows() const {
    return static_cast<int>(std::lround(elevation_fov_deg / elevation_res_deg));
  }
  int cols() const {
    return static_cast<int>(std::lround(azimuth_fov_deg / azimuth_res_deg));
  }

  double azimuth_of_col_rad(int col) const {
    return (-0.5 * azimuth_fov_deg + (col + 0.5) * azimuth_res_deg) * kDegToRad;
  }
  double elevation_of_row_rad(int row) const {
    return (-0.5 * elevation_fov_deg + (row + 0.5) * elevation_res_deg) *
           kDegToRad;
  }

  /// Angular step between adjacent rays, radians.
  double angular_res_rad() const { return azimuth_res_deg * kDegToRad; }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0))
        throw InvalidConfig(std::string("sensor: ") + name + " must be > 0");
    };
    positive(azimuth_fov_deg, "azimuth_fov_deg");
    positive(elevation_fov_deg, "elevation_fov_deg");
    positive(azimuth_res_deg, "azimuth_res_deg");
    positive(elevation_res_deg, "elevation_res_deg");
    positive(max_range_m, "max_range_m");
    positive(frame_rate_hz, "frame_rate_hz");
    if (range_noise_sigma_m < 0.0)
      throw InvalidConfig("sensor: range_noise_sigma_m must be >= 0");
    if (velocity_noise_sigma_mps < 0.0)
      throw InvalidConfig("sensor: velocity_noise_sigma_mps must be >= 0");
    auto integral = [](double fov, double res, const char* name) {
      const double bins = fov / res;
      if (std::abs(bins - std::lround(bins)) > 1e-6 || std::lround(bins) < 1)
        throw InvalidConfig(std::string("sensor: ") + name +
                            " FoV is not an integer multiple of the resolution");
    };
    integral(azimuth_fov_deg, azimuth_res_deg, "azimuth");
    integral(elevation_fov_deg, elevation_res_deg, "elevation");
  }
};

/// One return: position in the sensor frame plus radial Doppler speed.
/// Doppler is positive when the point recedes along the ray.
struct DopplerPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double doppler = 0.0;

  Eigen::Vector3d position() const { return {x, y, z}; }
  double range() const { return position().norm(); }
  Eigen::Vector3d unit_direction() const { return position().normalized(); }
};

/// A grid cell's measurement plus noise-free ground truth.
struct CellRecord {
  DopplerPoint point;
  std::int32_t truth_object_id = 0;  ///< 0 = static world
  Eigen::Vector3d truth_velocity = Eigen::Vector3d::Zero();  ///< sensor frame
  bool truth_moving = false;
};

/// Organized (elevation x azimuth) frame. Cell (r, c) sits at row-major index
/// r * cols + c; cells without a return are empty.
struct FrameGrid {
  int rows = 0;
  int cols = 0;
  SensorConfig sensor;    ///< geometry/noise echo of the producing sensor
  std::uint64_t seed = 0; ///< noise seed echo
  std::vector<std::optional<CellRecord>> cells;

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * cols + col;
  }
  int row_of(std::size_t index) const { return static_cast<int>(index / cols); }
  int col_of(std::size_t index) const { return static_cast<int>(index % cols); }

  const std::optional<CellRecord>& at(int row, int col) const {
    return cells[index(row, col)];
  }
  std::optional<CellRecord>& at(int row, int col) {
    return cells[index(row, col)];
  }

  std::size_t valid_count() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.has_value();
    return n;
  }
};

}  // namespace fdv

#endif  // FDV_FRAME_HPP
