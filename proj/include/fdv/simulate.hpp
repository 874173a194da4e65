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

#ifndef FDV_SIMULATE_HPP
#define FDV_SIMULATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include <Eigen/Core>

#include "fdv/frame.hpp"
#include "fdv/rng.hpp"
#include "fdv/scene.hpp"

namespace fdv {

/// Unit ray for a (azimuth, elevation) pair in the ISO vehicle frame:
/// x forward, y left, z up; azimuth positive toward +y, elevation toward +z.
inline Eigen::Vector3d ray_direction(double azimuth_rad, double elevation_rad) {
  const double ce = std::cos(elevation_rad);
  return {ce * std::cos(azimuth_rad), ce * std::sin(azimuth_rad),
          std::sin(elevation_rad)};
}

/// Radial Doppler speed of a point seen along unit ray e:
/// v = e . R (v_point_world - v_lidar_world). Positive when the point recedes.
inline double doppler_velocity(const Eigen::Vector3d& ray_unit,
                               const Eigen::Vector3d& point_velocity_world,
                               const Eigen::Vector3d& lidar_velocity_world,
                               const Eigen::Matrix3d& rotation_world_to_sensor) {
  return ray_unit.dot(rotation_world_to_sensor *
                      (point_velocity_world - lidar_velocity_world));
}

/// Entry distance of a world-frame ray into a yawed box, if it hits within
/// (0, max_range]. Rays starting inside the box count as misses.
inline std::optional<double> ray_box_entry(const Eigen::Vector3d& origin_world,
                                           const Eigen::Vector3d& dir_world,
                                           const RigidObject& box,
                                           double max_range) {
  const double c = std::cos(box.yaw_rad);
  const double s = std::sin(box.yaw_rad);
  const auto to_box = [c, s](const Eigen::Vector3d& v) {
    return Eigen::Vector3d(c * v.x() + s * v.y(), -s * v.x() + c * v.y(), v.z());
  };
  const Eigen::Vector3d o = to_box(origin_world - box.center);
  const Eigen::Vector3d d = to_box(dir_world);

  double t_enter = 0.0;
  double t_exit = max_range;
  for (int axis = 0; axis < 3; ++axis) {
    const double extent = box.half_extents[axis];
    if (std::abs(d[axis]) < 1e-12) {
      if (std::abs(o[axis]) > extent) return std::nullopt;
      continue;
    }
    double t1 = (-extent - o[axis]) / d[axis];
    double t2 = (extent - o[axis]) / d[axis];
    if (t1 > t2) std::swap(t1, t2);
    t_enter = std::max(t_enter, t1);
    t_exit = std::min(t_exit, t2);
    if (t_enter > t_exit) return std::nullopt;
  }
  if (t_enter <= 1e-9) return std::nullopt;
  return t_enter;
}

/// Ray-casts the scene into an organized Doppler frame.
///
/// Each (elevation, azimuth) bin holds the nearest box or ground intersection
/// within max_range, with Gaussian range noise applied along the ray and
/// Gaussian noise added to the Doppler reading. Truth fields are noise-free.
///
/// Noise draws come from a per-cell SplitMix64 substream keyed on
/// (seed, row, col), so the frame is a pure function of (scene, sensor, seed)
/// no matter how cells are traversed. A scene without geometry yields an
/// all-empty grid.
inline FrameGrid cast_frame(const SceneSpec& scene, const SensorConfig& sensor,
                            std::uint64_t seed) {
  scene.validate();
  sensor.validate();

  FrameGrid grid;
  grid.rows = sensor.rows();
  grid.cols = sensor.cols();
  grid.sensor = sensor;
  grid.seed = seed;
  grid.cells.assign(static_cast<std::size_t>(grid.rows) * grid.cols,
                    std::nullopt);

  const Eigen::Matrix3d& world_to_sensor = scene.sensor_pose.rotation_world_to_sensor;
  const Eigen::Matrix3d sensor_to_world = world_to_sensor.transpose();
  const Eigen::Vector3d origin = scene.sensor_pose.position;

  for (int row = 0; row < grid.rows; ++row) {
    const double elevation = sensor.elevation_of_row_rad(row);
    for (int col = 0; col < grid.cols; ++col) {
      const double azimuth = sensor.azimuth_of_col_rad(col);
      const Eigen::Vector3d ray_sensor = ray_direction(azimuth, elevation);
      const Eigen::Vector3d ray_world = sensor_to_world * ray_sensor;

      double best_range = sensor.max_range_m;
      const RigidObject* hit = nullptr;
      bool hit_ground = false;

      if (scene.ground_height_m && std::abs(ray_world.z()) > 1e-12) {
        const double t = (*scene.ground_height_m - origin.z()) / ray_world.z();
        if (t > 1e-9 && t <= best_range) {
          best_range = t;
          hit_ground = true;
        }
      }
      for (const auto& obj : scene.objects) {
        if (const auto t = ray_box_entry(origin, ray_world, obj, best_range)) {
          best_range = *t;
          hit = &obj;
          hit_ground = false;
        }
      }
      if (!hit && !hit_ground) continue;

      const Eigen::Vector3d object_velocity =
          hit ? hit->velocity_world : Eigen::Vector3d::Zero();
      const double truth_doppler = doppler_velocity(
          ray_sensor, object_velocity, scene.sensor_velocity_world,
          world_to_sensor);

      SplitMix64 rng(derive_stream(derive_stream(seed, row), col));
      const auto [range_noise, doppler_noise] = rng.gaussian_pair();
      // Keep stored points inside the configured range envelope.
      const double noisy_range =
          std::clamp(best_range + sensor.range_noise_sigma_m * range_noise,
                     1e-6, sensor.max_range_m);
      const Eigen::Vector3d position = ray_sensor * noisy_range;

      CellRecord cell;
      cell.point = {position.x(), position.y(), position.z(),
                    truth_doppler +
                        sensor.velocity_noise_sigma_mps * doppler_noise};
      cell.truth_object_id = hit ? hit->id : 0;
      cell.truth_velocity = world_to_sensor * object_velocity;
      cell.truth_moving = object_velocity.norm() > 0.0;
      grid.cells[grid.index(row, col)] = cell;
    }
  }
  return grid;
}

}  // namespace fdv

#endif  // FDV_SIMULATE_HPP
