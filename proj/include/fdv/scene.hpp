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

#ifndef FDV_SCENE_HPP
#define FDV_SCENE_HPP

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "fdv/errors.hpp"

namespace fdv {

/// Sensor pose: position in the world plus the world-to-sensor rotation.
struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation_world_to_sensor = Eigen::Matrix3d::Identity();

  void validate() const {
    const Eigen::Matrix3d& r = rotation_world_to_sensor;
    if ((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() > 1e-9 ||
        std::abs(r.determinant() - 1.0) > 1e-9)
      throw InvalidConfig("pose: rotation must be in SO(3)");
  }
};

/// Yawed axis-aligned box moving at a constant world-frame velocity.
struct RigidObject {
  int id = 0;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d half_extents = Eigen::Vector3d::Ones();
  double yaw_rad = 0.0;
  Eigen::Vector3d velocity_world = Eigen::Vector3d::Zero();
};

/// Declarative world: rigid boxes, an optional ground plane, and the sensor
/// pose/velocity. Everything moves at constant velocity; advanced() propagates
/// the scene to a later time.
struct SceneSpec {
  std::vector<RigidObject> objects;
  std::optional<double> ground_height_m;
  Pose sensor_pose;
  Eigen::Vector3d sensor_velocity_world = Eigen::Vector3d::Zero();

  void validate() const {
    sensor_pose.validate();
    std::set<int> ids;
    for (const auto& obj : objects) {
      if (!(obj.half_extents.minCoeff() > 0.0))
        throw InvalidConfig("scene: object " + std::to_string(obj.id) +
                            " has non-positive extents");
      if (obj.id == 0)
        throw InvalidConfig("scene: object id 0 is reserved for the static world");
      if (!ids.insert(obj.id).second)
        throw InvalidConfig("scene: duplicate object id " +
                            std::to_string(obj.id));
    }
  }

  SceneSpec advanced(double seconds) const {
    SceneSpec out = *this;
    out.sensor_pose.position += sensor_velocity_world * seconds;
    for (auto& obj : out.objects) obj.center += obj.velocity_world * seconds;
    return out;
  }
};

enum class ScenePreset {
  intersection,
  t_intersection,
  straight_road,
  turn_straight_road,
};

inline ScenePreset parse_preset(std::string_view name) {
  if (name == "intersection") return ScenePreset::intersection;
  if (name == "t_intersection") return ScenePreset::t_intersection;
  if (name == "straight_road") return ScenePreset::straight_road;
  if (name == "turn_straight_road") return ScenePreset::turn_straight_road;
  throw UnknownPreset("unknown scene preset: " + std::string(name));
}

inline std::string preset_name(ScenePreset p) {
  switch (p) {
    case ScenePreset::intersection: return "intersection";
    case ScenePreset::t_intersection: return "t_intersection";
    case ScenePreset::straight_road: return "straight_road";
    case ScenePreset::turn_straight_road: return "turn_straight_road";
  }
  throw UnknownPreset("unknown scene preset enum value");
}

namespace detail {

inline RigidObject box(int id, double cx, double cy, double cz, double hx,
                       double hy, double hz, double vx = 0.0, double vy = 0.0,
                       double vz = 0.0) {
  RigidObject b;
  b.id = id;
  b.center = {cx, cy, cz};
  b.half_extents = {hx, hy, hz};
  b.velocity_world = {vx, vy, vz};
  return b;
}

// Vehicle-scale boxes resting on ground at z = -1.8 (sensor height 1.8 m).
inline RigidObject sedan(int id, double x, double y, double vx, double vy) {
  return box(id, x, y, -1.05, 2.25, 0.9, 0.75, vx, vy);
}
inline RigidObject suv(int id, double x, double y, double vx, double vy) {
  return box(id, x, y, -0.8, 2.4, 0.95, 1.0, vx, vy);
}
inline RigidObject bus(int id, double x, double y, double vx, double vy) {
  return box(id, x, y, -0.3, 5.5, 1.25, 1.5, vx, vy);
}
inline RigidObject pedestrian(int id, double x, double y, double vx, double vy) {
  return box(id, x, y, -0.95, 0.25, 0.25, 0.85, vx, vy);
}

}  // namespace detail

/// Deterministic scenes matching four road archetypes. The sensor sits 1.8 m
/// above the ground plane; walls and buildings provide static structure above
/// the horizon on both sides. Object ids >= 100 are static dressing (walls);
/// ids 1..99 move.
///
///   intersection        stationary sensor; receding, turning and crossing
///                       vehicles plus a crossing pedestrian
///   t_intersection      stationary sensor; laterally crossing vehicles in
///                       front of a facing wall
///   straight_road       sensor moving forward; leading and oncoming vehicles,
///                       all velocities parallel to the road axis
///   turn_straight_road  sensor translating with a lateral component;
///                       forward, oncoming and sideways-crossing vehicles
///
/// Scenes stay geometrically valid for at least 6 simulated seconds.
inline SceneSpec scene_preset(ScenePreset preset) {
  using namespace detail;
  SceneSpec scene;
  scene.ground_height_m = -1.8;
  switch (preset) {
    case ScenePreset::intersection: {
      scene.sensor_velocity_world = {0.0, 0.0, 0.0};
      // Street walls beside the sensor and corner buildings.
      scene.objects.push_back(box(100, 8, 12, 1.2, 6, 0.75, 3));
      scene.objects.push_back(box(101, 8, -12, 1.2, 6, 0.75, 3));
      scene.objects.push_back(box(102, 45, 25, 2.2, 15, 10, 4));
      scene.objects.push_back(box(103, 45, -25, 2.2, 15, 10, 4));
      scene.objects.push_back(box(104, 18, 30, 2.2, 8, 12, 4));
      scene.objects.push_back(box(105, 18, -30, 2.2, 8, 12, 4));
      scene.objects.push_back(sedan(1, 22, -2, 8.0, 0.0));    // receding ahead
      scene.objects.push_back(suv(2, 28, 6, 4.0, -3.5));      // turning across
      scene.objects.push_back(sedan(3, 38, 20, 0.0, -7.0));   // crossing
      scene.objects.push_back(pedestrian(4, 14, 7, 0.0, -1.4));
      break;
    }
    case ScenePreset::t_intersection: {
      scene.sensor_velocity_world = {0.0, 0.0, 0.0};
      // Facing wall across the top of the T; short approach walls keep the
      // cross street visible from the sensor.
      scene.objects.push_back(box(100, 55, 0, 2.2, 2, 60, 4));
      scene.objects.push_back(box(101, 8, 10, 1.2, 6, 0.75, 3));
      scene.objects.push_back(box(102, 8, -10, 1.2, 6, 0.75, 3));
      scene.objects.push_back(sedan(1, 34, -22, 0.0, 8.0));   // lateral crosser
      scene.objects.push_back(sedan(2, 42, 26, 0.0, -9.0));   // lateral crosser
      scene.objects.push_back(bus(3, 48, -30, 0.0, 6.0));     // slow crosser
      break;
    }
    case ScenePreset::straight_road: {
      scene.sensor_velocity_world = {10.0, 0.0, 0.0};
      // Road canyon: long walls on both sides plus a facade far ahead.
      scene.objects.push_back(box(100, 150, 9.5, 1.9, 200, 0.75, 3.7));
      scene.objects.push_back(box(101, 150, -9.5, 1.9, 200, 0.75, 3.7));
      scene.objects.push_back(box(102, 180, 0, 2.2, 2, 30, 4));
      scene.objects.push_back(sedan(1, 35, -1.8, 14.0, 0.0));  // leading
      scene.objects.push_back(sedan(2, 130, 3.2, -11.0, 0.0)); // oncoming
      scene.objects.push_back(sedan(3, 170, 3.2, -11.0, 0.0)); // oncoming, far
      break;
    }
    case ScenePreset::turn_straight_road: {
      scene.sensor_velocity_world = {9.0, 2.5, 0.0};
      scene.objects.push_back(box(100, 150, 20, 1.2, 200, 0.75, 3));
      scene.objects.push_back(box(101, 150, -12, 1.2, 200, 0.75, 3));
      scene.objects.push_back(box(102, 190, 4, 2.2, 2, 32, 4));
      scene.objects.push_back(suv(1, 75, -12, 0.0, 5.0));       // sideways
      scene.objects.push_back(sedan(2, 40, 2, 11.0, 3.0));      // forward
      scene.objects.push_back(sedan(3, 110, 8, -12.0, -3.0));   // oncoming
      break;
    }
  }
  scene.validate();
  return scene;
}

inline SceneSpec scene_preset(std::string_view name) {
  return scene_preset(parse_preset(name));
}

}  // namespace fdv

#endif  // FDV_SCENE_HPP
