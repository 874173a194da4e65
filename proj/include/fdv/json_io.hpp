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

#ifndef FDV_JSON_IO_HPP
#define FDV_JSON_IO_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "fdv/errors.hpp"
#include "fdv/experiment.hpp"
#include "fdv/scene.hpp"

namespace fdv {

inline constexpr const char* kSceneSchema = "fdv-scene/1";
inline constexpr const char* kConfigSchema = "fdv-config/1";
inline constexpr const char* kManifestSchema = "fdv-manifest/1";

/// Everything a batch run needs: scene selection, pipeline parameters, seed
/// and output location.
struct RunConfig {
  std::string preset;      ///< one of the archetype names, or
  std::string scene_file;  ///< path to a scene JSON (exactly one of the two)
  int frames = 50;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  ExperimentConfig experiment;

  void validate() const {
    if (preset.empty() == scene_file.empty())
      throw InvalidConfig(
          "config: exactly one of 'preset' and 'scene_file' must be set");
    if (!preset.empty()) parse_preset(preset);
    if (frames < 1) throw InvalidConfig("config: 'frames' must be >= 1");
    experiment.validate();
  }
};

namespace detail {

using json = nlohmann::json;

inline Eigen::Vector3d vec3_from(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3)
    throw InvalidConfig("field '" + field + "' must be an array of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json vec3_to(const Eigen::Vector3d& v) {
  return json::array({v.x(), v.y(), v.z()});
}

template <typename T>
void read_field(const json& j, const char* field, T& out) {
  if (!j.contains(field)) return;
  try {
    out = j.at(field).get<T>();
  } catch (const json::exception&) {
    throw InvalidConfig(std::string("field '") + field + "' has the wrong type");
  }
}

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidConfig(path.string() + ": " + e.what());
  }
}

}  // namespace detail

inline nlohmann::json scene_to_json(const SceneSpec& scene) {
  using detail::vec3_to;
  nlohmann::json j;
  j["schema"] = kSceneSchema;
  if (scene.ground_height_m) j["ground_height_m"] = *scene.ground_height_m;
  nlohmann::json sensor;
  sensor["position"] = vec3_to(scene.sensor_pose.position);
  nlohmann::json rot = nlohmann::json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      rot.push_back(scene.sensor_pose.rotation_world_to_sensor(r, c));
  sensor["rotation_world_to_sensor"] = rot;
  sensor["velocity_world"] = vec3_to(scene.sensor_velocity_world);
  j["sensor"] = sensor;
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& obj : scene.objects) {
    nlohmann::json o;
    o["id"] = obj.id;
    o["center"] = vec3_to(obj.center);
    o["half_extents"] = vec3_to(obj.half_extents);
    o["yaw_rad"] = obj.yaw_rad;
    o["velocity_world"] = vec3_to(obj.velocity_world);
    objects.push_back(o);
  }
  j["objects"] = objects;
  return j;
}

inline SceneSpec scene_from_json(const nlohmann::json& j) {
  using detail::vec3_from;
  if (!j.contains("schema") || j.at("schema") != kSceneSchema)
    throw InvalidConfig("scene: missing or unsupported 'schema' (want " +
                        std::string(kSceneSchema) + ")");
  SceneSpec scene;
  if (j.contains("ground_height_m") && !j.at("ground_height_m").is_null())
    scene.ground_height_m = j.at("ground_height_m").get<double>();
  if (j.contains("sensor")) {
    const auto& s = j.at("sensor");
    if (s.contains("position"))
      scene.sensor_pose.position = vec3_from(s.at("position"), "sensor.position");
    if (s.contains("rotation_world_to_sensor")) {
      const auto& rot = s.at("rotation_world_to_sensor");
      if (!rot.is_array() || rot.size() != 9)
        throw InvalidConfig(
            "scene: 'sensor.rotation_world_to_sensor' must be 9 numbers, "
            "row-major");
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          scene.sensor_pose.rotation_world_to_sensor(r, c) =
              rot[3 * r + c].get<double>();
    }
    if (s.contains("velocity_world"))
      scene.sensor_velocity_world =
          vec3_from(s.at("velocity_world"), "sensor.velocity_world");
  }
  if (j.contains("objects")) {
    for (const auto& o : j.at("objects")) {
      RigidObject obj;
      if (!o.contains("id")) throw InvalidConfig("scene: object missing 'id'");
      obj.id = o.at("id").get<int>();
      if (o.contains("center")) obj.center = vec3_from(o.at("center"), "center");
      if (o.contains("half_extents"))
        obj.half_extents = vec3_from(o.at("half_extents"), "half_extents");
      if (o.contains("yaw_rad")) obj.yaw_rad = o.at("yaw_rad").get<double>();
      if (o.contains("velocity_world"))
        obj.velocity_world = vec3_from(o.at("velocity_world"), "velocity_world");
      scene.objects.push_back(obj);
    }
  }
  scene.validate();
  return scene;
}

inline SceneSpec load_scene(const std::filesystem::path& path) {
  return scene_from_json(detail::load_json_file(path));
}

inline void save_scene(const SceneSpec& scene, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << scene_to_json(scene).dump(2) << '\n';
}

inline nlohmann::json sensor_to_json(const SensorConfig& s) {
  return {{"azimuth_fov_deg", s.azimuth_fov_deg},
          {"elevation_fov_deg", s.elevation_fov_deg},
          {"azimuth_res_deg", s.azimuth_res_deg},
          {"elevation_res_deg", s.elevation_res_deg},
          {"max_range_m", s.max_range_m},
          {"frame_rate_hz", s.frame_rate_hz},
          {"range_noise_sigma_m", s.range_noise_sigma_m},
          {"velocity_noise_sigma_mps", s.velocity_noise_sigma_mps}};
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["schema"] = kConfigSchema;
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  if (!cfg.scene_file.empty()) j["scene_file"] = cfg.scene_file;
  j["frames"] = cfg.frames;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["sensor"] = sensor_to_json(cfg.experiment.sensor);
  const ThresholdParams& t = cfg.experiment.threshold;
  j["threshold"] = {{"max_object_speed_mps", t.max_object_speed_mps},
                    {"max_lidar_speed_mps", t.max_lidar_speed_mps},
                    {"angular_res_rad", t.angular_res_rad},
                    {"noise_sigma_mps", t.noise_sigma_mps},
                    {"noise_k", t.noise_k}};
  if (cfg.experiment.v_th_override) j["v_th"] = *cfg.experiment.v_th_override;
  j["num_th_s"] = cfg.experiment.num_th_s;
  j["num_th_m"] = cfg.experiment.num_th_m;
  j["min_cluster_size"] = cfg.experiment.min_cluster_size;
  j["moving_speed_threshold_mps"] = cfg.experiment.moving_speed_threshold_mps;
  j["warmup_frames"] = cfg.experiment.warmup_frames;
  return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  using detail::read_field;
  if (!j.contains("schema") || j.at("schema") != kConfigSchema)
    throw InvalidConfig("config: missing or unsupported 'schema' (want " +
                        std::string(kConfigSchema) + ")");
  RunConfig cfg;
  read_field(j, "preset", cfg.preset);
  read_field(j, "scene_file", cfg.scene_file);
  read_field(j, "frames", cfg.frames);
  read_field(j, "seed", cfg.seed);
  read_field(j, "out_dir", cfg.out_dir);
  if (j.contains("sensor")) {
    const auto& s = j.at("sensor");
    SensorConfig& sensor = cfg.experiment.sensor;
    read_field(s, "azimuth_fov_deg", sensor.azimuth_fov_deg);
    read_field(s, "elevation_fov_deg", sensor.elevation_fov_deg);
    read_field(s, "azimuth_res_deg", sensor.azimuth_res_deg);
    read_field(s, "elevation_res_deg", sensor.elevation_res_deg);
    read_field(s, "max_range_m", sensor.max_range_m);
    read_field(s, "frame_rate_hz", sensor.frame_rate_hz);
    read_field(s, "range_noise_sigma_m", sensor.range_noise_sigma_m);
    read_field(s, "velocity_noise_sigma_mps", sensor.velocity_noise_sigma_mps);
  }
  if (j.contains("threshold")) {
    const auto& t = j.at("threshold");
    ThresholdParams& th = cfg.experiment.threshold;
    read_field(t, "max_object_speed_mps", th.max_object_speed_mps);
    read_field(t, "max_lidar_speed_mps", th.max_lidar_speed_mps);
    read_field(t, "angular_res_rad", th.angular_res_rad);
    read_field(t, "noise_sigma_mps", th.noise_sigma_mps);
    read_field(t, "noise_k", th.noise_k);
  }
  if (j.contains("v_th"))
    cfg.experiment.v_th_override = j.at("v_th").get<double>();
  read_field(j, "num_th_s", cfg.experiment.num_th_s);
  read_field(j, "num_th_m", cfg.experiment.num_th_m);
  read_field(j, "min_cluster_size", cfg.experiment.min_cluster_size);
  read_field(j, "moving_speed_threshold_mps",
             cfg.experiment.moving_speed_threshold_mps);
  read_field(j, "warmup_frames", cfg.experiment.warmup_frames);
  cfg.validate();
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  return config_from_json(detail::load_json_file(path));
}

/// Resolves the scene a config points at (preset name or scene file). Paths
/// are resolved relative to `base_dir` when given.
inline SceneSpec resolve_scene(const RunConfig& cfg,
                               const std::filesystem::path& base_dir = {}) {
  if (!cfg.preset.empty()) return scene_preset(cfg.preset);
  std::filesystem::path path = cfg.scene_file;
  if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
  if (!std::filesystem::exists(path))
    throw InvalidConfig("config: scene_file does not exist: " + path.string());
  return load_scene(path);
}

}  // namespace fdv

#endif  // FDV_JSON_IO_HPP
