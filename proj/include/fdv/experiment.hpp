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

#ifndef FDV_EXPERIMENT_HPP
#define FDV_EXPERIMENT_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fdv/clustering.hpp"
#include "fdv/estimation.hpp"
#include "fdv/metrics.hpp"
#include "fdv/simulate.hpp"

namespace fdv {

/// Pipeline parameters shared by the evaluation harness and the CLI.
struct ExperimentConfig {
  SensorConfig sensor;
  ThresholdParams threshold;
  std::optional<double> v_th_override;
  std::size_t num_th_s = 1000;  ///< static downsample cap for the ego solve
  std::size_t num_th_m = 200;   ///< per-cluster downsample cap
  int min_cluster_size = 5;
  double moving_speed_threshold_mps = 0.05;  ///< truth motion label cutoff
  int warmup_frames = 3;  ///< frames excluded from timing statistics

  double v_th() const {
    return v_th_override ? *v_th_override : derive_threshold(threshold);
  }

  void validate() const {
    sensor.validate();
    threshold.validate();
    if (v_th_override && !(*v_th_override > 0.0))
      throw InvalidConfig("config: v_th override must be > 0");
    if (num_th_s < 3 || num_th_m < 3)
      throw InvalidConfig("config: downsample caps must be >= 3");
    if (warmup_frames < 0)
      throw InvalidConfig("config: warmup_frames must be >= 0");
  }
};

/// One estimated moving cluster, matched to its majority truth object.
struct ObjectErrorRow {
  int frame = 0;
  std::int32_t cluster_label = 0;
  std::size_t cluster_size = 0;
  std::int32_t object_id = 0;  ///< majority truth id; 0 = mislabeled static
  Eigen::Vector3d velocity_estimate = Eigen::Vector3d::Zero();
  Eigen::Vector3d error = Eigen::Vector3d::Zero();
  double error_norm = 0.0;
  bool undersized = false;
  ConditionFlag condition = ConditionFlag::well_conditioned;
};

/// Per-frame measurements.
struct FrameRow {
  int frame = 0;
  std::size_t valid_cells = 0;
  std::size_t static_cells = 0;
  int moving_cluster_count = 0;
  ConfusionCounts confusion;
  ClassificationMetrics metrics;
  Eigen::Vector3d ego_estimate = Eigen::Vector3d::Zero();
  Eigen::Vector3d ego_error = Eigen::Vector3d::Zero();
  double ego_error_norm = 0.0;
  double cluster_seconds = 0.0;
  double estimate_seconds = 0.0;
  /// True when some moving object has a return whose Doppler contrast with
  /// the background falls inside the detection threshold (plus noise margin):
  /// the geometric failure mode for recall.
  bool blind_zone_object = false;
  std::string error;  ///< non-empty when the frame failed

  bool failed() const { return !error.empty(); }
};

/// Aggregated experiment results. Timing aggregates exclude warm-up frames.
struct EvalReport {
  double v_th = 0.0;
  int frame_count = 0;
  int failed_frames = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  Eigen::Vector3d ego_rms = Eigen::Vector3d::Zero();
  double ego_rms_norm = 0.0;
  double clustering_seconds_mean = 0.0;
  double estimation_seconds_mean = 0.0;
  double points_per_second = 0.0;  ///< valid cells per clustering second
  std::vector<ObjectErrorRow> per_object_errors;
  std::vector<FrameRow> frames;
};

namespace detail {

inline double seconds_between(std::chrono::steady_clock::time_point a,
                              std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

inline constexpr std::uint64_t kEgoSalt = 0x45474F;     // "EGO"
inline constexpr std::uint64_t kObjectSalt = 0x4F424A00;  // "OBJ" + label

}  // namespace detail

/// Runs simulate -> segment -> estimate over `frame_count` frames of a
/// constant-velocity scene and accumulates metrics, velocity errors and
/// timings. Frames default to cast_frame output; pass `frame_provider` to
/// source them elsewhere (e.g. from disk). A failing frame is recorded on its
/// row and skipped in aggregates, never fatal.
///
/// Clustering time wraps the segment call only; estimation time wraps the ego
/// and object solves only. Simulation and I/O stay outside both.
inline EvalReport run_experiment(
    const SceneSpec& scene, const ExperimentConfig& cfg, int frame_count,
    std::uint64_t seed,
    const std::function<FrameGrid(int)>& frame_provider = nullptr) {
  cfg.validate();
  scene.validate();

  EvalReport report;
  report.v_th = cfg.v_th();
  report.frame_count = frame_count;
  const double blind_margin =
      cfg.threshold.noise_k * std::sqrt(2.0) * cfg.threshold.noise_sigma_mps;

  double precision_sum = 0, recall_sum = 0, accuracy_sum = 0;
  int precision_n = 0, recall_n = 0, accuracy_n = 0;
  Eigen::Vector3d ego_sq_sum = Eigen::Vector3d::Zero();
  int ego_n = 0;
  double cluster_time_sum = 0, estimate_time_sum = 0;
  std::size_t timed_cells = 0;
  int timed_frames = 0;

  for (int f = 0; f < frame_count; ++f) {
    FrameRow row;
    row.frame = f;
    const SceneSpec scene_now =
        scene.advanced(static_cast<double>(f) / cfg.sensor.frame_rate_hz);
    const std::uint64_t frame_seed = derive_stream(seed, static_cast<std::uint64_t>(f));
    try {
      const FrameGrid grid = frame_provider
                                 ? frame_provider(f)
                                 : cast_frame(scene_now, cfg.sensor, frame_seed);
      row.valid_cells = grid.valid_count();

      const auto t0 = std::chrono::steady_clock::now();
      const Segmentation seg = segment(grid, report.v_th, cfg.min_cluster_size);
      const auto t1 = std::chrono::steady_clock::now();
      row.cluster_seconds = detail::seconds_between(t0, t1);
      row.static_cells = seg.static_cluster.size();
      row.moving_cluster_count = static_cast<int>(seg.moving_clusters.size());

      // Per-point motion classification vs simulator truth.
      std::vector<bool> predicted, truth;
      predicted.reserve(row.valid_cells);
      truth.reserve(row.valid_cells);
      for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        if (!grid.cells[i]) continue;
        predicted.push_back(seg.cell_is_moving(i));
        truth.push_back(grid.cells[i]->truth_velocity.norm() >
                        cfg.moving_speed_threshold_mps);
        if (!row.blind_zone_object && truth.back()) {
          const double contrast = std::abs(
              grid.cells[i]->point.unit_direction().dot(grid.cells[i]->truth_velocity));
          if (contrast < report.v_th + blind_margin) row.blind_zone_object = true;
        }
      }
      row.confusion = confusion(predicted, truth);
      row.metrics = metrics(row.confusion);

      const auto t2 = std::chrono::steady_clock::now();
      const VelocityEstimate ego = estimate_lidar_velocity(
          grid, seg.static_cluster, cfg.num_th_s,
          derive_stream(frame_seed, detail::kEgoSalt));
      std::vector<VelocityEstimate> object_estimates;
      object_estimates.reserve(seg.moving_clusters.size());
      for (std::size_t k = 0; k < seg.moving_clusters.size(); ++k) {
        const auto& cluster = seg.moving_clusters[k];
        if (cluster.cells.size() < 3) {
          object_estimates.emplace_back();  // recorded below as skipped
          continue;
        }
        object_estimates.push_back(estimate_object_velocity(
            grid, cluster.cells, ego.velocity, cfg.num_th_m,
            derive_stream(frame_seed, detail::kObjectSalt + k + 1)));
      }
      const auto t3 = std::chrono::steady_clock::now();
      row.estimate_seconds = detail::seconds_between(t2, t3);

      const Eigen::Vector3d ego_truth =
          scene_now.sensor_pose.rotation_world_to_sensor *
          scene_now.sensor_velocity_world;
      row.ego_estimate = ego.velocity;
      row.ego_error = ego.velocity - ego_truth;
      row.ego_error_norm = row.ego_error.norm();

      std::map<int, Eigen::Vector3d> object_velocity;
      for (const auto& obj : scene_now.objects)
        object_velocity[obj.id] =
            scene_now.sensor_pose.rotation_world_to_sensor * obj.velocity_world;
      for (std::size_t k = 0; k < seg.moving_clusters.size(); ++k) {
        const auto& cluster = seg.moving_clusters[k];
        if (cluster.cells.size() < 3) continue;
        std::map<std::int32_t, std::size_t> votes;
        for (const auto cell : cluster.cells)
          ++votes[grid.cells[cell]->truth_object_id];
        std::int32_t majority = 0;
        std::size_t best = 0;
        for (const auto& [id, count] : votes)
          if (count > best) {
            best = count;
            majority = id;
          }
        ObjectErrorRow obj_row;
        obj_row.frame = f;
        obj_row.cluster_label = static_cast<std::int32_t>(k) + 1;
        obj_row.cluster_size = cluster.cells.size();
        obj_row.object_id = majority;
        obj_row.velocity_estimate = object_estimates[k].velocity;
        const Eigen::Vector3d truth_velocity =
            majority == 0 ? Eigen::Vector3d::Zero() : object_velocity[majority];
        obj_row.error = object_estimates[k].velocity - truth_velocity;
        obj_row.error_norm = obj_row.error.norm();
        obj_row.undersized = cluster.undersized;
        obj_row.condition = object_estimates[k].condition;
        report.per_object_errors.push_back(obj_row);
      }

      if (row.metrics.precision) {
        precision_sum += *row.metrics.precision;
        ++precision_n;
      }
      if (row.metrics.recall) {
        recall_sum += *row.metrics.recall;
        ++recall_n;
      }
      if (row.metrics.accuracy) {
        accuracy_sum += *row.metrics.accuracy;
        ++accuracy_n;
      }
      ego_sq_sum += row.ego_error.cwiseProduct(row.ego_error);
      ++ego_n;
      if (f >= cfg.warmup_frames) {
        cluster_time_sum += row.cluster_seconds;
        estimate_time_sum += row.estimate_seconds;
        timed_cells += row.valid_cells;
        ++timed_frames;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      ++report.failed_frames;
    }
    report.frames.push_back(std::move(row));
  }

  if (precision_n) report.precision = precision_sum / precision_n;
  if (recall_n) report.recall = recall_sum / recall_n;
  if (accuracy_n) report.accuracy = accuracy_sum / accuracy_n;
  if (ego_n) {
    report.ego_rms = (ego_sq_sum / ego_n).cwiseSqrt();
    report.ego_rms_norm = std::sqrt(ego_sq_sum.sum() / ego_n);
  }
  if (timed_frames) {
    report.clustering_seconds_mean = cluster_time_sum / timed_frames;
    report.estimation_seconds_mean = estimate_time_sum / timed_frames;
    if (cluster_time_sum > 0)
      report.points_per_second = static_cast<double>(timed_cells) / cluster_time_sum;
  }
  return report;
}

inline EvalReport run_experiment(ScenePreset preset, const ExperimentConfig& cfg,
                                 int frame_count, std::uint64_t seed) {
  return run_experiment(scene_preset(preset), cfg, frame_count, seed);
}

/// Fully valid synthetic frame for timing runs: a zero-Doppler background with
/// `object_count` 15x15 patches of strongly contrasting Doppler, each of which
/// segments into its own moving cluster. Positions sit on the cell rays at
/// 30 m so estimation sees realistic direction spreads.
inline FrameGrid synthetic_timing_frame(const SensorConfig& sensor,
                                        int object_count) {
  FrameGrid grid;
  grid.rows = sensor.rows();
  grid.cols = sensor.cols();
  grid.sensor = sensor;
  grid.cells.assign(static_cast<std::size_t>(grid.rows) * grid.cols,
                    std::nullopt);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const Eigen::Vector3d p =
          ray_direction(sensor.azimuth_of_col_rad(c),
                        sensor.elevation_of_row_rad(r)) *
          30.0;
      CellRecord cell;
      cell.point = {p.x(), p.y(), p.z(), 0.0};
      grid.cells[grid.index(r, c)] = cell;
    }
  }
  const int patch = 15;
  const int per_band = std::max(1, (grid.cols - 20) / (patch + 40));
  for (int k = 0; k < object_count; ++k) {
    const int band = k / per_band;
    const int slot = k % per_band;
    const int r0 = 10 + band * (patch + 10);
    const int c0 = 10 + slot * (patch + 40);
    if (r0 + patch > grid.rows || c0 + patch > grid.cols)
      throw InvalidConfig("synthetic_timing_frame: too many objects for grid");
    for (int r = r0; r < r0 + patch; ++r)
      for (int c = c0; c < c0 + patch; ++c) {
        auto& cell = grid.cells[grid.index(r, c)];
        cell->point.doppler = 4.0 + 2.0 * k;
        cell->truth_object_id = k + 1;
        cell->truth_velocity = {4.0 + 2.0 * k, 0.0, 0.0};
        cell->truth_moving = true;
      }
  }
  return grid;
}

struct BenchConfig {
  ScenePreset preset = ScenePreset::straight_road;
  ExperimentConfig experiment;
  int frames = 100;        ///< measured preset frames (after warm-up)
  int max_objects = 15;    ///< object-count sweep upper bound
  int reps_per_count = 50; ///< estimation repetitions per object count
  int segment_reps = 20;   ///< repetitions for the size-scaling probe
};

struct BenchReport {
  int frames = 0;
  std::size_t grid_cells = 0;
  double valid_cells_mean = 0.0;
  double segment_ms_mean = 0.0;
  double segment_ms_max = 0.0;
  double grid_cells_per_second = 0.0;   ///< grid size / segment time
  double valid_points_per_second = 0.0; ///< valid returns / segment time
  double estimation_ms_mean = 0.0;
  double objects_per_second = 0.0;  ///< moving-cluster estimates per second
  double ego_only_ms = 0.0;         ///< estimation time with zero moving objects
  std::vector<std::pair<int, double>> estimation_ms_by_count;  ///< k = 1..max
  LineFit estimation_fit_ms;  ///< line over estimation_ms_by_count
  double size_scaling_ratio = 0.0;  ///< segment time full grid / half grid
};

/// Throughput measurements: preset-frame segmentation/estimation rates, the
/// estimation-time-vs-object-count sweep, and a grid-size scaling probe.
inline BenchReport run_bench(const BenchConfig& cfg, std::uint64_t seed) {
  cfg.experiment.validate();
  BenchReport bench;

  // Preset frames: steady-state segment/estimate rates.
  {
    ExperimentConfig exp_cfg = cfg.experiment;
    exp_cfg.warmup_frames = std::min(exp_cfg.warmup_frames, cfg.frames);
    const EvalReport report = run_experiment(
        scene_preset(cfg.preset), exp_cfg, cfg.frames + exp_cfg.warmup_frames,
        seed);
    bench.frames = cfg.frames;
    bench.grid_cells = static_cast<std::size_t>(cfg.experiment.sensor.rows()) *
                       cfg.experiment.sensor.cols();
    double cluster_total = 0, estimate_total = 0, cells_total = 0;
    double worst = 0;
    int counted = 0;
    std::size_t clusters_total = 0;
    for (const auto& row : report.frames) {
      if (row.frame < exp_cfg.warmup_frames || row.failed()) continue;
      cluster_total += row.cluster_seconds;
      estimate_total += row.estimate_seconds;
      cells_total += static_cast<double>(row.valid_cells);
      worst = std::max(worst, row.cluster_seconds);
      clusters_total += static_cast<std::size_t>(row.moving_cluster_count);
      ++counted;
    }
    if (counted > 0 && cluster_total > 0) {
      bench.segment_ms_mean = cluster_total / counted * 1e3;
      bench.segment_ms_max = worst * 1e3;
      bench.grid_cells_per_second =
          static_cast<double>(bench.grid_cells) * counted / cluster_total;
      bench.valid_points_per_second = cells_total / cluster_total;
      bench.estimation_ms_mean = estimate_total / counted * 1e3;
      if (estimate_total > 0)
        bench.objects_per_second =
            static_cast<double>(clusters_total) / estimate_total;
    }
  }

  // Estimation time vs moving-object count on synthetic frames.
  {
    std::vector<double> xs, ys;
    for (int k = 0; k <= cfg.max_objects; ++k) {
      const FrameGrid grid =
          synthetic_timing_frame(cfg.experiment.sensor, k);
      const Segmentation seg =
          segment(grid, cfg.experiment.v_th(), cfg.experiment.min_cluster_size);
      const auto t0 = std::chrono::steady_clock::now();
      for (int rep = 0; rep < cfg.reps_per_count; ++rep) {
        const std::uint64_t rep_seed = derive_stream(seed, 7000 + k * 1000 + rep);
        const VelocityEstimate ego = estimate_lidar_velocity(
            grid, seg.static_cluster, cfg.experiment.num_th_s, rep_seed);
        for (std::size_t j = 0; j < seg.moving_clusters.size(); ++j)
          estimate_object_velocity(grid, seg.moving_clusters[j].cells,
                                   ego.velocity, cfg.experiment.num_th_m,
                                   derive_stream(rep_seed, j));
      }
      const auto t1 = std::chrono::steady_clock::now();
      const double ms =
          detail::seconds_between(t0, t1) / cfg.reps_per_count * 1e3;
      if (k == 0) {
        bench.ego_only_ms = ms;
      } else {
        bench.estimation_ms_by_count.emplace_back(k, ms);
        xs.push_back(static_cast<double>(k));
        ys.push_back(ms);
      }
    }
    if (xs.size() >= 2) bench.estimation_fit_ms = fit_line(xs, ys);
  }

  // Size scaling: halving the grid should roughly halve segment time.
  {
    SensorConfig full = cfg.experiment.sensor;
    SensorConfig half = full;
    half.azimuth_fov_deg = full.azimuth_fov_deg / 2.0;
    auto time_segment = [&](const SensorConfig& sensor) {
      const FrameGrid grid = synthetic_timing_frame(sensor, 4);
      segment(grid, cfg.experiment.v_th(), cfg.experiment.min_cluster_size);
      const auto t0 = std::chrono::steady_clock::now();
      for (int rep = 0; rep < cfg.segment_reps; ++rep)
        segment(grid, cfg.experiment.v_th(), cfg.experiment.min_cluster_size);
      const auto t1 = std::chrono::steady_clock::now();
      return detail::seconds_between(t0, t1) / cfg.segment_reps;
    };
    const double t_half = time_segment(half);
    const double t_full = time_segment(full);
    if (t_half > 0) bench.size_scaling_ratio = t_full / t_half;
  }
  return bench;
}

}  // namespace fdv

#endif  // FDV_EXPERIMENT_HPP
