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

#ifndef FDV_CLUSTERING_HPP
#define FDV_CLUSTERING_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fdv/errors.hpp"
#include "fdv/frame.hpp"

namespace fdv {

/// Inputs for the Doppler-continuity threshold.
struct ThresholdParams {
  double max_object_speed_mps = 25.0;
  double max_lidar_speed_mps = 25.0;
  double angular_res_rad = 0.0034;
  double noise_sigma_mps = 0.031;
  double noise_k = 3.0;

  void validate() const {
    if (max_object_speed_mps < 0 || max_lidar_speed_mps < 0 ||
        angular_res_rad < 0 || noise_sigma_mps < 0 || noise_k < 0)
      throw InvalidConfig("threshold: all parameters must be >= 0");
  }
};

/// Same-object Doppler continuity bound plus a noise margin:
///
///   v_th = (max_object_speed + max_lidar_speed) * angular_res
///          + noise_k * sqrt(2) * noise_sigma
///
/// The sqrt(2) accounts for the difference of two independently noisy
/// readings. Two adjacent returns on one rigid body differ by less than the
/// first term; anything larger marks an object boundary.
inline double derive_threshold(const ThresholdParams& p) {
  p.validate();
  return (p.max_object_speed_mps + p.max_lidar_speed_mps) * p.angular_res_rad +
         p.noise_k * std::sqrt(2.0) * p.noise_sigma_mps;
}

struct AngleIntervalDeg {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Viewing angles (relative to the target's motion direction) where a target
/// at the given speed is indistinguishable from the static background.
struct BlindZone {
  double half_width_deg = 0.0;
  AngleIntervalDeg positive;  ///< around +90 deg
  AngleIntervalDeg negative;  ///< around -90 deg
};

/// Solves speed * |cos(phi)| < v_th for phi. The blind set is a pair of
/// intervals of half-width 90 - acos(v_th / speed) degrees around +-90.
/// Throws NoBlindZone when v_th >= speed: then every angle is blind and no
/// finite interval exists.
inline BlindZone blind_zone(double target_speed_mps, double v_th_mps) {
  if (!(target_speed_mps > 0.0) || v_th_mps < 0.0)
    throw InvalidConfig("blind_zone: need target_speed > 0 and v_th >= 0");
  if (v_th_mps >= target_speed_mps)
    throw NoBlindZone("threshold " + std::to_string(v_th_mps) +
                      " m/s >= target speed " +
                      std::to_string(target_speed_mps) + " m/s");
  BlindZone zone;
  zone.half_width_deg =
      90.0 - std::acos(v_th_mps / target_speed_mps) * kRadToDeg;
  zone.positive = {90.0 - zone.half_width_deg, 90.0 + zone.half_width_deg};
  zone.negative = {-90.0 - zone.half_width_deg, -90.0 + zone.half_width_deg};
  return zone;
}

/// One moving cluster: its cell indices (ascending) and whether it is too
/// small for a well-conditioned velocity estimate.
struct MovingCluster {
  std::vector<std::uint32_t> cells;
  bool undersized = false;
};

/// Partition of a frame's valid cells into the static background (the largest
/// cluster) and moving clusters. labels[i] is -1 for empty cells, 0 for the
/// static cluster and k for moving_clusters[k-1].
struct Segmentation {
  std::vector<std::uint32_t> static_cluster;
  std::vector<MovingCluster> moving_clusters;
  std::vector<std::int32_t> labels;

  bool cell_is_moving(std::size_t index) const { return labels[index] > 0; }
};

/// Doppler-continuity region growing over the organized frame.
///
/// A single traversal grows clusters across 8-connected neighbors whenever the
/// two cells' Doppler readings differ by less than v_th; empty cells terminate
/// growth. The largest cluster becomes the static background (ties go to the
/// cluster containing the smallest row-major index). Moving clusters are
/// numbered by their smallest contained cell index, ascending, and clusters
/// smaller than min_cluster_size are flagged undersized.
inline Segmentation segment(const FrameGrid& frame, double v_th,
                            int min_cluster_size = 5) {
  if (!(v_th > 0.0)) throw InvalidConfig("segment: v_th must be > 0");
  const int rows = frame.rows;
  const int cols = frame.cols;
  const std::size_t n = frame.cells.size();

  // Compact copies keep the flood fill on dense 8-byte reads.
  std::vector<double> doppler(n, 0.0);
  std::vector<std::int32_t> component(n, -1);  // -2 = empty cell
  for (std::size_t i = 0; i < n; ++i) {
    if (frame.cells[i])
      doppler[i] = frame.cells[i]->point.doppler;
    else
      component[i] = -2;
  }

  std::vector<std::uint32_t> component_size;
  std::vector<std::uint32_t> stack;
  stack.reserve(1024);

  const std::int32_t offsets[8] = {-cols - 1, -cols, -cols + 1, -1,
                                   1,         cols - 1, cols,   cols + 1};

  for (std::size_t seed = 0; seed < n; ++seed) {
    if (component[seed] != -1) continue;
    const auto id = static_cast<std::int32_t>(component_size.size());
    component[seed] = id;
    std::uint32_t size = 0;
    stack.push_back(static_cast<std::uint32_t>(seed));
    while (!stack.empty()) {
      const std::uint32_t cur = stack.back();
      stack.pop_back();
      ++size;
      const double v_cur = doppler[cur];
      const int row = static_cast<int>(cur) / cols;
      const int col = static_cast<int>(cur) % cols;
      const auto try_join = [&](std::uint32_t neighbor) {
        if (component[neighbor] == -1 &&
            std::abs(doppler[neighbor] - v_cur) < v_th) {
          component[neighbor] = id;
          stack.push_back(neighbor);
        }
      };
      if (row > 0 && row + 1 < rows && col > 0 && col + 1 < cols) {
        for (const auto offset : offsets)
          try_join(static_cast<std::uint32_t>(static_cast<std::int32_t>(cur) + offset));
      } else {
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const int nr = row + dr;
            const int nc = col + dc;
            if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
            try_join(static_cast<std::uint32_t>(nr * cols + nc));
          }
        }
      }
    }
    component_size.push_back(size);
  }

  if (component_size.empty()) throw EmptyFrame("segment: no valid cells");

  // Components are discovered in ascending order of their smallest cell
  // index, so the first maximum also wins the smallest-index tie-break.
  std::size_t static_component = 0;
  for (std::size_t i = 1; i < component_size.size(); ++i)
    if (component_size[i] > component_size[static_component])
      static_component = i;

  Segmentation seg;
  seg.labels.assign(n, -1);
  seg.static_cluster.reserve(component_size[static_component]);
  std::vector<std::int32_t> moving_label(component_size.size(), 0);
  std::int32_t next_label = 1;
  for (std::size_t i = 0; i < component_size.size(); ++i) {
    if (i == static_component) continue;
    moving_label[i] = next_label++;
    MovingCluster cluster;
    cluster.cells.reserve(component_size[i]);
    cluster.undersized =
        component_size[i] < static_cast<std::uint32_t>(min_cluster_size);
    seg.moving_clusters.push_back(std::move(cluster));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t comp = component[i];
    if (comp < 0) continue;
    if (static_cast<std::size_t>(comp) == static_component) {
      seg.labels[i] = 0;
      seg.static_cluster.push_back(static_cast<std::uint32_t>(i));
    } else {
      const std::int32_t label = moving_label[comp];
      seg.labels[i] = label;
      seg.moving_clusters[label - 1].cells.push_back(
          static_cast<std::uint32_t>(i));
    }
  }
  return seg;
}

}  // namespace fdv

#endif  // FDV_CLUSTERING_HPP
