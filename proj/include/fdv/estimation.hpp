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

#ifndef FDV_ESTIMATION_HPP
#define FDV_ESTIMATION_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "fdv/errors.hpp"
#include "fdv/frame.hpp"
#include "fdv/rng.hpp"

namespace fdv {

/// Relative singular-value cutoff below which a direction is treated as
/// unconstrained by the observation geometry.
inline constexpr double kRankTolerance = 1e-10;

enum class ConditionFlag { well_conditioned, rank_deficient };

/// Stacked unit ray directions (rows of A) and measured Doppler speeds (V).
struct ObservationSet {
  Eigen::Matrix<double, Eigen::Dynamic, 3> directions;
  Eigen::VectorXd dopplers;

  static ObservationSet from_cells(const FrameGrid& frame,
                                   std::span<const std::uint32_t> cells) {
    ObservationSet obs;
    obs.directions.resize(static_cast<Eigen::Index>(cells.size()), 3);
    obs.dopplers.resize(static_cast<Eigen::Index>(cells.size()));
    for (Eigen::Index i = 0; i < obs.dopplers.size(); ++i) {
      const CellRecord& cell = *frame.cells[cells[static_cast<std::size_t>(i)]];
      obs.directions.row(i) = cell.point.unit_direction().transpose();
      obs.dopplers[i] = cell.point.doppler;
    }
    return obs;
  }
};

/// A 3-vector velocity with fit diagnostics.
struct VelocityEstimate {
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  double residual_rms = 0.0;
  int sample_count = 0;
  ConditionFlag condition = ConditionFlag::well_conditioned;
};

struct LsSolution {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  double residual_rms = 0.0;
  ConditionFlag condition = ConditionFlag::well_conditioned;
};

/// Minimizes ||A x - b|| by SVD. When the numerical rank of A drops below 3
/// (singular values under kRankTolerance * largest) the minimum-norm solution
/// is returned and the result is flagged rank_deficient; nothing throws.
inline LsSolution solve_linear_ls(
    const Eigen::Matrix<double, Eigen::Dynamic, 3>& a,
    const Eigen::VectorXd& b) {
  // Thin SVD needs dynamic columns in Eigen, hence the dense copy.
  const Eigen::MatrixXd a_dyn = a;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a_dyn, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankTolerance);
  LsSolution sol;
  sol.x = svd.solve(b);
  sol.condition = svd.rank() < 3 ? ConditionFlag::rank_deficient
                                 : ConditionFlag::well_conditioned;
  sol.residual_rms =
      (a * sol.x - b).norm() / std::sqrt(static_cast<double>(a.rows()));
  return sol;
}

/// Uniform random subset of at most max_n elements, original order preserved;
/// inputs within the cap pass through unchanged. Deterministic per seed.
template <typename T>
std::vector<T> downsample(const std::vector<T>& items, std::size_t max_n,
                          std::uint64_t seed) {
  if (items.size() <= max_n) return items;
  const auto picked = sample_indices(static_cast<std::uint32_t>(items.size()),
                                     static_cast<std::uint32_t>(max_n), seed);
  std::vector<T> out;
  out.reserve(picked.size());
  for (const auto i : picked) out.push_back(items[i]);
  return out;
}

/// Sensor ego-velocity from static-background cells. A static point's Doppler
/// is v = -e . V_self, so V_self solves the linear system A x = -V.
inline VelocityEstimate estimate_lidar_velocity(
    const FrameGrid& frame, const std::vector<std::uint32_t>& static_cells,
    std::size_t max_n, std::uint64_t seed) {
  if (static_cells.size() < 3)
    throw InsufficientPoints("ego estimate needs >= 3 static returns, got " +
                             std::to_string(static_cells.size()));
  const auto sampled = downsample(static_cells, max_n, seed);
  const auto obs = ObservationSet::from_cells(frame, sampled);
  const auto sol = solve_linear_ls(obs.directions, -obs.dopplers);
  return {sol.x, sol.residual_rms, static_cast<int>(sampled.size()),
          sol.condition};
}

/// One object's velocity from its cluster cells, given the sensor's own
/// velocity. Each cell reads v = e . (V_model - V_self), so V_model solves
/// A x = V + A V_self. Narrow clusters come back flagged rank_deficient.
inline VelocityEstimate estimate_object_velocity(
    const FrameGrid& frame, const std::vector<std::uint32_t>& cluster_cells,
    const Eigen::Vector3d& v_self, std::size_t max_n, std::uint64_t seed) {
  if (cluster_cells.size() < 3)
    throw InsufficientPoints("object estimate needs >= 3 returns, got " +
                             std::to_string(cluster_cells.size()));
  const auto sampled = downsample(cluster_cells, max_n, seed);
  const auto obs = ObservationSet::from_cells(frame, sampled);
  const Eigen::VectorXd rhs = obs.dopplers + obs.directions * v_self;
  const auto sol = solve_linear_ls(obs.directions, rhs);
  return {sol.x, sol.residual_rms, static_cast<int>(sampled.size()),
          sol.condition};
}

}  // namespace fdv

#endif  // FDV_ESTIMATION_HPP
