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

#include "fdv/clustering.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "fdv/rng.hpp"

using Catch::Approx;
using namespace fdv;

namespace {

FrameGrid make_grid(int rows, int cols,
                    const std::vector<std::optional<double>>& dopplers) {
  REQUIRE(dopplers.size() == static_cast<std::size_t>(rows) * cols);
  FrameGrid grid;
  grid.rows = rows;
  grid.cols = cols;
  grid.cells.assign(dopplers.size(), std::nullopt);
  for (std::size_t i = 0; i < dopplers.size(); ++i) {
    if (!dopplers[i]) continue;
    CellRecord cell;
    cell.point = {1.0, 0.0, 0.0, *dopplers[i]};
    grid.cells[i] = cell;
  }
  return grid;
}

// Reference partition via union-find over all similar neighbor pairs --
// a different algorithmic route than the region-growing implementation.
struct DisjointSet {
  std::vector<std::int32_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) { parent[find(a)] = find(b); }
};

Segmentation oracle_segment(const FrameGrid& frame, double v_th,
                            int min_cluster_size) {
  const int rows = frame.rows;
  const int cols = frame.cols;
  const auto n = frame.cells.size();
  DisjointSet dsu(n);
  bool any_valid = false;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto& cell = frame.at(r, c);
      if (!cell) continue;
      any_valid = true;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const int nr = r + dr;
          const int nc = c + dc;
          if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
          const auto& other = frame.at(nr, nc);
          if (!other) continue;
          if (std::abs(other->point.doppler - cell->point.doppler) < v_th)
            dsu.unite(static_cast<std::int32_t>(r * cols + c),
                      static_cast<std::int32_t>(nr * cols + nc));
        }
      }
    }
  }
  if (!any_valid) throw EmptyFrame("oracle: no valid cells");

  // Components keyed by their smallest cell index.
  std::map<std::int32_t, std::vector<std::uint32_t>> by_root;
  for (std::size_t i = 0; i < n; ++i) {
    if (!frame.cells[i]) continue;
    by_root[dsu.find(static_cast<std::int32_t>(i))].push_back(
        static_cast<std::uint32_t>(i));
  }
  std::vector<std::vector<std::uint32_t>> components;
  std::map<std::uint32_t, std::size_t> order;  // min index -> component
  for (auto& [root, cells] : by_root) {
    order[cells.front()] = components.size();
    components.push_back(std::move(cells));
  }
  std::size_t biggest = 0;
  std::uint32_t biggest_min = UINT32_MAX;
  for (const auto& [min_index, comp] : order) {
    if (components[comp].size() > biggest ||
        (components[comp].size() == biggest && min_index < biggest_min)) {
      biggest = components[comp].size();
      biggest_min = min_index;
    }
  }
  Segmentation seg;
  seg.labels.assign(n, -1);
  std::int32_t next = 1;
  for (const auto& [min_index, comp] : order) {
    if (min_index == biggest_min) {
      seg.static_cluster = components[comp];
      for (const auto i : components[comp]) seg.labels[i] = 0;
    } else {
      MovingCluster cluster;
      cluster.cells = components[comp];
      cluster.undersized =
          cluster.cells.size() < static_cast<std::size_t>(min_cluster_size);
      for (const auto i : cluster.cells) seg.labels[i] = next;
      seg.moving_clusters.push_back(std::move(cluster));
      ++next;
    }
  }
  return seg;
}

void require_equal(const Segmentation& a, const Segmentation& b) {
  REQUIRE(a.labels == b.labels);
  REQUIRE(a.static_cluster == b.static_cluster);
  REQUIRE(a.moving_clusters.size() == b.moving_clusters.size());
  for (std::size_t i = 0; i < a.moving_clusters.size(); ++i) {
    REQUIRE(a.moving_clusters[i].cells == b.moving_clusters[i].cells);
    REQUIRE(a.moving_clusters[i].undersized == b.moving_clusters[i].undersized);
  }
}

FrameGrid random_grid(SplitMix64& rng, int max_side) {
  const int rows = 1 + static_cast<int>(rng.bounded(max_side));
  const int cols = 1 + static_cast<int>(rng.bounded(max_side));
  std::vector<std::optional<double>> dopplers(
      static_cast<std::size_t>(rows) * cols);
  const double fill = 0.3 + 0.65 * rng.uniform01();
  for (auto& d : dopplers) {
    if (rng.uniform01() > fill) continue;
    const double level = static_cast<double>(rng.bounded(4));
    d = level + (rng.uniform01() - 0.5) * 0.6;
  }
  return make_grid(rows, cols, dopplers);
}

}  // namespace

TEST_CASE("threshold formula", "[clustering]") {
  CHECK(derive_threshold({25, 25, 0.0034, 0, 0}) == Approx(0.17).epsilon(1e-12));
  CHECK(derive_threshold({0, 0, 0, 0, 0}) == 0.0);
  // 0.17 plus a 3-sigma margin on the difference of two noisy readings.
  CHECK(derive_threshold({25, 25, 0.0034, 0.031, 3}) ==
        Approx(0.30152186130069784).epsilon(1e-12));
  CHECK_THROWS_AS(derive_threshold({-1, 0, 0, 0, 0}), InvalidConfig);
}

TEST_CASE("blind zone intervals around +-90 degrees", "[clustering]") {
  const auto zone = blind_zone(5.0, 0.17);
  CHECK(zone.half_width_deg == Approx(1.9486).margin(5e-4));
  CHECK(std::lround(zone.positive.lo) == 88);
  CHECK(std::lround(zone.positive.hi) == 92);
  CHECK(std::lround(zone.negative.lo) == -92);
  CHECK(std::lround(zone.negative.hi) == -88);

  CHECK(blind_zone(25.0, 0.17).half_width_deg == Approx(0.3896).margin(1e-3));
  CHECK(blind_zone(5.0, 1e-12).half_width_deg == Approx(0.0).margin(1e-6));

  CHECK_THROWS_AS(blind_zone(5.0, 5.0), NoBlindZone);
  CHECK_THROWS_AS(blind_zone(5.0, 6.0), NoBlindZone);
  CHECK_THROWS_AS(blind_zone(0.0, 0.1), InvalidConfig);
}

TEST_CASE("row of cells splits at the Doppler jump", "[clustering]") {
  const auto grid = make_grid(1, 5, {0.00, 0.01, 0.02, 5.00, 5.01});
  const auto seg = segment(grid, 0.2);
  CHECK(seg.static_cluster == std::vector<std::uint32_t>{0, 1, 2});
  REQUIRE(seg.moving_clusters.size() == 1);
  CHECK(seg.moving_clusters[0].cells == std::vector<std::uint32_t>{3, 4});
  CHECK(seg.labels == std::vector<std::int32_t>{0, 0, 0, 1, 1});
  CHECK(seg.moving_clusters[0].undersized);  // 2 cells < default minimum of 5
}

TEST_CASE("uniform frame is a single static cluster", "[clustering]") {
  const auto grid = make_grid(4, 4, std::vector<std::optional<double>>(16, 1.5));
  const auto seg = segment(grid, 0.2);
  CHECK(seg.static_cluster.size() == 16);
  CHECK(seg.moving_clusters.empty());
}

TEST_CASE("frame without valid cells is rejected", "[clustering]") {
  const auto grid =
      make_grid(2, 2, std::vector<std::optional<double>>(4, std::nullopt));
  CHECK_THROWS_AS(segment(grid, 0.2), EmptyFrame);
  CHECK_THROWS_AS(segment(make_grid(1, 1, {1.0}), 0.0), InvalidConfig);
}

TEST_CASE("empty cells block growth", "[clustering]") {
  // Two equal-Doppler regions separated by an empty column stay apart.
  const auto grid = make_grid(
      3, 3,
      {0.0, std::nullopt, 0.0, 0.0, std::nullopt, 0.0, 0.0, std::nullopt, 0.0});
  const auto seg = segment(grid, 0.5);
  CHECK(seg.static_cluster.size() == 3);
  REQUIRE(seg.moving_clusters.size() == 1);
  CHECK(seg.moving_clusters[0].cells.size() == 3);
}

TEST_CASE("size ties go to the smaller cell index", "[clustering]") {
  const auto grid = make_grid(1, 5, {7.0, 7.0, std::nullopt, 3.0, 3.0});
  const auto seg = segment(grid, 0.2);
  CHECK(seg.static_cluster == std::vector<std::uint32_t>{0, 1});
  REQUIRE(seg.moving_clusters.size() == 1);
  CHECK(seg.moving_clusters[0].cells == std::vector<std::uint32_t>{3, 4});
}

TEST_CASE("diagonal neighbors join a cluster", "[clustering]") {
  // A diagonal line of matching Doppler forms one cluster under
  // 8-connectivity.
  const auto grid = make_grid(
      3, 3,
      {5.0, std::nullopt, std::nullopt, std::nullopt, 5.0, std::nullopt,
       std::nullopt, std::nullopt, 5.0});
  const auto seg = segment(grid, 0.1);
  CHECK(seg.static_cluster.size() == 3);
  CHECK(seg.moving_clusters.empty());
}

TEST_CASE("partition is invariant to a constant Doppler shift", "[clustering]") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    auto grid = random_grid(rng, 24);
    bool any = false;
    for (const auto& c : grid.cells) any |= c.has_value();
    if (!any) continue;
    const auto seg = segment(grid, 0.5);
    for (auto& cell : grid.cells)
      if (cell) cell->point.doppler += 17.25;
    const auto shifted = segment(grid, 0.5);
    require_equal(seg, shifted);
  }
}

TEST_CASE("region growing matches the union-find oracle", "[clustering]") {
  SplitMix64 rng(909090);
  int exercised = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto grid = random_grid(rng, 32);
    bool any = false;
    for (const auto& c : grid.cells) any |= c.has_value();
    if (!any) continue;
    const double v_th = 0.3 + 0.5 * rng.uniform01();
    require_equal(segment(grid, v_th), oracle_segment(grid, v_th, 5));
    ++exercised;
  }
  CHECK(exercised > 250);
}

TEST_CASE("segmentation is deterministic", "[clustering]") {
  SplitMix64 rng(11);
  const auto grid = random_grid(rng, 32);
  bool any = false;
  for (const auto& c : grid.cells) any |= c.has_value();
  if (!any) return;
  require_equal(segment(grid, 0.4), segment(grid, 0.4));
}

TEST_CASE("undersized clusters are flagged, larger ones are not",
          "[clustering]") {
  // 8 background cells at 0, a 6-cell patch at 5, a 2-cell patch at 9.
  const auto grid = make_grid(2, 8,
                              {0.0, 0.0, 0.0, 0.0, 5.0, 5.0, 5.0, 9.0,
                               0.0, 0.0, 0.0, 0.0, 5.0, 5.0, 5.0, 9.0});
  const auto seg = segment(grid, 0.5, 5);
  REQUIRE(seg.moving_clusters.size() == 2);
  CHECK(seg.moving_clusters[0].cells.size() == 6);
  CHECK_FALSE(seg.moving_clusters[0].undersized);
  CHECK(seg.moving_clusters[1].cells.size() == 2);
  CHECK(seg.moving_clusters[1].undersized);
}
