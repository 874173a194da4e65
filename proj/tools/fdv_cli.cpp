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

// Batch front end for the Doppler-velocity pipeline.
//
//   fdv simulate    write binary frames + manifest for a scene
//   fdv segment     cluster one frame file, write per-cell labels
//   fdv estimate    cluster + velocity estimates for one frame file
//   fdv pipeline    full evaluation run with CSV/JSON reports
//   fdv bench       throughput measurements
//   fdv export-csv  lossless CSV dump of a frame file
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <json.hpp>

#include "fdv/fdv.hpp"
#include "fdv/json_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool as_json = false;
};

fdv::RunConfig effective_config(const GlobalOptions& global) {
  fdv::RunConfig cfg;
  if (!global.config_path.empty()) {
    try {
      cfg = fdv::load_config(global.config_path);
    } catch (const fdv::IoError& e) {
      // An unreadable config file is a configuration error, not a runtime one.
      throw fdv::InvalidConfig(e.what());
    }
  } else {
    cfg.preset = "straight_road";
  }
  if (global.seed) cfg.seed = *global.seed;
  if (!global.out_dir.empty()) {
    cfg.out_dir = global.out_dir;
  } else if (const char* env = std::getenv("FDV_OUT_DIR");
             env != nullptr && *env != '\0') {
    cfg.out_dir = env;
  }
  cfg.validate();
  return cfg;
}

fs::path config_base_dir(const GlobalOptions& global) {
  if (global.config_path.empty()) return {};
  return fs::path(global.config_path).parent_path();
}

std::string frame_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%04d.fdv", index);
  return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw fdv::IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw fdv::IoError("write failed: " + path.string());
}

std::string csv_optional(const std::optional<double>& v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", *v);
  return buf;
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

// ---------------------------------------------------------------- simulate

int run_simulate(const GlobalOptions& global, std::optional<int> frames_override) {
  fdv::RunConfig cfg = effective_config(global);
  if (frames_override) cfg.frames = *frames_override;
  cfg.validate();
  const fdv::SceneSpec scene = fdv::resolve_scene(cfg, config_base_dir(global));

  const fs::path out(cfg.out_dir);
  fs::create_directories(out);

  json manifest;
  manifest["schema"] = fdv::kManifestSchema;
  manifest["config"] = fdv::config_to_json(cfg);
  manifest["scene"] = fdv::scene_to_json(scene);
  json names = json::array();
  for (int f = 0; f < cfg.frames; ++f) {
    const auto grid = fdv::cast_frame(
        scene.advanced(f / cfg.experiment.sensor.frame_rate_hz),
        cfg.experiment.sensor, fdv::derive_stream(cfg.seed, f));
    const std::string name = frame_file_name(f);
    fdv::write_frame(grid, out / name);
    names.push_back(name);
  }
  manifest["frames"] = names;
  write_text_file(out / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << cfg.frames << " frames + manifest to " << out.string()
            << "\n";
  return 0;
}

// ----------------------------------------------------------------- segment

int run_segment(const GlobalOptions& global, const std::string& frame_path) {
  const fdv::RunConfig cfg = effective_config(global);
  const auto grid = fdv::read_frame(frame_path);
  const auto seg =
      fdv::segment(grid, cfg.experiment.v_th(), cfg.experiment.min_cluster_size);

  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  const fs::path labels_path =
      out / (fs::path(frame_path).stem().string() + "_labels.csv");
  std::ofstream labels(labels_path, std::ios::trunc);
  labels << "row,col,label\n";
  for (int r = 0; r < grid.rows; ++r)
    for (int c = 0; c < grid.cols; ++c) {
      const auto label = seg.labels[grid.index(r, c)];
      if (label < 0) continue;
      labels << r << ',' << c << ',' << label << '\n';
    }

  json summary;
  summary["v_th"] = cfg.experiment.v_th();
  summary["valid_cells"] = grid.valid_count();
  summary["static_cells"] = seg.static_cluster.size();
  json clusters = json::array();
  for (const auto& cluster : seg.moving_clusters)
    clusters.push_back({{"cells", cluster.cells.size()},
                        {"undersized", cluster.undersized}});
  summary["moving_clusters"] = clusters;
  summary["labels_file"] = labels_path.string();
  if (global.as_json) {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << "v_th " << cfg.experiment.v_th() << ": "
              << seg.static_cluster.size() << " static cells, "
              << seg.moving_clusters.size() << " moving clusters -> "
              << labels_path.string() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- estimate

int run_estimate(const GlobalOptions& global, const std::string& frame_path) {
  const fdv::RunConfig cfg = effective_config(global);
  const auto grid = fdv::read_frame(frame_path);
  const auto seg =
      fdv::segment(grid, cfg.experiment.v_th(), cfg.experiment.min_cluster_size);
  const auto ego = fdv::estimate_lidar_velocity(
      grid, seg.static_cluster, cfg.experiment.num_th_s,
      fdv::derive_stream(cfg.seed, 0x45474F));

  json result;
  result["ego"] = {{"velocity", {ego.velocity.x(), ego.velocity.y(), ego.velocity.z()}},
                   {"residual_rms", ego.residual_rms},
                   {"samples", ego.sample_count},
                   {"rank_deficient",
                    ego.condition == fdv::ConditionFlag::rank_deficient}};
  json objects = json::array();
  for (std::size_t k = 0; k < seg.moving_clusters.size(); ++k) {
    const auto& cluster = seg.moving_clusters[k];
    json entry;
    entry["cells"] = cluster.cells.size();
    entry["undersized"] = cluster.undersized;
    if (cluster.cells.size() >= 3) {
      const auto est = fdv::estimate_object_velocity(
          grid, cluster.cells, ego.velocity, cfg.experiment.num_th_m,
          fdv::derive_stream(cfg.seed, 0x4F424A00 + k + 1));
      entry["velocity"] = {est.velocity.x(), est.velocity.y(), est.velocity.z()};
      entry["residual_rms"] = est.residual_rms;
      entry["samples"] = est.sample_count;
      entry["rank_deficient"] =
          est.condition == fdv::ConditionFlag::rank_deficient;
    } else {
      entry["error"] = "insufficient points";
    }
    objects.push_back(entry);
  }
  result["objects"] = objects;

  if (global.as_json) {
    std::cout << result.dump(2) << "\n";
  } else {
    std::cout << "ego velocity [" << ego.velocity.transpose() << "] m/s ("
              << ego.sample_count << " samples, residual "
              << ego.residual_rms << ")\n";
    for (const auto& entry : objects) {
      if (entry.contains("velocity"))
        std::cout << "object: v=[" << entry["velocity"][0].get<double>() << " "
                  << entry["velocity"][1].get<double>() << " "
                  << entry["velocity"][2].get<double>() << "] m/s from "
                  << entry["cells"].get<std::size_t>() << " cells\n";
      else
        std::cout << "object: skipped (" << entry["cells"].get<std::size_t>()
                  << " cells)\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------- pipeline

json report_to_json(const fdv::EvalReport& report) {
  json j;
  j["schema"] = "fdv-report/1";
  j["v_th"] = report.v_th;
  j["frames"] = report.frame_count;
  j["failed_frames"] = report.failed_frames;
  j["precision"] = optional_to_json(report.precision);
  j["recall"] = optional_to_json(report.recall);
  j["accuracy"] = optional_to_json(report.accuracy);
  j["ego_rms"] = {report.ego_rms.x(), report.ego_rms.y(), report.ego_rms.z()};
  j["ego_rms_norm"] = report.ego_rms_norm;
  j["object_estimates"] = report.per_object_errors.size();
  json warnings = json::array();
  for (const auto& row : report.frames)
    if (row.failed())
      warnings.push_back({{"frame", row.frame}, {"error", row.error}});
  j["warnings"] = warnings;
  j["timing"] = {
      {"clustering_ms_mean", report.clustering_seconds_mean * 1e3},
      {"estimation_ms_mean", report.estimation_seconds_mean * 1e3},
      {"points_per_second", report.points_per_second}};
  return j;
}

void write_pipeline_outputs(const fdv::EvalReport& report, const fs::path& out) {
  fs::create_directories(out);

  std::string frames_csv =
      "frame,tp,tn,fp,fn,precision,recall,accuracy,ego_err_x,ego_err_y,"
      "ego_err_z,valid_cells,static_cells,moving_clusters,blind_zone,error,"
      "cluster_ms,estimate_ms\n";
  for (const auto& row : report.frames) {
    frames_csv += std::to_string(row.frame) + ',';
    frames_csv += std::to_string(row.confusion.tp) + ',';
    frames_csv += std::to_string(row.confusion.tn) + ',';
    frames_csv += std::to_string(row.confusion.fp) + ',';
    frames_csv += std::to_string(row.confusion.fn) + ',';
    frames_csv += csv_optional(row.metrics.precision) + ',';
    frames_csv += csv_optional(row.metrics.recall) + ',';
    frames_csv += csv_optional(row.metrics.accuracy) + ',';
    frames_csv += csv_num(row.ego_error.x()) + ',';
    frames_csv += csv_num(row.ego_error.y()) + ',';
    frames_csv += csv_num(row.ego_error.z()) + ',';
    frames_csv += std::to_string(row.valid_cells) + ',';
    frames_csv += std::to_string(row.static_cells) + ',';
    frames_csv += std::to_string(row.moving_cluster_count) + ',';
    frames_csv += (row.blind_zone_object ? "1," : "0,");
    std::string error_text = row.error;
    std::replace(error_text.begin(), error_text.end(), ',', ';');
    frames_csv += error_text + ',';
    frames_csv += csv_num(row.cluster_seconds * 1e3) + ',';
    frames_csv += csv_num(row.estimate_seconds * 1e3) + '\n';
  }
  write_text_file(out / "frames.csv", frames_csv);

  std::string objects_csv =
      "frame,cluster_label,object_id,cluster_size,undersized,rank_deficient,"
      "est_vx,est_vy,est_vz,err_x,err_y,err_z,err_norm\n";
  for (const auto& obj : report.per_object_errors) {
    objects_csv += std::to_string(obj.frame) + ',';
    objects_csv += std::to_string(obj.cluster_label) + ',';
    objects_csv += std::to_string(obj.object_id) + ',';
    objects_csv += std::to_string(obj.cluster_size) + ',';
    objects_csv += (obj.undersized ? "1," : "0,");
    objects_csv +=
        (obj.condition == fdv::ConditionFlag::rank_deficient ? "1," : "0,");
    objects_csv += csv_num(obj.velocity_estimate.x()) + ',';
    objects_csv += csv_num(obj.velocity_estimate.y()) + ',';
    objects_csv += csv_num(obj.velocity_estimate.z()) + ',';
    objects_csv += csv_num(obj.error.x()) + ',';
    objects_csv += csv_num(obj.error.y()) + ',';
    objects_csv += csv_num(obj.error.z()) + ',';
    objects_csv += csv_num(obj.error_norm) + '\n';
  }
  write_text_file(out / "objects.csv", objects_csv);

  // Plot data, one file per reproduced figure.
  std::string fig5 = "frame,precision,recall,accuracy\n";
  std::string fig6 = "frame,valid_cells,cluster_ms\n";
  std::string fig7 = "frame,ego_err_x,ego_err_y,ego_err_z\n";
  std::string fig9 = "frame,moving_clusters,estimate_ms\n";
  for (const auto& row : report.frames) {
    if (row.failed()) continue;
    fig5 += std::to_string(row.frame) + ',' + csv_optional(row.metrics.precision) +
            ',' + csv_optional(row.metrics.recall) + ',' +
            csv_optional(row.metrics.accuracy) + '\n';
    fig6 += std::to_string(row.frame) + ',' + std::to_string(row.valid_cells) +
            ',' + csv_num(row.cluster_seconds * 1e3) + '\n';
    fig7 += std::to_string(row.frame) + ',' + csv_num(row.ego_error.x()) + ',' +
            csv_num(row.ego_error.y()) + ',' + csv_num(row.ego_error.z()) + '\n';
    fig9 += std::to_string(row.frame) + ',' +
            std::to_string(row.moving_cluster_count) + ',' +
            csv_num(row.estimate_seconds * 1e3) + '\n';
  }
  std::string fig8 = "cluster_size,err_norm\n";
  for (const auto& obj : report.per_object_errors)
    fig8 += std::to_string(obj.cluster_size) + ',' + csv_num(obj.error_norm) + '\n';
  write_text_file(out / "fig5_clustering_metrics.csv", fig5);
  write_text_file(out / "fig6_clustering_time.csv", fig6);
  write_text_file(out / "fig7_ego_error.csv", fig7);
  write_text_file(out / "fig8_object_error.csv", fig8);
  write_text_file(out / "fig9_estimation_time.csv", fig9);
}

int run_pipeline(const GlobalOptions& global, const std::string& frames_dir) {
  fdv::RunConfig cfg;
  fdv::SceneSpec scene;
  std::function<fdv::FrameGrid(int)> provider;

  if (!frames_dir.empty()) {
    const fs::path dir(frames_dir);
    nlohmann::json manifest;
    try {
      manifest = fdv::detail::load_json_file(dir / "manifest.json");
    } catch (const fdv::IoError& e) {
      throw fdv::InvalidConfig(e.what());
    }
    if (!manifest.contains("schema") ||
        manifest.at("schema") != fdv::kManifestSchema)
      throw fdv::InvalidConfig("manifest: missing or unsupported 'schema'");
    cfg = fdv::config_from_json(manifest.at("config"));
    scene = fdv::scene_from_json(manifest.at("scene"));
    std::vector<std::string> names;
    for (const auto& n : manifest.at("frames")) names.push_back(n.get<std::string>());
    cfg.frames = static_cast<int>(names.size());
    if (!global.out_dir.empty()) cfg.out_dir = global.out_dir;
    provider = [dir, names](int f) { return fdv::read_frame(dir / names.at(f)); };
  } else {
    cfg = effective_config(global);
    scene = fdv::resolve_scene(cfg, config_base_dir(global));
  }

  const auto report =
      fdv::run_experiment(scene, cfg.experiment, cfg.frames, cfg.seed, provider);

  const fs::path out(cfg.out_dir);
  write_pipeline_outputs(report, out);
  const json report_json = report_to_json(report);
  write_text_file(out / "report.json", report_json.dump(2) + "\n");

  for (const auto& row : report.frames)
    if (row.failed())
      std::cerr << "warning: frame " << row.frame << " failed: " << row.error
                << "\n";

  if (global.as_json) {
    std::cout << report_json.dump(2) << "\n";
  } else {
    std::cout << "frames " << report.frame_count << " (" << report.failed_frames
              << " failed), accuracy "
              << (report.accuracy ? std::to_string(*report.accuracy) : "n/a")
              << ", recall "
              << (report.recall ? std::to_string(*report.recall) : "n/a")
              << ", ego rms [" << report.ego_rms.transpose() << "] m/s\n"
              << "clustering " << report.clustering_seconds_mean * 1e3
              << " ms/frame (" << report.points_per_second / 1e6
              << " M points/s), estimation "
              << report.estimation_seconds_mean * 1e3 << " ms/frame\n"
              << "outputs in " << out.string() << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------- bench

int run_bench_cmd(const GlobalOptions& global, int frames, int max_objects,
                  int reps) {
  fdv::BenchConfig bench_cfg;
  const fdv::RunConfig cfg = effective_config(global);
  bench_cfg.experiment = cfg.experiment;
  if (!cfg.preset.empty()) bench_cfg.preset = fdv::parse_preset(cfg.preset);
  bench_cfg.frames = frames;
  bench_cfg.max_objects = max_objects;
  bench_cfg.reps_per_count = reps;

  const auto bench = fdv::run_bench(bench_cfg, cfg.seed);

  json j;
  j["schema"] = "fdv-bench/1";
  j["frames"] = bench.frames;
  j["grid_cells"] = bench.grid_cells;
  j["segment"] = {{"ms_per_frame_mean", bench.segment_ms_mean},
                  {"ms_per_frame_max", bench.segment_ms_max},
                  {"grid_cells_per_second", bench.grid_cells_per_second},
                  {"valid_points_per_second", bench.valid_points_per_second}};
  j["estimation"] = {{"ms_per_frame_mean", bench.estimation_ms_mean},
                     {"objects_per_second", bench.objects_per_second},
                     {"ego_only_ms", bench.ego_only_ms}};
  json sweep = json::array();
  for (const auto& [k, ms] : bench.estimation_ms_by_count)
    sweep.push_back({{"objects", k}, {"ms", ms}});
  j["estimation_sweep"] = sweep;
  j["estimation_fit"] = {{"slope_ms_per_object", bench.estimation_fit_ms.slope},
                         {"intercept_ms", bench.estimation_fit_ms.intercept},
                         {"r_squared", bench.estimation_fit_ms.r_squared}};
  j["size_scaling_ratio"] = bench.size_scaling_ratio;

  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  write_text_file(out / "bench.json", j.dump(2) + "\n");
  std::string fig9 = "objects,estimation_ms\n";
  fig9 += "0," + csv_num(bench.ego_only_ms) + '\n';
  for (const auto& [k, ms] : bench.estimation_ms_by_count)
    fig9 += std::to_string(k) + ',' + csv_num(ms) + '\n';
  write_text_file(out / "fig9_estimation_sweep.csv", fig9);

  if (global.as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "segment: " << bench.segment_ms_mean << " ms/frame mean over "
              << bench.frames << " frames, "
              << bench.grid_cells_per_second / 1e6 << " M grid cells/s ("
              << bench.valid_points_per_second / 1e6 << " M valid points/s)\n"
              << "estimation: " << bench.estimation_ms_mean
              << " ms/frame mean, " << bench.objects_per_second
              << " objects/s, ego-only " << bench.ego_only_ms << " ms\n"
              << "estimation vs objects: slope "
              << bench.estimation_fit_ms.slope << " ms/object, intercept "
              << bench.estimation_fit_ms.intercept << " ms, r^2 "
              << bench.estimation_fit_ms.r_squared << "\n"
              << "full/half grid segment time ratio: "
              << bench.size_scaling_ratio << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- export-csv

int run_export_csv(const GlobalOptions& global, const std::string& frame_path,
                   std::string to) {
  const fdv::RunConfig cfg = effective_config(global);
  const auto grid = fdv::read_frame(frame_path);
  if (to.empty()) {
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    to = (out / (fs::path(frame_path).stem().string() + ".csv")).string();
  }
  fdv::write_frame_csv(grid, to);
  std::cout << "wrote " << to << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FMCW Doppler-velocity pipeline: simulation, clustering, "
               "velocity estimation and evaluation"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path,
                 "Run configuration JSON (schema fdv-config/1)");
  app.add_option("--seed", global.seed, "Seed override");
  app.add_option("--out", global.out_dir, "Output directory override");
  app.add_flag("--json", global.as_json, "Emit machine-readable JSON on stdout");

  auto* simulate = app.add_subcommand("simulate", "Write frames + manifest");
  std::optional<int> frames_override;
  simulate->add_option("--frames", frames_override, "Frame count override");

  auto* segment_cmd = app.add_subcommand("segment", "Cluster one frame file");
  std::string segment_frame;
  segment_cmd->add_option("--frame", segment_frame, "Frame file (.fdv)")
      ->required();

  auto* estimate_cmd =
      app.add_subcommand("estimate", "Velocity estimates for one frame file");
  std::string estimate_frame;
  estimate_cmd->add_option("--frame", estimate_frame, "Frame file (.fdv)")
      ->required();

  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "Full evaluation run with reports");
  std::string frames_dir;
  pipeline_cmd->add_option(
      "--frames-dir", frames_dir,
      "Evaluate simulate output (reads manifest.json) instead of simulating");

  auto* bench_cmd = app.add_subcommand("bench", "Throughput measurements");
  int bench_frames = 100;
  int bench_max_objects = 15;
  int bench_reps = 50;
  bench_cmd->add_option("--frames", bench_frames, "Measured frames (>= 100)");
  bench_cmd->add_option("--max-objects", bench_max_objects,
                        "Upper bound of the object-count sweep");
  bench_cmd->add_option("--reps", bench_reps, "Repetitions per object count");

  auto* export_cmd =
      app.add_subcommand("export-csv", "Lossless CSV dump of a frame file");
  std::string export_frame, export_to;
  export_cmd->add_option("--frame", export_frame, "Frame file (.fdv)")
      ->required();
  export_cmd->add_option("--to", export_to, "Destination CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // command-line errors are configuration errors
  }

  try {
    if (simulate->parsed()) return run_simulate(global, frames_override);
    if (segment_cmd->parsed()) return run_segment(global, segment_frame);
    if (estimate_cmd->parsed()) return run_estimate(global, estimate_frame);
    if (pipeline_cmd->parsed()) return run_pipeline(global, frames_dir);
    if (bench_cmd->parsed())
      return run_bench_cmd(global, bench_frames, bench_max_objects, bench_reps);
    if (export_cmd->parsed())
      return run_export_csv(global, export_frame, export_to);
  } catch (const fdv::InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const fdv::UnknownPreset& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const fdv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
