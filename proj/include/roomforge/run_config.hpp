#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "roomforge/jsonio.hpp"

namespace roomforge {

// Everything a command needs to reproduce its outputs byte for byte. Each
// command writes the effective config next to its outputs as config.json;
// loading that file and re-running yields identical files. The output
// directory itself is deliberately not part of the serialized form, so a
// rerun into a fresh directory still produces identical bytes.
struct RunConfig {
  std::uint64_t seed = 0;

  // Occupancy grid / agent.
  double cell_size = 0.1;         // (0, 1] meters
  double agent_half_width = 0.2;  // [0, 2] meters
  double walk_under_height = 1.9; // (0, 10] meters

  // Arranger.
  int budget_iters = 200;         // [1, 100000]
  double lattice = 0.1;           // (0, 1] meters
  double wall_mount_base = 1.4;   // [0, 10] meters
  double beside_gap = 0.5;        // [0, 10] meters
  double reach_radius = 1.0;      // (0, 10] meters

  // Camera.
  std::string mode = "hybrid";    // zoom_out | zoom_in | hybrid
  std::string target;             // instance for single-object zoom-in runs
  int turns = 2;                  // [1, 100]
  int poses_per_turn = 60;        // [1, 10000]
  int transfer_poses = 10;        // [2, 10000]
  double eye_height = 1.6;        // (0, 5] meters
  double radius_min = 1.5;        // (0, radius_max]
  double radius_max = 2.5;        // [radius_min, 100]
  double fovy_min = 76.0;         // [1, fovy_max]
  double fovy_max = 96.0;         // [fovy_min, 179]

  // Distillation checks.
  int samples = 64;               // [1, 1000000] draws per estimator
  int descend_steps = 200;        // [1, 1000000]
  double learning_rate = 0.1;     // (0, 10)
  // Discrete-timestep intervals over [0, 1000]; empty = the bundled
  // coarse-to-fine schedule. Interval number m follows from the list.
  std::vector<std::pair<double, double>> intervals;
  // Step-function weight knots (t, w); empty = constant 1.
  std::vector<std::pair<double, double>> weight_knots;

  // Where outputs land. Runtime-only; never serialized.
  std::string out_dir = "out";

  // Throws std::invalid_argument naming the first field out of range.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

Json run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const Json& j);

RunConfig load_run_config(const std::string& path);
void save_run_config(const std::string& path, const RunConfig& config);

}  // namespace roomforge
