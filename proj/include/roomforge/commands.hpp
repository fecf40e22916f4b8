#pragma once

#include <iosfwd>
#include <string>

#include "roomforge/arranger.hpp"
#include "roomforge/camera.hpp"
#include "roomforge/run_config.hpp"

namespace roomforge {

// Process exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParseError = 1;       // unreadable / malformed input
inline constexpr int kExitValidationError = 2;  // well-formed but invalid
inline constexpr int kExitInternalError = 3;    // broken internal invariant
inline constexpr int kExitEditRejected = 4;     // edit would break the layout
inline constexpr int kExitCheckFailed = 5;      // numeric check failed

// Trajectory for config.mode ("zoom_out" | "zoom_in" | "hybrid") over a
// collision-free layout. Throws std::invalid_argument when the layout
// still has overlaps or config.target names no instance; NoPath when the
// scene has no exterior door to walk in from. `log`, when given, receives
// warnings about skipped unreachable zoom-in targets.
Trajectory plan_trajectory(const SceneLayout& layout, const RunConfig& config,
                           std::ostream* log = nullptr);

// Each command reads its inputs, writes its artifacts plus the effective
// config.json into config.out_dir, logs a one-line summary, and returns an
// exit code. Input files are never modified.

// scene file -> layout.json, floorplan.svg, grid.pgm.
int cmd_arrange(const std::string& scene_path, const RunConfig& config,
                std::ostream& log);

// layout.json -> trajectory.json, trajectory.csv, overlay.svg.
int cmd_cameras(const std::string& layout_path, const RunConfig& config,
                std::ostream& log);

// layout.json + edit spec (one op or an array of ops) -> layout.json,
// floorplan.svg.
int cmd_edit(const std::string& layout_path, const std::string& edit_path,
             const RunConfig& config, std::ostream& log);

// Runs the distillation estimator battery -> report.json, curves.csv.
int cmd_itfs_check(const RunConfig& config, std::ostream& log);

}  // namespace roomforge
