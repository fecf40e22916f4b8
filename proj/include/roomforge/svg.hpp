#pragma once

#include <string>

#include "roomforge/arranger.hpp"
#include "roomforge/camera.hpp"

namespace roomforge {

struct SvgOptions {
  double px_per_meter = 100.0;
  double margin_m = 0.5;  // blank border around the scene bounding box
};

// Top-down floor plan: room fills, wall lines with door gaps, window
// ticks, and object footprints with a short facing tick. World y points
// up, so rows are flipped into screen coordinates.
std::string floorplan_svg(const SceneLayout& layout,
                          const SvgOptions& options = {});

// Floor plan plus the camera path as a polyline with phase-colored pose
// dots (blue = zoom_out, red = zoom_in).
std::string trajectory_svg(const SceneLayout& layout,
                           const Trajectory& trajectory,
                           const SvgOptions& options = {});

}  // namespace roomforge
