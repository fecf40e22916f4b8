#include "roomforge/camera.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "roomforge/rng.hpp"

namespace roomforge {

namespace {

constexpr double kElevationLowDeg = -50.0;
constexpr double kElevationHighDeg = 50.0;
constexpr double kZoomJitterDeg = 5.0;

double deg2rad(double deg) { return deg * kPi / 180.0; }

Vec3 lerp(const Vec3& a, const Vec3& b, double s) {
  return {a.x + (b.x - a.x) * s, a.y + (b.y - a.y) * s,
          a.z + (b.z - a.z) * s};
}

Vec3 box_center(const PlacedObject& object) {
  return {object.position.x, object.position.y,
          object.z_base + object.size.y / 2.0};
}

// Free dilated cell whose center is closest to p; lowest (row, col) wins
// ties. Used to drop an orbiting camera onto the walkable grid.
bool nearest_free_cell(const OccupancyGrid& grid, Vec2 p, GridIndex* out) {
  bool found = false;
  double best = std::numeric_limits<double>::infinity();
  for (int row = 0; row < grid.rows(); ++row) {
    for (int col = 0; col < grid.cols(); ++col) {
      const GridIndex cell{row, col};
      if (!grid.free(cell)) continue;
      const Vec2 d = grid.cell_center(cell) - p;
      const double d2 = d.dot(d);
      if (d2 < best) {
        best = d2;
        *out = cell;
        found = true;
      }
    }
  }
  return found;
}

}  // namespace

const char* to_string(Trajectory::Mode mode) {
  switch (mode) {
    case Trajectory::Mode::ZoomOut: return "zoom_out";
    case Trajectory::Mode::ZoomIn: return "zoom_in";
    case Trajectory::Mode::Hybrid: return "hybrid";
  }
  return "zoom_out";
}

Trajectory spiral(const Vec3& center, const SpiralOptions& options) {
  Trajectory out;
  out.mode = Trajectory::Mode::ZoomOut;
  const int n = std::max(1, options.turns) * std::max(1, options.poses_per_turn);
  Rng rng(derive_seed(options.seed, 21));
  out.poses.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double s = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    const double azimuth = 2.0 * kPi * i / std::max(1, options.poses_per_turn);
    const double elevation = deg2rad(std::max(
        0.0, kElevationLowDeg + (kElevationHighDeg - kElevationLowDeg) * s));
    const double radius =
        options.radius_min + (options.radius_max - options.radius_min) * s;
    CameraPose pose;
    pose.position = {center.x + radius * std::cos(elevation) * std::cos(azimuth),
                     center.y + radius * std::cos(elevation) * std::sin(azimuth),
                     center.z + radius * std::sin(elevation)};
    pose.target = center;
    pose.fovy = rng.uniform(options.fovy_min, options.fovy_max);
    pose.phase = "zoom_out";
    out.poses.push_back(std::move(pose));
  }
  return out;
}

std::size_t nearest_spiral_index(const Trajectory& spiral_path,
                                 const Vec3& position) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spiral_path.poses.size(); ++i) {
    const Vec3 d = spiral_path.poses[i].position - position;
    const double d2 = d.dot(d);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

Trajectory zoom_in(const NavGrid& nav, const CameraPose& from_pose,
                   const PlacedObject& object, double eye_height,
                   std::uint64_t seed, double fovy_min, double fovy_max) {
  const GridIndex start =
      nav.dilated.cell_at({from_pose.position.x, from_pose.position.y});
  if (!nav.dilated.free(start)) {
    throw NoPath("camera cell is blocked; cannot start a zoom-in");
  }
  PathResult best;
  for (const GridIndex& goal : approach_cells(nav, object)) {
    const PathResult result = astar(nav.dilated, start, goal);
    if (!result.found) continue;
    if (!best.found || result.cost < best.cost) best = result;
  }
  if (!best.found) {
    throw NoPath("no free path reaches '" + object.name + "'");
  }

  Trajectory out;
  out.mode = Trajectory::Mode::ZoomIn;
  const Vec3 target = box_center(object);
  Rng rng(derive_seed(seed, 22));
  out.poses.reserve(best.cells.size());
  for (const GridIndex& cell : best.cells) {
    const Vec2 c = nav.dilated.cell_center(cell);
    // The elevation jitter tilts the view by raising or lowering the eye,
    // keeping the look-at point pinned to the object.
    const double tilt = deg2rad(rng.uniform(-kZoomJitterDeg, kZoomJitterDeg));
    const double horizontal = std::hypot(c.x - target.x, c.y - target.y);
    CameraPose pose;
    pose.position = {c.x, c.y,
                     std::max(0.05, eye_height + std::tan(tilt) * horizontal)};
    pose.target = target;
    pose.fovy = rng.uniform(fovy_min, fovy_max);
    pose.phase = "zoom_in";
    out.poses.push_back(std::move(pose));
  }
  return out;
}

Trajectory zoom_out(const CameraPose& from_pose, const Trajectory& spiral_path,
                    int pose_count) {
  Trajectory out;
  out.mode = Trajectory::Mode::ZoomOut;
  if (spiral_path.poses.empty()) return out;
  const CameraPose& entry =
      spiral_path.poses[nearest_spiral_index(spiral_path, from_pose.position)];
  const Vec3 gap = entry.position - from_pose.position;
  if (gap.norm() <= 1e-9) {
    CameraPose pose = entry;
    pose.phase = "zoom_out";
    out.poses.push_back(std::move(pose));
    return out;
  }
  const int n = std::max(2, pose_count);
  out.poses.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    CameraPose pose;
    pose.position = lerp(from_pose.position, entry.position, s);
    pose.target = lerp(from_pose.target, entry.target, s);
    pose.fovy = from_pose.fovy + (entry.fovy - from_pose.fovy) * s;
    pose.phase = "zoom_out";
    out.poses.push_back(std::move(pose));
  }
  return out;
}

Vec3 scene_spiral_center(const SceneDescription& scene) {
  if (scene.rooms.empty()) return {0.0, 0.0, 1.5};
  Rect bounds = scene.rooms.front().rect();
  double height = scene.rooms.front().wall_height;
  for (const Room& room : scene.rooms) {
    const Rect r = room.rect();
    bounds.x0 = std::min(bounds.x0, r.x0);
    bounds.y0 = std::min(bounds.y0, r.y0);
    bounds.x1 = std::max(bounds.x1, r.x1);
    bounds.y1 = std::max(bounds.y1, r.y1);
    height = std::max(height, room.wall_height);
  }
  const Vec2 c = bounds.center();
  return {c.x, c.y, height / 2.0};
}

Trajectory hybrid(const NavGrid& nav, const SceneLayout& layout,
                  const HybridOptions& options) {
  SpiralOptions spiral_options = options.spiral;
  spiral_options.seed = derive_seed(options.seed, 31);
  const Trajectory orbit =
      spiral(scene_spiral_center(layout.scene), spiral_options);

  std::vector<const PlacedObject*> targets;
  for (const PlacedObject& p : layout.placed) {
    if (p.parent.empty() && p.mount == Mount::Floor) targets.push_back(&p);
  }
  Rng order_rng(derive_seed(options.seed, 11));
  order_rng.shuffle(targets.begin(), targets.end());

  Trajectory out;
  out.mode = Trajectory::Mode::Hybrid;
  if (targets.empty()) {
    out.poses = orbit.poses;
    return out;
  }

  // k objects cut the orbit into k + 1 segments with one excursion between
  // consecutive segments.
  const std::size_t n = orbit.poses.size();
  const std::size_t k = targets.size();
  std::size_t cursor = 0;
  for (std::size_t j = 0; j <= k; ++j) {
    const std::size_t end = n * (j + 1) / (k + 1);
    for (; cursor < end; ++cursor) out.poses.push_back(orbit.poses[cursor]);
    if (j == k) break;

    const PlacedObject& object = *targets[j];
    const CameraPose& from =
        out.poses.empty() ? orbit.poses.front() : out.poses.back();
    GridIndex drop;
    if (!nearest_free_cell(nav.dilated,
                           {from.position.x, from.position.y}, &drop)) {
      continue;  // fully blocked scene: stay on the orbit
    }
    CameraPose start = from;
    const Vec2 c = nav.dilated.cell_center(drop);
    start.position = {c.x, c.y, options.eye_height};
    try {
      const Trajectory approach =
          zoom_in(nav, start, object, options.eye_height,
                  derive_seed(options.seed, 100 + j),
                  spiral_options.fovy_min, spiral_options.fovy_max);
      out.poses.insert(out.poses.end(), approach.poses.begin(),
                       approach.poses.end());
      const Trajectory reset =
          zoom_out(out.poses.back(), orbit, options.transfer_poses);
      out.poses.insert(out.poses.end(), reset.poses.begin(),
                       reset.poses.end());
    } catch (const NoPath&) {
      // Unreachable object: skip its excursion, keep orbiting.
    }
  }
  return out;
}

Json trajectory_to_json(const Trajectory& trajectory) {
  Json poses = Json::array();
  for (const CameraPose& pose : trajectory.poses) {
    Json j;
    j["position"] = {pose.position.x, pose.position.y, pose.position.z};
    j["target"] = {pose.target.x, pose.target.y, pose.target.z};
    j["fovy"] = pose.fovy;
    j["phase"] = pose.phase;
    poses.push_back(std::move(j));
  }
  Json out;
  out["mode"] = to_string(trajectory.mode);
  out["poses"] = std::move(poses);
  return out;
}

std::string trajectory_to_csv(const Trajectory& trajectory) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "px,py,pz,tx,ty,tz,fovy,phase\n";
  for (const CameraPose& pose : trajectory.poses) {
    out << pose.position.x << ',' << pose.position.y << ',' << pose.position.z
        << ',' << pose.target.x << ',' << pose.target.y << ',' << pose.target.z
        << ',' << pose.fovy << ',' << pose.phase << '\n';
  }
  return out.str();
}

}  // namespace roomforge
