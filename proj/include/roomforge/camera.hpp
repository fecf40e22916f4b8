#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "roomforge/arranger.hpp"
#include "roomforge/geometry.hpp"
#include "roomforge/grid_nav.hpp"
#include "roomforge/jsonio.hpp"

namespace roomforge {

// Vertical field-of-view bounds shared by every generated pose.
inline constexpr double kFovyMin = 76.0;
inline constexpr double kFovyMax = 96.0;

struct CameraPose {
  Vec3 position;
  Vec3 target;                         // look-at point; never equals position
  double fovy = (kFovyMin + kFovyMax) / 2.0;
  std::string phase;                   // "zoom_out" or "zoom_in"

  bool operator==(const CameraPose&) const = default;
};

struct Trajectory {
  enum class Mode { ZoomOut, ZoomIn, Hybrid };

  Mode mode = Mode::ZoomOut;
  std::vector<CameraPose> poses;

  bool operator==(const Trajectory&) const = default;
};

const char* to_string(Trajectory::Mode mode);

// Raised when no free path connects the camera to the object's surroundings.
class NoPath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpiralOptions {
  double radius_min = 1.5;
  double radius_max = 2.5;
  double fovy_min = kFovyMin;
  double fovy_max = kFovyMax;
  int turns = 2;
  int poses_per_turn = 60;
  std::uint64_t seed = 0;  // drives the per-pose fovy draw
};

// Orbit around `center`: azimuth sweeps turns * 360 degrees uniformly,
// elevation ramps from the low end of [-50, 50] degrees clamped to the
// upper hemisphere (>= 0), and the radius interpolates across
// [radius_min, radius_max]. Every pose looks at `center`.
Trajectory spiral(const Vec3& center, const SpiralOptions& options = {});

// Index of the spiral pose closest (Euclidean) to `position`; first wins
// on ties.
std::size_t nearest_spiral_index(const Trajectory& spiral_path,
                                 const Vec3& position);

// Walks the shortest free path from the camera's cell to the cheapest
// approach cell of `object`, one pose per path cell at eye height with a
// small random elevation offset. Every pose looks at the object's center.
// Throws NoPath when the camera's cell is blocked or no approach cell is
// connected to it.
Trajectory zoom_in(const NavGrid& nav, const CameraPose& from_pose,
                   const PlacedObject& object, double eye_height = 1.6,
                   std::uint64_t seed = 0, double fovy_min = kFovyMin,
                   double fovy_max = kFovyMax);

// Straight-line transfer from `from_pose` back to the nearest spiral pose,
// blending position, target, and fovy over `pose_count` steps. Collapses
// to a single pose when the camera already sits on the spiral.
Trajectory zoom_out(const CameraPose& from_pose, const Trajectory& spiral_path,
                    int pose_count = 10);

struct HybridOptions {
  SpiralOptions spiral;      // spiral.seed is ignored; derived from `seed`
  double eye_height = 1.6;
  int transfer_poses = 10;
  std::uint64_t seed = 0;
};

// Center of the scene's bounding box at half the tallest wall, the default
// orbit center for whole-scene spirals.
Vec3 scene_spiral_center(const SceneDescription& scene);

// Observe-approach-reset cycles: the orbit is cut into segments with one
// zoom-in/zoom-out excursion per placed floor object, visited once each in
// seed-shuffled order. Objects with no free path are skipped.
Trajectory hybrid(const NavGrid& nav, const SceneLayout& layout,
                  const HybridOptions& options = {});

// Object {mode, poses: [{position, target, fovy, phase}, ...]}; the CSV
// variant carries the pose columns only.
Json trajectory_to_json(const Trajectory& trajectory);
std::string trajectory_to_csv(const Trajectory& trajectory);

}  // namespace roomforge
