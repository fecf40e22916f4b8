#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roomforge/grid_nav.hpp"
#include "roomforge/jsonio.hpp"
#include "roomforge/rng.hpp"
#include "roomforge/scene.hpp"

namespace roomforge {

// Soft layout constraint tying an object to a wall, a neighbor, or an
// orientation target.
struct PlacementRule {
  enum class Relation { AgainstWall, Beside, Facing };

  std::string subject;    // object (catalog) name the rule applies to
  Relation relation = Relation::AgainstWall;
  std::string other;      // anchor object name for beside / facing
  std::string direction;  // north/south/east/west, or room_center for facing

  bool operator==(const PlacementRule&) const = default;
};

std::vector<PlacementRule> rules_from_json(const Json& j);
Json rules_to_json(const std::vector<PlacementRule>& rules);

// One placed instance. Instance names are unique within a layout; catalog
// entries with quantity > 1 get numbered instances ("chair 1", "chair 2").
struct PlacedObject {
  std::string name;
  std::string spec;    // catalog entry name
  std::string room;
  std::string parent;  // carrying instance, empty for top-level objects
  Mount mount = Mount::Floor;
  Vec3 size;           // (width, height, depth) meters
  Vec2 position;       // footprint center
  double z_base = 0.0; // underside height
  double yaw = 0.0;

  OrientedBox box() const {
    return OrientedBox::make(
        {position.x, position.y, z_base + size.y / 2.0},
        {size.x / 2.0, size.z / 2.0, size.y / 2.0}, yaw);
  }

  bool operator==(const PlacedObject&) const = default;
};

struct RemovedObject {
  std::string name;
  std::string spec;
  std::string reason;

  bool operator==(const RemovedObject&) const = default;
};

struct SceneLayout {
  SceneDescription scene;
  std::vector<PlacementRule> rules;
  std::vector<PlacedObject> placed;
  std::vector<RemovedObject> removed;

  const PlacedObject* find(const std::string& name) const;
};

struct ArrangeOptions {
  std::uint64_t seed = 0;
  int budget_iters = 200;      // collision-repair iteration budget
  double lattice = 0.1;        // candidate grid pitch, meters
  double wall_mount_base = 1.4;
  double beside_gap = 0.5;     // max clearance for a "beside" rule
  double reach_radius = 1.0;   // how far a reachability fix may move things
  NavOptions nav;
};

// Collision slabs lining the outside of a room's four walls; overlap with
// them is what penalizes furniture poking through a wall.
std::vector<OrientedBox> wall_slabs(const Room& room);

// Total collision score: minus the sum of pairwise box overlaps (both
// orderings of each pair contribute) plus each box's overlap with its
// room's wall slabs. A layout is collision-free exactly when this is 0.
double collision_reward(const SceneLayout& layout);

// Occupancy of the layout: scene walls plus every placed box.
NavGrid layout_nav(const SceneLayout& layout, const NavOptions& options);

struct ReachReport {
  bool has_spawn = false;
  GridIndex spawn;
  int considered = 0;       // top-level objects examined
  int reachable_count = 0;
  std::vector<std::string> unreachable;  // instance names
};

// Raw-grid cells covered by the object's rotated footprint (cell centers
// inside the outline; falls back to the center cell for thin objects).
std::vector<GridIndex> object_footprint_cells(const OccupancyGrid& grid,
                                              const PlacedObject& object);

// Free dilated cells an agent can stand on to interact with the object:
// within dilation_radius + 1 cells (Chebyshev) of its footprint. Sorted by
// (row, col) and deduplicated.
std::vector<GridIndex> approach_cells(const NavGrid& nav,
                                      const PlacedObject& object);

// An object counts as reachable when the agent can walk from the exterior
// door to a free cell next to its footprint (within dilation radius + 1
// cells, Chebyshev).
ReachReport reach_diagnostic(const SceneLayout& layout, const NavOptions& nav);

// Moves or removes offenders until the collision reward is exactly zero.
// Each round relocates the worst offender to its best lattice pose; if no
// pose strictly improves, or the budget runs out, the offender is dropped
// and recorded. Returns rounds used.
int repair_collisions(SceneLayout& layout, const ArrangeOptions& options,
                      Rng& rng);

// Nudges unreachable objects within reach_radius, accepting only moves
// that keep the collision reward at zero and strictly grow the number of
// reachable objects. Objects that cannot be fixed stay put. Returns the
// number of successful moves.
int repair_reachability(SceneLayout& layout, const ArrangeOptions& options,
                        Rng& rng);

// Full pipeline: sequential placement (rule anchors first), collision
// repair, child placement on parent tops, then reachability repair.
SceneLayout arrange(const SceneDescription& scene,
                    const std::vector<PlacementRule>& rules,
                    const ArrangeOptions& options);

// Raised when an interactive edit cannot be applied without breaking the
// zero-collision / reachability contract. The layout is left unchanged.
class EditRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Applies one edit op ("insert" with a catalog entry, "delete" by instance
// name, or "reposition" with position/yaw). Children follow their parent.
void apply_edit(SceneLayout& layout, const Json& edit,
                const ArrangeOptions& options);

Json layout_to_json(const SceneLayout& layout);
SceneLayout layout_from_json(const Json& j);

}  // namespace roomforge
