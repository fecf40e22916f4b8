#include "roomforge/arranger.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "roomforge/scene_io.hpp"

namespace roomforge {

namespace {

constexpr double kSlabThickness = 0.3;
constexpr double kYaws[4] = {0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0};
constexpr double kEps = 1e-9;

Vec2 front_vector(double yaw) { return {std::sin(yaw), -std::cos(yaw)}; }

Vec2 rotate(Vec2 v, double yaw) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Axis-aligned half extents of the rotated footprint; exact for the four
// cardinal yaws used by the candidate lattice.
Vec2 aabb_half(const Vec3& size, double yaw) {
  const double c = std::fabs(std::cos(yaw)), s = std::fabs(std::sin(yaw));
  return {c * size.x / 2.0 + s * size.z / 2.0,
          s * size.x / 2.0 + c * size.z / 2.0};
}

std::vector<double> lattice_span(double lo, double hi, double pitch) {
  std::vector<double> out;
  if (hi < lo - kEps) return out;
  const int steps = static_cast<int>(std::floor((hi - lo) / pitch + kEps));
  out.reserve(steps + 2);
  for (int k = 0; k <= steps; ++k) out.push_back(lo + k * pitch);
  if (hi - out.back() > kEps) out.push_back(hi);  // far wall stays reachable
  return out;
}

double yaw_facing(Vec2 from, Vec2 target) {
  const Vec2 d = target - from;
  if (d.norm() < kEps) return kYaws[0];
  double best = kYaws[0];
  double best_dot = -2.0;
  for (double yaw : kYaws) {
    const double dot = front_vector(yaw).dot(d) / d.norm();
    if (dot > best_dot + kEps) {
      best_dot = dot;
      best = yaw;
    }
  }
  return best;
}

double yaw_for_cardinal(const std::string& direction) {
  if (direction == "north") return kPi;
  if (direction == "south") return 0.0;
  if (direction == "east") return kPi / 2.0;
  return 3.0 * kPi / 2.0;  // west
}

// Yaw that points an object's front into the room when its back is on the
// given wall.
double yaw_into_room(WallDirection wall) {
  switch (wall) {
    case WallDirection::North: return 0.0;          // front faces south
    case WallDirection::South: return kPi;
    case WallDirection::East: return 3.0 * kPi / 2.0;
    case WallDirection::West: return kPi / 2.0;
  }
  return 0.0;
}

struct Candidate {
  Vec2 pos;
  double yaw = 0.0;
};

struct RuleSet {
  bool against_wall = false;
  std::vector<WallDirection> walls;     // empty means any wall
  std::vector<std::string> beside;      // anchor catalog names
  bool facing = false;
  std::string facing_target;            // name, cardinal, or room_center
};

RuleSet rules_for(const std::vector<PlacementRule>& rules,
                  const std::string& spec_name) {
  RuleSet out;
  for (const PlacementRule& rule : rules) {
    if (rule.subject != spec_name) continue;
    switch (rule.relation) {
      case PlacementRule::Relation::AgainstWall:
        out.against_wall = true;
        if (!rule.direction.empty()) {
          out.walls.push_back(wall_direction_from_string(rule.direction));
        }
        break;
      case PlacementRule::Relation::Beside:
        if (!rule.other.empty()) out.beside.push_back(rule.other);
        break;
      case PlacementRule::Relation::Facing:
        out.facing = true;
        out.facing_target = rule.other.empty() ? rule.direction : rule.other;
        break;
    }
  }
  return out;
}

bool is_cardinal(const std::string& s) {
  return s == "north" || s == "south" || s == "east" || s == "west";
}

const Room& room_for(const SceneLayout& layout, const PlacedObject& p) {
  const Room* room = layout.scene.find_room(p.room);
  if (!room) {
    throw SceneError(SceneErrorCode::UnknownRoom,
                     "placed object '" + p.name + "' references unknown room '" +
                         p.room + "'");
  }
  return *room;
}

// Group = a top-level instance plus everything stacked on it. Repairs move
// groups rigidly so stacked objects never separate from their carrier.
std::vector<std::size_t> group_indices(const SceneLayout& layout,
                                       std::size_t top_index) {
  std::vector<std::size_t> out = {top_index};
  const std::string& name = layout.placed[top_index].name;
  for (std::size_t i = 0; i < layout.placed.size(); ++i) {
    if (layout.placed[i].parent == name) out.push_back(i);
  }
  return out;
}

double penalty_between(const SceneLayout& layout,
                       const std::vector<std::size_t>& group,
                       const std::vector<OrientedBox>& group_boxes) {
  double total = 0.0;
  std::set<std::size_t> in_group(group.begin(), group.end());
  for (std::size_t gi = 0; gi < group.size(); ++gi) {
    const OrientedBox& box = group_boxes[gi];
    for (std::size_t j = 0; j < layout.placed.size(); ++j) {
      if (in_group.count(j)) continue;
      total += iou3d(box, layout.placed[j].box());
    }
    for (const OrientedBox& slab :
         wall_slabs(room_for(layout, layout.placed[group[gi]]))) {
      total += iou3d(box, slab);
    }
  }
  return total;
}

double group_penalty(const SceneLayout& layout, std::size_t top_index) {
  const auto group = group_indices(layout, top_index);
  std::vector<OrientedBox> boxes;
  boxes.reserve(group.size());
  for (std::size_t i : group) boxes.push_back(layout.placed[i].box());
  return penalty_between(layout, group, boxes);
}

void move_group(SceneLayout& layout, std::size_t top_index, Vec2 pos,
                double yaw) {
  PlacedObject& top = layout.placed[top_index];
  const Vec2 old_pos = top.position;
  const double dyaw = yaw - top.yaw;
  for (std::size_t i : group_indices(layout, top_index)) {
    PlacedObject& p = layout.placed[i];
    if (i == top_index) {
      p.position = pos;
      p.yaw = normalize_yaw(yaw);
    } else {
      p.position = pos + rotate(p.position - old_pos, dyaw);
      p.yaw = normalize_yaw(p.yaw + dyaw);
    }
  }
}

// Boxes a candidate group pose would occupy, without mutating the layout.
std::vector<OrientedBox> posed_group_boxes(const SceneLayout& layout,
                                           const std::vector<std::size_t>& group,
                                           Vec2 pos, double yaw) {
  const PlacedObject& top = layout.placed[group.front()];
  const double dyaw = yaw - top.yaw;
  std::vector<OrientedBox> out;
  out.reserve(group.size());
  for (std::size_t i : group) {
    const PlacedObject& p = layout.placed[i];
    PlacedObject moved = p;
    if (i == group.front()) {
      moved.position = pos;
      moved.yaw = normalize_yaw(yaw);
    } else {
      moved.position = pos + rotate(p.position - top.position, dyaw);
      moved.yaw = normalize_yaw(p.yaw + dyaw);
    }
    out.push_back(moved.box());
  }
  return out;
}

std::vector<Candidate> floor_candidates(const SceneLayout& layout,
                                        const Room& room, const Vec3& size,
                                        const RuleSet& rules, double pitch) {
  const Rect r = room.rect();
  std::vector<Candidate> out;

  const auto push_if_allowed = [&](Vec2 pos, double yaw) {
    if (!rules.beside.empty()) {
      bool near_anchor = false;
      bool has_anchor = false;
      for (const std::string& anchor : rules.beside) {
        for (const PlacedObject& p : layout.placed) {
          if (p.spec != anchor || p.room != room.name) continue;
          has_anchor = true;
          const double reach = std::hypot(size.x, size.z) / 2.0 +
                               std::hypot(p.size.x, p.size.z) / 2.0 + 0.5;
          if ((pos - p.position).norm() <= reach) {
            near_anchor = true;
            break;
          }
        }
        if (near_anchor) break;
      }
      if (has_anchor && !near_anchor) return;
    }
    out.push_back({pos, yaw});
  };

  const auto yaw_allowed = [&](Vec2 pos, double yaw) {
    if (!rules.facing) return true;
    if (rules.facing_target == "room_center") {
      return yaw == yaw_facing(pos, r.center());
    }
    if (is_cardinal(rules.facing_target)) {
      return yaw == yaw_for_cardinal(rules.facing_target);
    }
    for (const PlacedObject& p : layout.placed) {
      if (p.spec == rules.facing_target) {
        return yaw == yaw_facing(pos, p.position);
      }
    }
    return true;  // anchor not placed (yet): rule has nothing to face
  };

  if (rules.against_wall) {
    std::vector<WallDirection> walls = rules.walls;
    if (walls.empty()) {
      walls = {WallDirection::South, WallDirection::East, WallDirection::North,
               WallDirection::West};
    }
    for (double yaw : kYaws) {
      const Vec2 half = aabb_half(size, yaw);
      if (r.x1 - r.x0 < 2 * half.x - kEps || r.y1 - r.y0 < 2 * half.y - kEps) {
        continue;
      }
      for (WallDirection wall : walls) {
        switch (wall) {
          case WallDirection::South:
            for (double x : lattice_span(r.x0 + half.x, r.x1 - half.x, pitch)) {
              if (yaw_allowed({x, r.y0 + half.y}, yaw)) {
                push_if_allowed({x, r.y0 + half.y}, yaw);
              }
            }
            break;
          case WallDirection::North:
            for (double x : lattice_span(r.x0 + half.x, r.x1 - half.x, pitch)) {
              if (yaw_allowed({x, r.y1 - half.y}, yaw)) {
                push_if_allowed({x, r.y1 - half.y}, yaw);
              }
            }
            break;
          case WallDirection::West:
            for (double y : lattice_span(r.y0 + half.y, r.y1 - half.y, pitch)) {
              if (yaw_allowed({r.x0 + half.x, y}, yaw)) {
                push_if_allowed({r.x0 + half.x, y}, yaw);
              }
            }
            break;
          case WallDirection::East:
            for (double y : lattice_span(r.y0 + half.y, r.y1 - half.y, pitch)) {
              if (yaw_allowed({r.x1 - half.x, y}, yaw)) {
                push_if_allowed({r.x1 - half.x, y}, yaw);
              }
            }
            break;
        }
      }
    }
    return out;
  }

  for (double yaw : kYaws) {
    const Vec2 half = aabb_half(size, yaw);
    if (r.x1 - r.x0 < 2 * half.x - kEps || r.y1 - r.y0 < 2 * half.y - kEps) {
      continue;
    }
    for (double x : lattice_span(r.x0 + half.x, r.x1 - half.x, pitch)) {
      for (double y : lattice_span(r.y0 + half.y, r.y1 - half.y, pitch)) {
        if (yaw_allowed({x, y}, yaw)) push_if_allowed({x, y}, yaw);
      }
    }
  }
  return out;
}

struct WallCandidate {
  Vec2 pos;
  double yaw = 0.0;
  double z_base = 0.0;
};

std::vector<WallCandidate> wall_candidates(const Room& room, const Vec3& size,
                                           const RuleSet& rules, double pitch,
                                           double mount_base) {
  const Rect r = room.rect();
  std::vector<WallCandidate> out;
  std::vector<WallDirection> walls = rules.walls;
  if (walls.empty()) {
    walls = {WallDirection::South, WallDirection::East, WallDirection::North,
             WallDirection::West};
  }
  // Keep the whole item below the ceiling, dropping it if needed.
  double z_base = std::min(mount_base, room.wall_height - size.y);
  if (z_base < 0.0) z_base = 0.0;
  const double hw = size.x / 2.0, hd = size.z / 2.0;
  for (WallDirection wall : walls) {
    switch (wall) {
      case WallDirection::South:
        for (double x : lattice_span(r.x0 + hw, r.x1 - hw, pitch)) {
          out.push_back({{x, r.y0 + hd}, yaw_into_room(wall), z_base});
        }
        break;
      case WallDirection::North:
        for (double x : lattice_span(r.x0 + hw, r.x1 - hw, pitch)) {
          out.push_back({{x, r.y1 - hd}, yaw_into_room(wall), z_base});
        }
        break;
      case WallDirection::West:
        for (double y : lattice_span(r.y0 + hw, r.y1 - hw, pitch)) {
          out.push_back({{r.x0 + hd, y}, yaw_into_room(wall), z_base});
        }
        break;
      case WallDirection::East:
        for (double y : lattice_span(r.y0 + hw, r.y1 - hw, pitch)) {
          out.push_back({{r.x1 - hd, y}, yaw_into_room(wall), z_base});
        }
        break;
    }
  }
  return out;
}

// Child sizes come from the catalog when the name matches an entry there;
// unnamed bric-a-brac falls back to a 20 cm cube.
Vec3 child_size_m(const SceneDescription& scene, const std::string& name) {
  if (const ObjectSpec* spec = scene.find_object(name)) {
    return {spec->width_m(), spec->height_m(), spec->depth_m()};
  }
  return {0.2, 0.2, 0.2};
}

std::string unique_instance_name(const SceneLayout& layout,
                                 const std::string& base) {
  std::set<std::string> used;
  for (const PlacedObject& p : layout.placed) used.insert(p.name);
  for (const RemovedObject& p : layout.removed) used.insert(p.name);
  if (!used.count(base)) return base;
  for (int k = 2;; ++k) {
    const std::string cand = base + " " + std::to_string(k);
    if (!used.count(cand)) return cand;
  }
}

// Places every stacked child of `top` on its upper face. Children must fit
// entirely on the parent and may not add any collision.
void place_children(SceneLayout& layout, std::size_t top_index, Rng& rng,
                    const ArrangeOptions& options) {
  // Copy what we need: placing children reallocates layout.placed.
  const PlacedObject top = layout.placed[top_index];
  const ObjectSpec* spec = layout.scene.find_object(top.spec);
  if (!spec || spec->children.empty()) return;
  const Room& room = room_for(layout, layout.placed[top_index]);

  for (const ChildSpec& child : spec->children) {
    const Vec3 size = child_size_m(layout.scene, child.name);
    for (int k = 0; k < child.quantity; ++k) {
      const std::string name = unique_instance_name(layout, child.name);
      const double z_base = top.z_base + top.size.y;
      bool fits_height = z_base + size.y <= room.wall_height + kEps;

      std::vector<Candidate> candidates;
      if (fits_height) {
        for (double rel : kYaws) {
          // Child extents measured in the parent's frame.
          const bool swap = std::fabs(std::sin(rel)) > 0.5;
          const double hx = (swap ? size.z : size.x) / 2.0;
          const double hy = (swap ? size.x : size.z) / 2.0;
          const double px = top.size.x / 2.0, py = top.size.z / 2.0;
          if (px < hx - kEps || py < hy - kEps) continue;
          for (double lx : lattice_span(-px + hx, px - hx, options.lattice)) {
            for (double ly : lattice_span(-py + hy, py - hy, options.lattice)) {
              candidates.push_back(
                  {top.position + rotate({lx, ly}, top.yaw), top.yaw + rel});
            }
          }
        }
      }
      rng.shuffle(candidates.begin(), candidates.end());

      bool placed = false;
      for (const Candidate& cand : candidates) {
        PlacedObject p;
        p.name = name;
        p.spec = child.name;
        p.room = top.room;
        p.parent = top.name;
        p.mount = Mount::Floor;
        p.size = size;
        p.position = cand.pos;
        p.z_base = z_base;
        p.yaw = normalize_yaw(cand.yaw);
        const OrientedBox box = p.box();
        double penalty = 0.0;
        for (const PlacedObject& other : layout.placed) {
          if (other.name == top.name) continue;  // sits on the parent's top
          penalty += iou3d(box, other.box());
          if (penalty > 0.0) break;
        }
        if (penalty == 0.0) {
          for (const OrientedBox& slab : wall_slabs(room)) {
            penalty += iou3d(box, slab);
            if (penalty > 0.0) break;
          }
        }
        if (penalty == 0.0) {
          layout.placed.push_back(std::move(p));
          placed = true;
          break;
        }
      }
      if (!placed) {
        layout.removed.push_back({name, child.name, "no_fit"});
      }
    }
  }
}

ReachReport reach_with_nav(const SceneLayout& layout, const NavGrid& nav);

}  // namespace

const PlacedObject* SceneLayout::find(const std::string& name) const {
  for (const PlacedObject& p : placed) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::vector<OrientedBox> wall_slabs(const Room& room) {
  const Rect r = room.rect();
  const double t = kSlabThickness;
  const double hz = room.wall_height / 2.0;
  const double wx = (r.x1 - r.x0) / 2.0 + t;
  const double wy = (r.y1 - r.y0) / 2.0 + t;
  const Vec2 c = r.center();
  return {
      OrientedBox::make({c.x, r.y0 - t / 2.0, hz}, {wx, t / 2.0, hz}, 0.0),
      OrientedBox::make({c.x, r.y1 + t / 2.0, hz}, {wx, t / 2.0, hz}, 0.0),
      OrientedBox::make({r.x0 - t / 2.0, c.y, hz}, {t / 2.0, wy, hz}, 0.0),
      OrientedBox::make({r.x1 + t / 2.0, c.y, hz}, {t / 2.0, wy, hz}, 0.0),
  };
}

double collision_reward(const SceneLayout& layout) {
  double total = 0.0;
  const std::size_t n = layout.placed.size();
  std::vector<OrientedBox> boxes;
  boxes.reserve(n);
  for (const PlacedObject& p : layout.placed) boxes.push_back(p.box());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) total += iou3d(boxes[i], boxes[j]);
    }
    for (const OrientedBox& slab : wall_slabs(room_for(layout, layout.placed[i]))) {
      total += iou3d(boxes[i], slab);
    }
  }
  // +0.0 keeps the collision-free reward at positive zero.
  return -total + 0.0;
}

NavGrid layout_nav(const SceneLayout& layout, const NavOptions& options) {
  std::vector<OrientedBox> boxes;
  boxes.reserve(layout.placed.size());
  for (const PlacedObject& p : layout.placed) boxes.push_back(p.box());
  return rasterize_scene(layout.scene, boxes, options);
}

std::vector<GridIndex> object_footprint_cells(const OccupancyGrid& grid,
                                              const PlacedObject& object) {
  const ConvexPolygon2D fp = footprint(object.box());
  double x0 = fp.vertices[0].x, x1 = x0, y0 = fp.vertices[0].y, y1 = y0;
  for (const Vec2& v : fp.vertices) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y);
    y1 = std::max(y1, v.y);
  }
  std::vector<GridIndex> out;
  const GridIndex lo = grid.cell_at({x0, y0});
  const GridIndex hi = grid.cell_at({x1, y1});
  for (int row = std::max(0, lo.row); row <= std::min(grid.rows() - 1, hi.row);
       ++row) {
    for (int col = std::max(0, lo.col); col <= std::min(grid.cols() - 1, hi.col);
         ++col) {
      if (fp.contains(grid.cell_center({row, col}))) out.push_back({row, col});
    }
  }
  if (out.empty()) {
    const GridIndex center = grid.cell_at(object.position);
    if (grid.in_bounds(center)) out.push_back(center);
  }
  return out;
}

std::vector<GridIndex> approach_cells(const NavGrid& nav,
                                      const PlacedObject& object) {
  const int radius = nav.dilation_radius + 1;
  std::set<GridIndex> cells;
  for (const GridIndex& cell : object_footprint_cells(nav.raw, object)) {
    for (int dr = -radius; dr <= radius; ++dr) {
      for (int dc = -radius; dc <= radius; ++dc) {
        const GridIndex q{cell.row + dr, cell.col + dc};
        if (nav.dilated.free(q)) cells.insert(q);
      }
    }
  }
  return {cells.begin(), cells.end()};
}

namespace {

ReachReport reach_with_nav(const SceneLayout& layout, const NavGrid& nav) {
  ReachReport report;
  report.has_spawn = find_exterior_door_cell(layout.scene, nav, &report.spawn);
  ReachResult reach;
  if (report.has_spawn) reach = reachable_set(nav.dilated, report.spawn);
  for (const PlacedObject& p : layout.placed) {
    if (!p.parent.empty()) continue;  // stacked items ride their carrier
    ++report.considered;
    bool ok = false;
    if (report.has_spawn) {
      for (const GridIndex& cell : approach_cells(nav, p)) {
        if (reach.contains(nav.dilated, cell)) {
          ok = true;
          break;
        }
      }
    }
    if (ok) {
      ++report.reachable_count;
    } else {
      report.unreachable.push_back(p.name);
    }
  }
  return report;
}

}  // namespace

ReachReport reach_diagnostic(const SceneLayout& layout, const NavOptions& nav) {
  return reach_with_nav(layout, layout_nav(layout, nav));
}

int repair_collisions(SceneLayout& layout, const ArrangeOptions& options,
                      Rng& rng) {
  int rounds = 0;
  while (true) {
    // Score every group; zero total means we're done.
    std::vector<std::size_t> tops;
    for (std::size_t i = 0; i < layout.placed.size(); ++i) {
      if (layout.placed[i].parent.empty()) tops.push_back(i);
    }
    double total = 0.0;
    std::size_t worst = layout.placed.size();
    double worst_penalty = 0.0;
    for (std::size_t i : tops) {
      const double p = group_penalty(layout, i);
      total += p;
      if (p > worst_penalty) {
        worst_penalty = p;
        worst = i;
      }
    }
    if (total == 0.0) return rounds;

    const bool out_of_budget = rounds >= options.budget_iters;
    bool moved = false;
    if (!out_of_budget) {
      ++rounds;
      const PlacedObject& offender = layout.placed[worst];
      const Room& room = room_for(layout, offender);
      const auto group = group_indices(layout, worst);
      const RuleSet ruleset = rules_for(layout.rules, offender.spec);
      std::vector<Candidate> candidates;
      if (offender.mount == Mount::Wall) {
        for (const WallCandidate& w :
             wall_candidates(room, offender.size, ruleset, options.lattice,
                             options.wall_mount_base)) {
          candidates.push_back({w.pos, w.yaw});
        }
      } else {
        candidates =
            floor_candidates(layout, room, offender.size, ruleset, options.lattice);
      }
      rng.shuffle(candidates.begin(), candidates.end());
      double best_penalty = worst_penalty;
      const Candidate* best = nullptr;
      for (const Candidate& cand : candidates) {
        const auto boxes = posed_group_boxes(layout, group, cand.pos, cand.yaw);
        const double p = penalty_between(layout, group, boxes);
        if (p < best_penalty) {
          best_penalty = p;
          best = &cand;
          if (p == 0.0) break;
        }
      }
      if (best) {
        move_group(layout, worst, best->pos, best->yaw);
        moved = true;
      }
    }
    if (!moved) {
      // Stuck or over budget: drop the worst offender and its cargo.
      const std::string reason =
          out_of_budget ? "collision_timeout" : "unresolvable_overlap";
      auto group = group_indices(layout, worst);
      std::sort(group.begin(), group.end());
      for (auto it = group.rbegin(); it != group.rend(); ++it) {
        const PlacedObject& p = layout.placed[*it];
        layout.removed.push_back(
            {p.name, p.spec, *it == worst ? reason : "parent_removed"});
        layout.placed.erase(layout.placed.begin() +
                            static_cast<std::ptrdiff_t>(*it));
      }
    }
  }
}

int repair_reachability(SceneLayout& layout, const ArrangeOptions& options,
                        Rng& rng) {
  int moves = 0;
  while (true) {
    const ReachReport report = reach_diagnostic(layout, options.nav);
    if (!report.has_spawn || report.unreachable.empty()) break;
    bool improved = false;
    for (const std::string& name : report.unreachable) {
      std::size_t index = layout.placed.size();
      for (std::size_t i = 0; i < layout.placed.size(); ++i) {
        if (layout.placed[i].name == name) {
          index = i;
          break;
        }
      }
      if (index == layout.placed.size()) continue;
      const PlacedObject original = layout.placed[index];
      const Room& room = room_for(layout, original);
      const auto group = group_indices(layout, index);

      std::vector<Candidate> candidates;
      if (original.mount == Mount::Wall) {
        for (const WallCandidate& w :
             wall_candidates(room, original.size, RuleSet{}, options.lattice,
                             options.wall_mount_base)) {
          candidates.push_back({w.pos, w.yaw});
        }
      } else {
        candidates =
            floor_candidates(layout, room, original.size, RuleSet{}, options.lattice);
      }
      std::erase_if(candidates, [&](const Candidate& c) {
        return (c.pos - original.position).norm() > options.reach_radius + kEps;
      });
      rng.shuffle(candidates.begin(), candidates.end());

      for (const Candidate& cand : candidates) {
        const auto boxes = posed_group_boxes(layout, group, cand.pos, cand.yaw);
        if (penalty_between(layout, group, boxes) != 0.0) continue;
        move_group(layout, index, cand.pos, cand.yaw);
        const ReachReport after = reach_diagnostic(layout, options.nav);
        if (after.reachable_count > report.reachable_count) {
          ++moves;
          improved = true;
          break;
        }
        move_group(layout, index, original.position, original.yaw);
      }
      if (improved) break;  // rescore everything after a successful move
    }
    if (!improved) break;  // nothing left that a small move can fix
  }
  return moves;
}

SceneLayout arrange(const SceneDescription& scene,
                    const std::vector<PlacementRule>& rules,
                    const ArrangeOptions& options) {
  scene.validate();
  SceneLayout layout;
  layout.scene = scene;
  layout.rules = rules;

  // Expand catalog entries into instances, then order them so that rule
  // anchors are placed before the objects referring to them.
  struct Pending {
    const ObjectSpec* spec;
    std::string name;
  };
  std::vector<Pending> queue;
  for (const ObjectSpec& spec : layout.scene.objects) {
    for (int k = 1; k <= spec.quantity; ++k) {
      queue.push_back({&spec,
                       spec.quantity > 1 ? spec.name + " " + std::to_string(k)
                                         : spec.name});
    }
  }
  std::map<std::string, std::vector<std::string>> needs;  // spec -> anchors
  for (const PlacementRule& rule : rules) {
    if (rule.relation == PlacementRule::Relation::AgainstWall) continue;
    if (rule.other.empty() || is_cardinal(rule.other)) continue;
    if (rule.other == "room_center") continue;
    needs[rule.subject].push_back(rule.other);
  }
  std::vector<Pending> ordered;
  std::set<std::string> placed_specs;
  std::vector<bool> taken(queue.size(), false);
  while (ordered.size() < queue.size()) {
    bool progress = false;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      if (taken[i]) continue;
      bool ready = true;
      const auto it = needs.find(queue[i].spec->name);
      if (it != needs.end()) {
        for (const std::string& anchor : it->second) {
          const ObjectSpec* anchor_spec = layout.scene.find_object(anchor);
          if (anchor_spec && !placed_specs.count(anchor)) {
            ready = false;
            break;
          }
        }
      }
      if (!ready) continue;
      taken[i] = true;
      ordered.push_back(queue[i]);
      placed_specs.insert(queue[i].spec->name);
      progress = true;
    }
    if (!progress) {
      // Dependency cycle: fall back to catalog order for the rest.
      for (std::size_t i = 0; i < queue.size(); ++i) {
        if (!taken[i]) {
          taken[i] = true;
          ordered.push_back(queue[i]);
        }
      }
    }
  }

  Rng place_rng(derive_seed(options.seed, 1));
  for (const Pending& pending : ordered) {
    const ObjectSpec& spec = *pending.spec;
    const Room& room = layout.scene.room_of(spec);
    const RuleSet ruleset = rules_for(rules, spec.name);
    const Vec3 size{spec.width_m(), spec.height_m(), spec.depth_m()};

    PlacedObject p;
    p.name = pending.name;
    p.spec = spec.name;
    p.room = room.name;
    p.mount = spec.mount;
    p.size = size;

    if (spec.mount == Mount::Wall) {
      auto candidates = wall_candidates(room, size, ruleset, options.lattice,
                                        options.wall_mount_base);
      place_rng.shuffle(candidates.begin(), candidates.end());
      const WallCandidate* best = nullptr;
      double best_penalty = 0.0;
      for (const WallCandidate& cand : candidates) {
        PlacedObject probe = p;
        probe.position = cand.pos;
        probe.yaw = cand.yaw;
        probe.z_base = cand.z_base;
        const OrientedBox box = probe.box();
        double penalty = 0.0;
        for (const PlacedObject& other : layout.placed) {
          penalty += iou3d(box, other.box());
        }
        for (const OrientedBox& slab : wall_slabs(room)) {
          penalty += iou3d(box, slab);
        }
        if (!best || penalty < best_penalty) {
          best = &cand;
          best_penalty = penalty;
          if (penalty == 0.0) break;
        }
      }
      if (best) {
        p.position = best->pos;
        p.yaw = best->yaw;
        p.z_base = best->z_base;
      } else {
        p.position = room.rect().center();
        p.z_base = std::max(0.0, room.wall_height - size.y);
      }
    } else {
      auto candidates =
          floor_candidates(layout, room, size, ruleset, options.lattice);
      place_rng.shuffle(candidates.begin(), candidates.end());
      const Candidate* best = nullptr;
      double best_penalty = 0.0;
      for (const Candidate& cand : candidates) {
        PlacedObject probe = p;
        probe.position = cand.pos;
        probe.yaw = cand.yaw;
        const OrientedBox box = probe.box();
        double penalty = 0.0;
        for (const PlacedObject& other : layout.placed) {
          penalty += iou3d(box, other.box());
        }
        for (const OrientedBox& slab : wall_slabs(room)) {
          penalty += iou3d(box, slab);
        }
        if (!best || penalty < best_penalty) {
          best = &cand;
          best_penalty = penalty;
          if (penalty == 0.0) break;
        }
      }
      if (best) {
        p.position = best->pos;
        p.yaw = best->yaw;
      } else {
        p.position = room.rect().center();  // oversized; repair will drop it
      }
    }
    p.yaw = normalize_yaw(p.yaw);
    layout.placed.push_back(std::move(p));
  }

  Rng repair_rng(derive_seed(options.seed, 2));
  repair_collisions(layout, options, repair_rng);

  Rng child_rng(derive_seed(options.seed, 3));
  const std::size_t top_count = layout.placed.size();
  for (std::size_t i = 0; i < top_count; ++i) {
    place_children(layout, i, child_rng, options);
  }

  Rng reach_rng(derive_seed(options.seed, 4));
  repair_reachability(layout, options, reach_rng);
  return layout;
}

// ---------------------------------------------------------------------------
// Edits

namespace {

std::set<std::string> reachable_names(const SceneLayout& layout,
                                      const NavOptions& nav) {
  const ReachReport report = reach_diagnostic(layout, nav);
  std::set<std::string> out;
  for (const PlacedObject& p : layout.placed) {
    if (!p.parent.empty()) continue;
    out.insert(p.name);
  }
  for (const std::string& name : report.unreachable) out.erase(name);
  return out;
}

}  // namespace

void apply_edit(SceneLayout& layout, const Json& edit,
                const ArrangeOptions& options) {
  if (!edit.is_object()) {
    throw SceneError(SceneErrorCode::MalformedDocument, "edit must be an object");
  }
  const Json* op_field = find_field(edit, "op");
  if (!op_field || !op_field->is_string()) {
    throw SceneError(SceneErrorCode::MissingField, "edit needs an 'op' string");
  }
  const std::string op = op_field->get<std::string>();
  const SceneLayout snapshot = layout;

  const auto reject = [&](const std::string& why) -> void {
    layout = snapshot;
    throw EditRejected(why);
  };

  if (op == "insert") {
    const Json* name_field = find_field(edit, "name");
    const Json* entry = find_field(edit, "object");
    if (!name_field || !name_field->is_string() || !entry) {
      throw SceneError(SceneErrorCode::MissingField,
                       "insert needs 'name' and an 'object' entry");
    }
    const std::string name = name_field->get<std::string>();
    if (layout.scene.find_object(name)) {
      reject("catalog already has an object named '" + name + "'");
    }
    ObjectSpec spec = object_spec_from_json(name, *entry);
    if (spec.room.empty()) {
      if (const Json* room = find_field(edit, "room")) {
        if (room->is_string()) spec.room = room->get<std::string>();
      }
    }
    layout.scene.objects.push_back(spec);
    try {
      layout.scene.validate();
    } catch (const SceneError& e) {
      reject(std::string("inserted object is invalid: ") + e.what());
    }
    const std::set<std::string> before = reachable_names(snapshot, options.nav);

    Rng rng(derive_seed(options.seed, 0xED17 + layout.placed.size()));
    const ObjectSpec& stored = layout.scene.objects.back();
    const Room& room = layout.scene.room_of(stored);
    const RuleSet ruleset = rules_for(layout.rules, stored.name);
    const Vec3 size{stored.width_m(), stored.height_m(), stored.depth_m()};
    std::vector<std::string> fresh;
    for (int k = 1; k <= stored.quantity; ++k) {
      PlacedObject p;
      p.name = stored.quantity > 1 ? stored.name + " " + std::to_string(k)
                                   : stored.name;
      p.spec = stored.name;
      p.room = room.name;
      p.mount = stored.mount;
      p.size = size;
      // A candidate is usable only when it overlaps nothing AND leaves
      // every previously reachable object (plus the new one) reachable,
      // so blocking spots are skipped instead of failing the whole edit.
      const auto collision_free = [&](const PlacedObject& trial) {
        const OrientedBox box = trial.box();
        double penalty = 0.0;
        for (const PlacedObject& other : layout.placed) {
          penalty += iou3d(box, other.box());
        }
        for (const OrientedBox& slab : wall_slabs(room)) {
          penalty += iou3d(box, slab);
        }
        return penalty == 0.0;
      };
      const auto reach_preserved = [&](const PlacedObject& trial) {
        layout.placed.push_back(trial);
        const std::set<std::string> now = reachable_names(layout, options.nav);
        layout.placed.pop_back();
        if (!now.count(trial.name)) return false;
        for (const std::string& other : before) {
          if (!now.count(other)) return false;
        }
        for (const std::string& other : fresh) {
          if (!now.count(other)) return false;
        }
        return true;
      };
      bool placed = false;
      if (stored.mount == Mount::Wall) {
        auto candidates = wall_candidates(room, size, ruleset, options.lattice,
                                          options.wall_mount_base);
        rng.shuffle(candidates.begin(), candidates.end());
        for (const WallCandidate& cand : candidates) {
          p.position = cand.pos;
          p.yaw = cand.yaw;
          p.z_base = cand.z_base;
          if (collision_free(p) && reach_preserved(p)) {
            placed = true;
            break;
          }
        }
      } else {
        auto candidates =
            floor_candidates(layout, room, size, ruleset, options.lattice);
        rng.shuffle(candidates.begin(), candidates.end());
        for (const Candidate& cand : candidates) {
          p.position = cand.pos;
          p.yaw = cand.yaw;
          if (collision_free(p) && reach_preserved(p)) {
            placed = true;
            break;
          }
        }
      }
      if (!placed) {
        reject("no collision-free reachable spot for '" + p.name + "'");
      }
      layout.placed.push_back(p);
      fresh.push_back(p.name);
      place_children(layout, layout.placed.size() - 1, rng, options);
      // Children that could not fit are a hard failure for an edit.
      for (const RemovedObject& r : layout.removed) {
        if (r.reason == "no_fit") {
          bool was_there = false;
          for (const RemovedObject& old : snapshot.removed) {
            if (old.name == r.name) was_there = true;
          }
          if (!was_there) reject("no room on top of '" + p.name + "' for cargo");
        }
      }
    }

    const std::set<std::string> after = reachable_names(layout, options.nav);
    for (const std::string& name_before : before) {
      if (!after.count(name_before)) {
        reject("insert would block the path to '" + name_before + "'");
      }
    }
    for (const std::string& name_new : fresh) {
      if (!after.count(name_new)) {
        reject("inserted object '" + name_new + "' would be unreachable");
      }
    }
    return;
  }

  if (op == "delete") {
    const Json* name_field = find_field(edit, "name");
    if (!name_field || !name_field->is_string()) {
      throw SceneError(SceneErrorCode::MissingField, "delete needs a 'name'");
    }
    const std::string name = name_field->get<std::string>();
    if (!layout.find(name)) {
      reject("no placed object named '" + name + "'");
    }
    std::erase_if(layout.placed, [&](const PlacedObject& p) {
      return p.name == name || p.parent == name;
    });
    return;
  }

  if (op == "reposition") {
    const Json* name_field = find_field(edit, "name");
    const Json* pos_field = find_field(edit, "position");
    if (!name_field || !name_field->is_string() || !pos_field ||
        !pos_field->is_array() || pos_field->size() < 2) {
      throw SceneError(SceneErrorCode::MissingField,
                       "reposition needs 'name' and 'position' [x, y]");
    }
    const std::string name = name_field->get<std::string>();
    std::size_t index = layout.placed.size();
    for (std::size_t i = 0; i < layout.placed.size(); ++i) {
      if (layout.placed[i].name == name) index = i;
    }
    if (index == layout.placed.size()) {
      reject("no placed object named '" + name + "'");
    }
    const Vec2 pos{(*pos_field)[0].get<double>(), (*pos_field)[1].get<double>()};
    double yaw = layout.placed[index].yaw;
    if (const Json* yaw_field = find_field(edit, "yaw")) {
      if (yaw_field->is_number()) yaw = yaw_field->get<double>();
    }
    const std::set<std::string> before = reachable_names(snapshot, options.nav);
    if (!layout.placed[index].parent.empty()) {
      // A stacked item may slide around, but only on its carrier.
      const PlacedObject* parent = layout.find(layout.placed[index].parent);
      if (!parent) reject("carrier of '" + name + "' is missing");
      PlacedObject probe = layout.placed[index];
      probe.position = pos;
      probe.yaw = normalize_yaw(yaw);
      const ConvexPolygon2D pf = footprint(parent->box());
      for (const Vec2& corner : footprint(probe.box()).vertices) {
        if (!pf.contains(corner)) {
          reject("'" + name + "' would hang off its carrier");
        }
      }
      layout.placed[index] = probe;
    } else {
      move_group(layout, index, pos, yaw);
    }
    if (collision_reward(layout) != 0.0) {
      reject("new pose for '" + name + "' collides");
    }
    const std::set<std::string> after = reachable_names(layout, options.nav);
    for (const std::string& was : before) {
      if (!after.count(was)) {
        reject("moving '" + name + "' would block the path to '" + was + "'");
      }
    }
    return;
  }

  throw SceneError(SceneErrorCode::BadValue, "unknown edit op '" + op + "'");
}

// ---------------------------------------------------------------------------
// Serialization

std::vector<PlacementRule> rules_from_json(const Json& j) {
  if (j.is_null()) return {};
  if (!j.is_array()) {
    throw SceneError(SceneErrorCode::BadValue, "'rules' must be an array");
  }
  std::vector<PlacementRule> out;
  for (const Json& entry : j) {
    if (!entry.is_object()) {
      throw SceneError(SceneErrorCode::BadValue, "rule must be an object");
    }
    PlacementRule rule;
    const Json* subject = find_field(entry, "subject");
    const Json* relation = find_field(entry, "relation");
    if (!subject || !subject->is_string() || !relation || !relation->is_string()) {
      throw SceneError(SceneErrorCode::MissingField,
                       "rule needs 'subject' and 'relation'");
    }
    rule.subject = subject->get<std::string>();
    const std::string rel = relation->get<std::string>();
    if (rel == "against_wall") {
      rule.relation = PlacementRule::Relation::AgainstWall;
    } else if (rel == "beside") {
      rule.relation = PlacementRule::Relation::Beside;
    } else if (rel == "facing") {
      rule.relation = PlacementRule::Relation::Facing;
    } else {
      throw SceneError(SceneErrorCode::BadValue, "unknown relation '" + rel + "'");
    }
    if (const Json* other = find_field(entry, "other")) {
      if (other->is_string()) rule.other = other->get<std::string>();
    }
    if (const Json* direction = find_field(entry, "direction")) {
      if (direction->is_string()) rule.direction = direction->get<std::string>();
    }
    out.push_back(std::move(rule));
  }
  return out;
}

Json rules_to_json(const std::vector<PlacementRule>& rules) {
  Json out = Json::array();
  for (const PlacementRule& rule : rules) {
    Json j;
    j["subject"] = rule.subject;
    switch (rule.relation) {
      case PlacementRule::Relation::AgainstWall: j["relation"] = "against_wall"; break;
      case PlacementRule::Relation::Beside: j["relation"] = "beside"; break;
      case PlacementRule::Relation::Facing: j["relation"] = "facing"; break;
    }
    if (!rule.other.empty()) j["other"] = rule.other;
    if (!rule.direction.empty()) j["direction"] = rule.direction;
    out.push_back(std::move(j));
  }
  return out;
}

Json layout_to_json(const SceneLayout& layout) {
  Json j;
  j["scene"] = scene_to_json(layout.scene);
  j["rules"] = rules_to_json(layout.rules);
  Json placed = Json::array();
  for (const PlacedObject& p : layout.placed) {
    Json e;
    e["name"] = p.name;
    e["spec"] = p.spec;
    e["room"] = p.room;
    if (!p.parent.empty()) e["parent"] = p.parent;
    e["mount"] = to_string(p.mount);
    e["size"] = {p.size.x, p.size.y, p.size.z};
    e["position"] = {p.position.x, p.position.y};
    e["z_base"] = p.z_base;
    e["yaw"] = p.yaw;
    placed.push_back(std::move(e));
  }
  j["placed"] = std::move(placed);
  Json removed = Json::array();
  for (const RemovedObject& r : layout.removed) {
    Json e;
    e["name"] = r.name;
    e["spec"] = r.spec;
    e["reason"] = r.reason;
    removed.push_back(std::move(e));
  }
  j["removed"] = std::move(removed);

  const ReachReport reach = reach_diagnostic(layout, NavOptions{});
  Json rewards;
  rewards["collision"] = collision_reward(layout);
  rewards["placed"] = reach.considered;
  rewards["reachable"] = reach.reachable_count;
  rewards["unreachable"] = reach.unreachable;
  j["rewards"] = std::move(rewards);
  return j;
}

SceneLayout layout_from_json(const Json& j) {
  if (!j.is_object()) {
    throw SceneError(SceneErrorCode::MalformedDocument,
                     "layout must be a JSON object");
  }
  SceneLayout layout;
  const Json* scene = find_field(j, "scene");
  if (!scene) {
    throw SceneError(SceneErrorCode::MissingField, "layout needs a 'scene'");
  }
  layout.scene = scene_from_json(*scene);
  if (const Json* rules = find_field(j, "rules")) {
    layout.rules = rules_from_json(*rules);
  }
  const Json* placed = find_field(j, "placed");
  if (!placed || !placed->is_array()) {
    throw SceneError(SceneErrorCode::MissingField, "layout needs 'placed'");
  }
  for (const Json& e : *placed) {
    PlacedObject p;
    const Json* name = find_field(e, "name");
    const Json* spec = find_field(e, "spec");
    const Json* room = find_field(e, "room");
    const Json* size = find_field(e, "size");
    const Json* pos = find_field(e, "position");
    if (!name || !spec || !room || !size || !pos || !size->is_array() ||
        size->size() != 3 || !pos->is_array() || pos->size() != 2) {
      throw SceneError(SceneErrorCode::MissingField,
                       "placed entry needs name/spec/room/size/position");
    }
    p.name = name->get<std::string>();
    p.spec = spec->get<std::string>();
    p.room = room->get<std::string>();
    if (const Json* parent = find_field(e, "parent")) {
      if (parent->is_string()) p.parent = parent->get<std::string>();
    }
    if (const Json* mount = find_field(e, "mount")) {
      if (mount->is_string()) p.mount = mount_from_string(mount->get<std::string>());
    }
    p.size = {(*size)[0].get<double>(), (*size)[1].get<double>(),
              (*size)[2].get<double>()};
    p.position = {(*pos)[0].get<double>(), (*pos)[1].get<double>()};
    if (const Json* z = find_field(e, "z_base")) {
      if (z->is_number()) p.z_base = z->get<double>();
    }
    if (const Json* yaw = find_field(e, "yaw")) {
      if (yaw->is_number()) p.yaw = yaw->get<double>();
    }
    layout.placed.push_back(std::move(p));
  }
  if (const Json* removed = find_field(j, "removed")) {
    if (removed->is_array()) {
      for (const Json& e : *removed) {
        RemovedObject r;
        if (const Json* name = find_field(e, "name")) {
          if (name->is_string()) r.name = name->get<std::string>();
        }
        if (const Json* spec = find_field(e, "spec")) {
          if (spec->is_string()) r.spec = spec->get<std::string>();
        }
        if (const Json* reason = find_field(e, "reason")) {
          if (reason->is_string()) r.reason = reason->get<std::string>();
        }
        layout.removed.push_back(std::move(r));
      }
    }
  }
  return layout;
}

}  // namespace roomforge
