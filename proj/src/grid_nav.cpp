#include "roomforge/grid_nav.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace roomforge {

namespace {

constexpr double kSnap = 1e-9;  // absorbs rounding when snapping to cells

// Neighbor order is fixed for determinism: orthogonal first, then
// diagonal, each block scanning (row, col) ascending.
struct Move {
  int dr, dc;
  bool diagonal;
};
constexpr Move kMoves[8] = {
    {-1, 0, false}, {0, -1, false}, {0, 1, false}, {1, 0, false},
    {-1, -1, true}, {-1, 1, true},  {1, -1, true}, {1, 1, true},
};

int floor_index(double value, double origin, double cell) {
  return static_cast<int>(std::floor((value - origin) / cell + kSnap));
}

bool step_allowed(const OccupancyGrid& grid, GridIndex from, const Move& move) {
  const GridIndex to{from.row + move.dr, from.col + move.dc};
  if (!grid.free(to)) return false;
  if (move.diagonal) {
    // Both flanking orthogonal cells must be open to squeeze past a corner.
    if (!grid.free({from.row + move.dr, from.col})) return false;
    if (!grid.free({from.row, from.col + move.dc})) return false;
  }
  return true;
}

}  // namespace

OccupancyGrid::OccupancyGrid(int rows, int cols, double cell_size, Vec2 origin,
                             bool free)
    : rows_(rows),
      cols_(cols),
      cell_size_(cell_size),
      origin_(origin),
      cells_(static_cast<std::size_t>(rows) * cols, free ? 1 : 0) {}

GridIndex OccupancyGrid::cell_at(Vec2 p) const {
  return {floor_index(p.y, origin_.y, cell_size_),
          floor_index(p.x, origin_.x, cell_size_)};
}

int OccupancyGrid::count_free() const {
  int n = 0;
  for (std::uint8_t c : cells_) n += c;
  return n;
}

OccupancyGrid dilate(const OccupancyGrid& grid, int radius) {
  if (radius <= 0) return grid;
  // Chebyshev dilation is separable: stretch obstructions along rows, then
  // along columns.
  OccupancyGrid pass = grid;
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      if (grid.free({r, c})) continue;
      const int lo = std::max(0, c - radius);
      const int hi = std::min(grid.cols() - 1, c + radius);
      for (int k = lo; k <= hi; ++k) pass.set_free({r, k}, false);
    }
  }
  OccupancyGrid out = pass;
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      if (pass.free({r, c})) continue;
      const int lo = std::max(0, r - radius);
      const int hi = std::min(grid.rows() - 1, r + radius);
      for (int k = lo; k <= hi; ++k) out.set_free({k, c}, false);
    }
  }
  return out;
}

NavGrid rasterize_scene(const SceneDescription& scene,
                        const std::vector<OrientedBox>& boxes,
                        const NavOptions& options) {
  if (scene.rooms.empty()) {
    throw SceneError(SceneErrorCode::EmptyScene, "cannot rasterize an empty scene");
  }
  const double h = options.cell_size;
  Rect bounds = scene.rooms.front().rect();
  for (const Room& room : scene.rooms) {
    const Rect r = room.rect();
    bounds.x0 = std::min(bounds.x0, r.x0);
    bounds.y0 = std::min(bounds.y0, r.y0);
    bounds.x1 = std::max(bounds.x1, r.x1);
    bounds.y1 = std::max(bounds.y1, r.y1);
  }
  const Vec2 origin{bounds.x0, bounds.y0};
  const int cols = std::max(1, static_cast<int>(std::ceil((bounds.x1 - bounds.x0) / h - kSnap)));
  const int rows = std::max(1, static_cast<int>(std::ceil((bounds.y1 - bounds.y0) / h - kSnap)));

  NavGrid nav;
  nav.options = options;
  nav.raw = OccupancyGrid(rows, cols, h, origin, false);

  // Room interiors are walkable.
  for (const Room& room : scene.rooms) {
    const Rect r = room.rect();
    for (int row = 0; row < rows; ++row) {
      for (int col = 0; col < cols; ++col) {
        if (r.contains(nav.raw.cell_center({row, col}))) {
          nav.raw.set_free({row, col}, true);
        }
      }
    }
  }

  // Walls: the line of cells containing each room edge, minus door spans.
  const auto spans = door_spans(scene);
  auto carve_wall = [&](const WallSegment& wall) {
    if (wall.vertical) {
      const int col = std::clamp(floor_index(wall.coord, origin.x, h), 0, cols - 1);
      const int r0 = std::clamp(floor_index(wall.lo, origin.y, h), 0, rows - 1);
      const int r1 = std::clamp(
          static_cast<int>(std::ceil((wall.hi - origin.y) / h - kSnap)) - 1, 0,
          rows - 1);
      for (int row = r0; row <= r1; ++row) {
        const double y = nav.raw.cell_center({row, col}).y;
        bool open = false;
        for (const DoorSpan& door : spans) {
          if (door.span.vertical && std::fabs(door.span.coord - wall.coord) < kSnap &&
              y > door.span.lo && y < door.span.hi) {
            open = true;
            break;
          }
        }
        if (!open) nav.raw.set_free({row, col}, false);
      }
    } else {
      const int row = std::clamp(floor_index(wall.coord, origin.y, h), 0, rows - 1);
      const int c0 = std::clamp(floor_index(wall.lo, origin.x, h), 0, cols - 1);
      const int c1 = std::clamp(
          static_cast<int>(std::ceil((wall.hi - origin.x) / h - kSnap)) - 1, 0,
          cols - 1);
      for (int col = c0; col <= c1; ++col) {
        const double x = nav.raw.cell_center({row, col}).x;
        bool open = false;
        for (const DoorSpan& door : spans) {
          if (!door.span.vertical && std::fabs(door.span.coord - wall.coord) < kSnap &&
              x > door.span.lo && x < door.span.hi) {
            open = true;
            break;
          }
        }
        if (!open) nav.raw.set_free({row, col}, false);
      }
    }
  };
  for (const Room& room : scene.rooms) {
    for (WallDirection dir : {WallDirection::South, WallDirection::East,
                              WallDirection::North, WallDirection::West}) {
      carve_wall(room_wall(room, dir));
    }
  }

  // Object footprints. Anything mounted high enough to walk under is skipped.
  for (const OrientedBox& box : boxes) {
    if (box.z_min() >= options.walk_under_height) continue;
    const ConvexPolygon2D fp = footprint(box);
    double x0 = fp.vertices[0].x, x1 = x0, y0 = fp.vertices[0].y, y1 = y0;
    for (const Vec2& v : fp.vertices) {
      x0 = std::min(x0, v.x);
      x1 = std::max(x1, v.x);
      y0 = std::min(y0, v.y);
      y1 = std::max(y1, v.y);
    }
    const int c0 = std::max(0, floor_index(x0, origin.x, h));
    const int c1 = std::min(cols - 1, floor_index(x1, origin.x, h));
    const int r0 = std::max(0, floor_index(y0, origin.y, h));
    const int r1 = std::min(rows - 1, floor_index(y1, origin.y, h));
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        if (fp.contains(nav.raw.cell_center({row, col}))) {
          nav.raw.set_free({row, col}, false);
        }
      }
    }
  }

  nav.dilation_radius =
      static_cast<int>(std::ceil(options.agent_half_width / h - kSnap));
  nav.dilated = dilate(nav.raw, nav.dilation_radius);
  return nav;
}

PathResult astar(const OccupancyGrid& grid, GridIndex start, GridIndex goal) {
  PathResult result;
  if (!grid.free(start) || !grid.free(goal)) return result;

  const int cols = grid.cols();
  const auto index_of = [cols](GridIndex i) {
    return static_cast<std::size_t>(i.row) * cols + i.col;
  };
  const std::size_t n = static_cast<std::size_t>(grid.rows()) * cols;
  std::vector<StepCount> g(n);
  std::vector<std::uint8_t> has_g(n, 0), closed(n, 0);
  std::vector<GridIndex> parent(n, GridIndex{-1, -1});

  const auto octile = [&](GridIndex i) {
    const int dx = std::abs(i.col - goal.col);
    const int dy = std::abs(i.row - goal.row);
    const int diag = std::min(dx, dy);
    return (std::max(dx, dy) - diag) + diag * std::sqrt(2.0);
  };

  struct Entry {
    double f;
    GridIndex cell;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      return cell > o.cell;  // equal scores pop lowest (row, col)
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;

  g[index_of(start)] = {0, 0};
  has_g[index_of(start)] = 1;
  open.push({octile(start), start});

  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    const std::size_t ti = index_of(top.cell);
    if (closed[ti]) continue;
    closed[ti] = 1;
    if (top.cell == goal) break;
    for (const Move& move : kMoves) {
      if (!step_allowed(grid, top.cell, move)) continue;
      const GridIndex next{top.cell.row + move.dr, top.cell.col + move.dc};
      const std::size_t ni = index_of(next);
      if (closed[ni]) continue;
      StepCount cand = g[ti];
      (move.diagonal ? cand.diag : cand.ortho) += 1;
      if (has_g[ni] && g[ni].cost() <= cand.cost()) continue;
      g[ni] = cand;
      has_g[ni] = 1;
      parent[ni] = top.cell;
      open.push({cand.cost() + octile(next), next});
    }
  }

  const std::size_t gi = index_of(goal);
  if (!closed[gi]) return result;
  result.found = true;
  result.steps = g[gi];
  result.cost = result.steps.cost();
  for (GridIndex at = goal; at != GridIndex{-1, -1}; at = parent[index_of(at)]) {
    result.cells.push_back(at);
    if (at == start) break;
  }
  std::reverse(result.cells.begin(), result.cells.end());
  return result;
}

bool ReachResult::contains(const OccupancyGrid& grid, GridIndex i) const {
  if (!grid.in_bounds(i)) return false;
  return mask[static_cast<std::size_t>(i.row) * grid.cols() + i.col] != 0;
}

ReachResult reachable_set(const OccupancyGrid& grid, GridIndex start) {
  ReachResult result;
  result.mask.assign(static_cast<std::size_t>(grid.rows()) * grid.cols(), 0);
  if (!grid.free(start)) return result;
  const int cols = grid.cols();
  std::queue<GridIndex> frontier;
  frontier.push(start);
  result.mask[static_cast<std::size_t>(start.row) * cols + start.col] = 1;
  result.count = 1;
  while (!frontier.empty()) {
    const GridIndex cur = frontier.front();
    frontier.pop();
    for (const Move& move : kMoves) {
      if (!step_allowed(grid, cur, move)) continue;
      const GridIndex next{cur.row + move.dr, cur.col + move.dc};
      std::uint8_t& seen =
          result.mask[static_cast<std::size_t>(next.row) * cols + next.col];
      if (seen) continue;
      seen = 1;
      ++result.count;
      frontier.push(next);
    }
  }
  return result;
}

std::string to_pgm(const OccupancyGrid& grid) {
  std::string out = "P5\n" + std::to_string(grid.cols()) + " " +
                    std::to_string(grid.rows()) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(grid.rows()) * grid.cols());
  for (int row = grid.rows() - 1; row >= 0; --row) {
    for (int col = 0; col < grid.cols(); ++col) {
      out.push_back(grid.free({row, col}) ? '\xff' : '\x00');
    }
  }
  return out;
}

bool find_exterior_door_cell(const SceneDescription& scene, const NavGrid& nav,
                             GridIndex* out) {
  for (const DoorSpan& door : door_spans(scene)) {
    const bool a_ext = door.room_a == "exterior";
    const bool b_ext = door.room_b == "exterior";
    if (!a_ext && !b_ext) continue;
    const Room* room = scene.find_room(a_ext ? door.room_b : door.room_a);
    if (!room) continue;
    const Vec2 room_center = room->rect().center();
    // Step inward from the door midpoint, past the dilated wall band.
    const double depth = (nav.dilation_radius + 1.5) * nav.raw.cell_size();
    Vec2 probe;
    if (door.span.vertical) {
      const double side = room_center.x > door.span.coord ? 1.0 : -1.0;
      probe = {door.span.coord + side * depth, 0.5 * (door.span.lo + door.span.hi)};
    } else {
      const double side = room_center.y > door.span.coord ? 1.0 : -1.0;
      probe = {0.5 * (door.span.lo + door.span.hi), door.span.coord + side * depth};
    }
    const GridIndex want = nav.dilated.cell_at(probe);
    // Expanding ring search for the nearest free cell to the probe point.
    const int max_ring = std::max(nav.dilated.rows(), nav.dilated.cols());
    for (int ring = 0; ring <= max_ring; ++ring) {
      bool best_set = false;
      GridIndex best{};
      double best_d2 = std::numeric_limits<double>::infinity();
      for (int dr = -ring; dr <= ring; ++dr) {
        for (int dc = -ring; dc <= ring; ++dc) {
          if (std::max(std::abs(dr), std::abs(dc)) != ring) continue;
          const GridIndex cand{want.row + dr, want.col + dc};
          if (!nav.dilated.free(cand)) continue;
          const Vec2 c = nav.dilated.cell_center(cand);
          const Vec2 d = c - probe;
          const double d2 = d.dot(d);
          if (d2 < best_d2 - kSnap ||
              (std::fabs(d2 - best_d2) <= kSnap &&
               (!best_set || cand < best))) {
            best = cand;
            best_d2 = d2;
            best_set = true;
          }
        }
      }
      if (best_set) {
        *out = best;
        return true;
      }
    }
  }
  return false;
}

}  // namespace roomforge
