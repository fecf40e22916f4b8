#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "doctest.h"
#include "roomforge/grid_nav.hpp"
#include "roomforge/rng.hpp"
#include "roomforge/scene.hpp"

using namespace roomforge;

namespace {

SceneDescription two_room_scene() {
  SceneDescription scene;
  scene.rooms = {
      make_room("left", "oak", "white", {{0, 0}, {5, 0}, {5, 4}, {0, 4}}),
      make_room("right", "tile", "gray", {{5, 0}, {9, 0}, {9, 4}, {5, 4}})};
  scene.connections = {
      parse_connection_line("left | right | doorway | single | pine door"),
      parse_connection_line("exterior | left | doorway | double | front door")};
  return scene;
}

// Uniform-cost search oracle: identical movement rules, no heuristic.
// Written independently of astar so cost agreement actually checks something.
PathResult dijkstra_oracle(const OccupancyGrid& grid, GridIndex start,
                           GridIndex goal) {
  PathResult result;
  if (!grid.free(start) || !grid.free(goal)) return result;
  const int cols = grid.cols();
  const auto index_of = [cols](GridIndex i) {
    return static_cast<std::size_t>(i.row) * cols + i.col;
  };
  const std::size_t n = static_cast<std::size_t>(grid.rows()) * cols;
  std::vector<StepCount> dist(n);
  std::vector<std::uint8_t> has_dist(n, 0), done(n, 0);

  struct Entry {
    double d;
    GridIndex cell;
    bool operator>(const Entry& o) const {
      if (d != o.d) return d > o.d;
      return cell > o.cell;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  dist[index_of(start)] = {0, 0};
  has_dist[index_of(start)] = 1;
  open.push({0.0, start});
  const int moves[8][2] = {{-1, 0}, {0, -1}, {0, 1},  {1, 0},
                           {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    const std::size_t ti = index_of(top.cell);
    if (done[ti]) continue;
    done[ti] = 1;
    for (const auto& m : moves) {
      const GridIndex next{top.cell.row + m[0], top.cell.col + m[1]};
      if (!grid.free(next)) continue;
      const bool diagonal = m[0] != 0 && m[1] != 0;
      if (diagonal && (!grid.free({top.cell.row + m[0], top.cell.col}) ||
                       !grid.free({top.cell.row, top.cell.col + m[1]}))) {
        continue;
      }
      StepCount cand = dist[ti];
      (diagonal ? cand.diag : cand.ortho) += 1;
      const std::size_t ni = index_of(next);
      if (has_dist[ni] && dist[ni].cost() <= cand.cost()) continue;
      dist[ni] = cand;
      has_dist[ni] = 1;
      open.push({cand.cost(), next});
    }
  }
  const std::size_t gi = index_of(goal);
  if (!done[gi]) return result;
  result.found = true;
  result.steps = dist[gi];
  result.cost = result.steps.cost();
  return result;
}

void check_path_valid(const OccupancyGrid& grid, const PathResult& res,
                      GridIndex start, GridIndex goal) {
  REQUIRE(!res.cells.empty());
  CHECK(res.cells.front() == start);
  CHECK(res.cells.back() == goal);
  StepCount recount;
  for (std::size_t i = 0; i < res.cells.size(); ++i) {
    CHECK(grid.free(res.cells[i]));
    if (i == 0) continue;
    const int dr = res.cells[i].row - res.cells[i - 1].row;
    const int dc = res.cells[i].col - res.cells[i - 1].col;
    CHECK(std::max(std::abs(dr), std::abs(dc)) == 1);
    if (dr != 0 && dc != 0) {
      recount.diag += 1;
      CHECK(grid.free({res.cells[i - 1].row + dr, res.cells[i - 1].col}));
      CHECK(grid.free({res.cells[i - 1].row, res.cells[i - 1].col + dc}));
    } else {
      recount.ortho += 1;
    }
  }
  CHECK(recount == res.steps);
}

OccupancyGrid random_grid(std::uint64_t seed, int rows, int cols,
                          double obstacle_density) {
  OccupancyGrid grid(rows, cols, 0.1, {0, 0}, true);
  Rng rng(seed);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (rng.uniform() < obstacle_density) grid.set_free({r, c}, false);
    }
  }
  return grid;
}

}  // namespace

TEST_SUITE("grid_nav") {

TEST_CASE("rasterization frees interiors and obstructs walls and outside") {
  SceneDescription scene = two_room_scene();
  // L-shape: add a third room on top of the left one so part of the grid
  // bounding box lies outside every room.
  scene.rooms.push_back(
      make_room("top", "oak", "white", {{0, 4}, {5, 4}, {5, 8}, {0, 8}}));
  const NavGrid nav = rasterize_scene(scene, {});
  CHECK(nav.raw.cols() == 90);
  CHECK(nav.raw.rows() == 80);
  CHECK(nav.dilation_radius == 2);

  // Interior points are free, wall lines and out-of-room space are not.
  CHECK(nav.raw.free(nav.raw.cell_at({2.5, 2.0})));
  CHECK(nav.raw.free(nav.raw.cell_at({7.0, 2.0})));
  CHECK_FALSE(nav.raw.free(nav.raw.cell_at({7.0, 6.0})));   // outside the L
  CHECK_FALSE(nav.raw.free(nav.raw.cell_at({8.5, 7.5})));   // outside the L
  CHECK_FALSE(nav.raw.free(nav.raw.cell_at({5.05, 3.5})));  // interior wall
  CHECK_FALSE(nav.raw.free(nav.raw.cell_at({0.05, 2.0})));  // west wall line

  // The single door between the rooms spans (1.5, 2.5) on the x = 5 wall.
  CHECK(nav.raw.free(nav.raw.cell_at({5.05, 2.0})));
  CHECK(nav.raw.free(nav.raw.cell_at({5.05, 1.56})));
  CHECK(nav.raw.free(nav.raw.cell_at({5.05, 2.44})));
  CHECK_FALSE(nav.raw.free(nav.raw.cell_at({5.05, 1.44})));
  CHECK_FALSE(nav.raw.free(nav.raw.cell_at({5.05, 2.56})));
}

TEST_CASE("agent fits wherever the dilated grid says free") {
  SceneDescription scene = two_room_scene();
  std::vector<OrientedBox> boxes = {
      OrientedBox::make({2.0, 2.0, 0.45}, {0.6, 0.4, 0.45}, 0.6),
      OrientedBox::make({7.0, 1.0, 0.35}, {0.45, 0.3, 0.35}, 0.0)};
  const NavGrid nav = rasterize_scene(scene, boxes);
  const double h = nav.raw.cell_size();
  const double half = nav.options.agent_half_width;

  int checked = 0;
  for (int row = 0; row < nav.dilated.rows(); ++row) {
    for (int col = 0; col < nav.dilated.cols(); ++col) {
      if (!nav.dilated.free({row, col})) continue;
      const Vec2 c = nav.dilated.cell_center({row, col});
      const Rect agent{c.x - half, c.y - half, c.x + half, c.y + half};
      // Any raw cell whose square interior meets the agent square must be
      // free; that is exactly what the dilation is supposed to guarantee.
      for (int dr = -3; dr <= 3; ++dr) {
        for (int dc = -3; dc <= 3; ++dc) {
          const GridIndex other{row + dr, col + dc};
          if (!nav.raw.in_bounds(other)) continue;
          const Rect cell{nav.raw.origin().x + other.col * h,
                          nav.raw.origin().y + other.row * h,
                          nav.raw.origin().x + (other.col + 1) * h,
                          nav.raw.origin().y + (other.row + 1) * h};
          if (rects_interiors_intersect(agent, cell)) {
            CHECK(nav.raw.free(other));
          }
        }
      }
      ++checked;
    }
  }
  CHECK(checked > 500);

  // Wall items above head height do not block the floor.
  std::vector<OrientedBox> high = {
      OrientedBox::make({2.0, 2.0, 2.2}, {0.6, 0.4, 0.3}, 0.0)};
  const NavGrid nav_high = rasterize_scene(scene, high);
  CHECK(nav_high.raw.free(nav_high.raw.cell_at({2.0, 2.0})));
  std::vector<OrientedBox> low = {
      OrientedBox::make({2.0, 2.0, 1.0}, {0.6, 0.4, 0.3}, 0.0)};
  const NavGrid nav_low = rasterize_scene(scene, low);
  CHECK_FALSE(nav_low.raw.free(nav_low.raw.cell_at({2.0, 2.0})));
}

TEST_CASE("astar walks straight lines at exact octile cost") {
  OccupancyGrid grid(20, 20, 0.1, {0, 0}, true);
  const PathResult ortho = astar(grid, {0, 0}, {0, 10});
  CHECK(ortho.found);
  CHECK(ortho.cost == 10.0);
  CHECK(ortho.steps == StepCount{10, 0});

  const PathResult diag = astar(grid, {0, 0}, {10, 10});
  CHECK(diag.found);
  CHECK(diag.cost == 10.0 * std::sqrt(2.0));

  const PathResult mixed = astar(grid, {0, 0}, {3, 10});
  CHECK(mixed.found);
  CHECK(mixed.steps == StepCount{7, 3});
  CHECK(mixed.cost == 7.0 + 3.0 * std::sqrt(2.0));
}

TEST_CASE("astar never cuts corners") {
  OccupancyGrid grid(2, 2, 0.1, {0, 0}, true);
  grid.set_free({0, 0}, false);
  grid.set_free({1, 1}, false);
  const PathResult res = astar(grid, {0, 1}, {1, 0});
  CHECK_FALSE(res.found);
}

TEST_CASE("astar equals uniform-cost search on random grids, bit for bit") {
  int found_count = 0;
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    const OccupancyGrid grid = random_grid(derive_seed(505, trial), 30, 30, 0.35);
    Rng pick(derive_seed(606, trial));
    GridIndex start{int(pick.uniform_int(0, 29)), int(pick.uniform_int(0, 29))};
    GridIndex goal{int(pick.uniform_int(0, 29)), int(pick.uniform_int(0, 29))};
    if (!grid.free(start) || !grid.free(goal)) continue;
    const PathResult fast = astar(grid, start, goal);
    const PathResult slow = dijkstra_oracle(grid, start, goal);
    CHECK(fast.found == slow.found);
    if (!fast.found) continue;
    ++found_count;
    CHECK(fast.steps == slow.steps);
    CHECK(fast.cost == slow.cost);  // exact double equality, no tolerance
    check_path_valid(grid, fast, start, goal);
  }
  CHECK(found_count >= 10);
}

TEST_CASE("reachable_set agrees with per-cell path queries") {
  const OccupancyGrid grid = random_grid(911, 12, 12, 0.4);
  GridIndex start{0, 0};
  // Find some free start cell deterministically.
  [&] {
    for (int r = 0; r < grid.rows(); ++r) {
      for (int c = 0; c < grid.cols(); ++c) {
        if (grid.free({r, c})) {
          start = {r, c};
          return;
        }
      }
    }
  }();
  const ReachResult reach = reachable_set(grid, start);
  int count = 0;
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      const bool flood = reach.contains(grid, {r, c});
      const bool pathed = astar(grid, start, {r, c}).found;
      CHECK(flood == pathed);
      count += flood;
    }
  }
  CHECK(count == reach.count);
}

TEST_CASE("walled-off halves are mutually unreachable") {
  OccupancyGrid grid(10, 10, 0.1, {0, 0}, true);
  for (int r = 0; r < 10; ++r) grid.set_free({r, 5}, false);
  const ReachResult reach = reachable_set(grid, {0, 0});
  CHECK(reach.count == 50);
  CHECK(reach.contains(grid, {9, 4}));
  CHECK_FALSE(reach.contains(grid, {0, 6}));
}

TEST_CASE("doorway stays passable after dilation") {
  const SceneDescription scene = two_room_scene();
  const NavGrid nav = rasterize_scene(scene, {});
  const GridIndex left = nav.dilated.cell_at({2.5, 2.0});
  const GridIndex right = nav.dilated.cell_at({7.0, 2.0});
  REQUIRE(nav.dilated.free(left));
  REQUIRE(nav.dilated.free(right));
  const PathResult res = astar(nav.dilated, left, right);
  CHECK(res.found);
  // A 1 m door minus two dilated jambs leaves a 0.6 m slot: six rows free
  // at the wall column, centered on the door.
  const int wall_col = 50;
  int open_rows = 0;
  for (int r = 0; r < nav.dilated.rows(); ++r) {
    open_rows += nav.dilated.free({r, wall_col});
  }
  CHECK(open_rows == 6);
}

TEST_CASE("pgm export is exact") {
  OccupancyGrid grid(2, 3, 0.1, {0, 0}, true);
  grid.set_free({0, 0}, false);
  const std::string pgm = to_pgm(grid);
  std::string expected = "P5\n3 2\n255\n";
  // Top image row is grid row 1 (all free), bottom row has the blocked cell.
  expected += "\xff\xff\xff";
  expected += '\x00';
  expected += "\xff\xff";
  CHECK(pgm == expected);
}

TEST_CASE("exterior door cell lands just inside the front door") {
  const SceneDescription scene = two_room_scene();
  const NavGrid nav = rasterize_scene(scene, {});
  GridIndex spawn{};
  REQUIRE(find_exterior_door_cell(scene, nav, &spawn));
  CHECK(nav.dilated.free(spawn));
  const Vec2 c = nav.dilated.cell_center(spawn);
  // Front door is a 2 m opening centered at x = 2.5 on the south wall.
  CHECK(std::fabs(c.x - 2.5) < 0.11);
  CHECK(c.y > 0.0);
  CHECK(c.y < 0.8);
}

}  // TEST_SUITE
