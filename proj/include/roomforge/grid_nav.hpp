#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "roomforge/geometry.hpp"
#include "roomforge/scene.hpp"

namespace roomforge {

struct GridIndex {
  int row = 0;
  int col = 0;

  bool operator==(const GridIndex&) const = default;
  auto operator<=>(const GridIndex&) const = default;
};

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int rows, int cols, double cell_size, Vec2 origin, bool free);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double cell_size() const { return cell_size_; }
  Vec2 origin() const { return origin_; }

  bool in_bounds(GridIndex i) const {
    return i.row >= 0 && i.row < rows_ && i.col >= 0 && i.col < cols_;
  }
  bool free(GridIndex i) const { return in_bounds(i) && cells_[offset(i)]; }
  void set_free(GridIndex i, bool value) { cells_[offset(i)] = value; }

  Vec2 cell_center(GridIndex i) const {
    return {origin_.x + (i.col + 0.5) * cell_size_,
            origin_.y + (i.row + 0.5) * cell_size_};
  }
  // Cell whose half-open [x0, x1) x [y0, y1) square holds the point.
  GridIndex cell_at(Vec2 p) const;

  int count_free() const;

  bool operator==(const OccupancyGrid&) const = default;

 private:
  std::size_t offset(GridIndex i) const {
    return static_cast<std::size_t>(i.row) * cols_ + i.col;
  }

  int rows_ = 0;
  int cols_ = 0;
  double cell_size_ = 0.1;
  Vec2 origin_;
  std::vector<std::uint8_t> cells_;  // 1 = free, 0 = obstructed
};

struct NavOptions {
  double cell_size = 0.1;          // meters per cell
  double agent_half_width = 0.2;   // square agent, half side
  double walk_under_height = 1.9;  // wall items above this do not obstruct
};

// Raw rasterization plus the agent-dilated copy used for path queries.
struct NavGrid {
  OccupancyGrid raw;
  OccupancyGrid dilated;
  int dilation_radius = 0;
  NavOptions options;
};

// Rasterizes room interiors as free space, walls as one-cell obstructed
// lines with door spans left open, and each box footprint as obstructed
// cells. Boxes whose underside clears walk_under_height are ignored. The
// dilated copy grows every obstruction by the agent radius (Chebyshev),
// so a free dilated cell means the whole agent footprint fits.
NavGrid rasterize_scene(const SceneDescription& scene,
                        const std::vector<OrientedBox>& boxes,
                        const NavOptions& options = {});

// Chebyshev dilation of the obstructed set by `radius` cells.
OccupancyGrid dilate(const OccupancyGrid& grid, int radius);

// Exact step-count path cost: total = ortho + diag * sqrt(2). Keeping the
// integer pair means path costs compare exactly across algorithms.
struct StepCount {
  int ortho = 0;
  int diag = 0;

  double cost() const { return ortho + diag * std::sqrt(2.0); }
  bool operator==(const StepCount&) const = default;
};

struct PathResult {
  bool found = false;
  std::vector<GridIndex> cells;  // start .. goal inclusive when found
  StepCount steps;
  double cost = 0.0;
};

// 8-connected A* with the octile heuristic. Diagonal moves are forbidden
// when either adjacent orthogonal cell is obstructed (no corner cutting).
// Equal-cost frontier entries pop lowest (row, col) first, so results are
// deterministic.
PathResult astar(const OccupancyGrid& grid, GridIndex start, GridIndex goal);

// Cells reachable from `start` under the same movement rules as astar.
// mask is row-major over the grid; count is the number of set cells.
struct ReachResult {
  std::vector<std::uint8_t> mask;
  int count = 0;

  bool contains(const OccupancyGrid& grid, GridIndex i) const;
};

ReachResult reachable_set(const OccupancyGrid& grid, GridIndex start);

// Binary PGM (P5), 255 = free, 0 = obstructed. Top image row is the
// highest-y grid row so the file matches the rendered floor plan.
std::string to_pgm(const OccupancyGrid& grid);

// Free dilated cell closest to the inside of the first exterior door.
// This is the standard agent spawn point. Returns false when the scene has
// no exterior door or everything near it is blocked.
bool find_exterior_door_cell(const SceneDescription& scene, const NavGrid& nav,
                             GridIndex* out);

}  // namespace roomforge
