#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roomforge/geometry.hpp"

namespace roomforge {

enum class SceneErrorCode {
  // Structural problems in the input text/document.
  MalformedLine,
  MalformedDocument,
  MissingField,
  BadValue,
  // Room set.
  NonRectangular,
  SizeOutOfRange,
  DuplicateName,
  OverlappingRooms,
  DisconnectedRooms,
  EmptyScene,
  // Connections.
  UnknownRoom,
  BadConnectionKind,
  WallTooShort,
  NoExteriorConnection,
  // Windows.
  BadWindowKind,
  BadWindowSize,
  MixedWindowSpecs,
  WindowTooTall,
  BadWallDirection,
  // Objects.
  BadMount,
  NonPositiveSize,
  ChildOnWallMount,
};

const char* scene_error_name(SceneErrorCode code);

// Parse errors are shape problems in the input; validation errors are
// semantic invariant violations of a well-formed document. The CLI maps
// them to different exit codes.
bool is_parse_error(SceneErrorCode code);

class SceneError : public std::runtime_error {
 public:
  SceneError(SceneErrorCode code, const std::string& message, int line = -1);

  SceneErrorCode code() const { return code_; }
  int line() const { return line_; }

 private:
  SceneErrorCode code_;
  int line_;
};

// ---------------------------------------------------------------------------
// Domain types

struct Room {
  std::string name;
  std::string floor_material;
  std::string wall_material;
  std::array<Vec2, 4> corners;  // CCW, starting at the min-(x,y) corner
  double wall_height = 3.0;     // meters

  Rect rect() const;
  bool operator==(const Room&) const = default;
};

enum class ConnectionKind { Doorframe, Doorway, Open };

struct Connection {
  std::string room_a;  // may be "exterior"
  std::string room_b;
  ConnectionKind kind = ConnectionKind::Doorway;
  std::optional<double> width;  // meters; 1.0 single, 2.0 double; empty = open
  std::string style;

  bool operator==(const Connection&) const = default;
};

enum class WallDirection { North, South, East, West };
enum class WindowKind { Fixed, Hung, Slider };

struct WindowSpec {
  std::string room;
  WallDirection wall_direction = WallDirection::North;
  WindowKind kind = WindowKind::Fixed;
  int width_cm = 0;
  int height_cm = 0;
  int quantity = 1;
  double base_height_cm = 0.0;

  bool operator==(const WindowSpec&) const = default;
};

enum class Mount { Floor, Wall };
enum class VarianceKind { Same, Varied };

struct ChildSpec {
  std::string name;
  int quantity = 1;
  VarianceKind variance = VarianceKind::Same;

  bool operator==(const ChildSpec&) const = default;
};

struct ObjectSpec {
  std::string name;
  std::string description;
  Mount mount = Mount::Floor;
  // Catalog sizes stay in cm so files round-trip exactly; layout math uses
  // the meter accessors.
  Vec3 size_cm;  // (width, height, depth)
  int quantity = 1;
  VarianceKind variance = VarianceKind::Same;
  std::vector<ChildSpec> children;
  std::string room;  // owning room; may be empty in single-room scenes

  double width_m() const { return size_cm.x / 100.0; }
  double height_m() const { return size_cm.y / 100.0; }
  double depth_m() const { return size_cm.z / 100.0; }
  // Half extents of the upright box at yaw 0: x = width, y = depth, z = height.
  Vec3 half_extents_m() const {
    return {width_m() / 2.0, depth_m() / 2.0, height_m() / 2.0};
  }
  double footprint_area_m2() const { return width_m() * depth_m(); }

  bool operator==(const ObjectSpec& o) const {
    return name == o.name && description == o.description && mount == o.mount &&
           size_cm.x == o.size_cm.x && size_cm.y == o.size_cm.y &&
           size_cm.z == o.size_cm.z && quantity == o.quantity &&
           variance == o.variance && children == o.children && room == o.room;
  }
};

struct SceneDescription {
  std::vector<Room> rooms;
  std::vector<Connection> connections;
  std::vector<WindowSpec> windows;
  std::vector<ObjectSpec> objects;

  const Room* find_room(const std::string& name) const;
  const ObjectSpec* find_object(const std::string& name) const;
  // Room a spec belongs to: its `room` field, or the only room in the scene.
  const Room& room_of(const ObjectSpec& spec) const;

  // Checks every cross-cutting invariant; throws SceneError.
  void validate() const;

  bool operator==(const SceneDescription&) const = default;
};

// Surface point cloud stand-in for a generated asset.
struct ProxyPoint {
  double x, y, z, c;
};

struct ObjectProxy {
  const ObjectSpec* spec = nullptr;
  std::vector<ProxyPoint> points;
};

// ---------------------------------------------------------------------------
// Wall / door geometry shared by validation, rasterization and rendering

struct WallSegment {
  bool vertical = false;  // wall line runs along y (x = coord) when true
  double coord = 0.0;     // x for vertical walls, y for horizontal
  double lo = 0.0;        // interval along the wall line
  double hi = 0.0;

  double length() const { return hi - lo; }
};

struct DoorSpan {
  std::string room_a;
  std::string room_b;
  ConnectionKind kind = ConnectionKind::Doorway;
  WallSegment span;
};

// Shared wall between two rooms (positive-length contact), if any.
std::optional<WallSegment> shared_wall(const Room& a, const Room& b);

// Boundary intervals of `room` not shared with any other room.
std::vector<WallSegment> exterior_segments(const SceneDescription& scene,
                                           const Room& room);

// One span per connection: opening carved out of the wall line. Exterior
// doors sit centered on the room's longest exterior segment.
std::vector<DoorSpan> door_spans(const SceneDescription& scene);

// Wall edge of a room for a cardinal direction (north = max-y edge).
WallSegment room_wall(const Room& room, WallDirection dir);

// ---------------------------------------------------------------------------
// Parsers (the structured formats the planning prompts emit)

// "name | floor material | wall material | [(x, y), ...]", one room per line.
// Wall height is not part of the line format and defaults to 3 m.
std::vector<Room> parse_floor_plan(const std::string& text,
                                   double wall_height = 3.0);

// "room 1 | room 2 | type | size | style" with size in {single, double, N/A}.
Connection parse_connection_line(const std::string& line, int line_no = -1);

// "room | direction | type | (w, h) | quantity | base height".
WindowSpec parse_window_line(const std::string& line, int line_no = -1);

// Catalog lookup: allowed (width, height) cm pairs per window kind.
const std::vector<std::pair<int, int>>& window_catalog(WindowKind kind);

// Normalizes corner order and checks the rectangle + size constraints.
Room make_room(std::string name, std::string floor_material,
               std::string wall_material, const std::vector<Vec2>& corners,
               double wall_height = 3.0, int line_no = -1);

ConnectionKind connection_kind_from_string(const std::string& s, int line_no = -1);
WallDirection wall_direction_from_string(const std::string& s, int line_no = -1);
WindowKind window_kind_from_string(const std::string& s, int line_no = -1);
Mount mount_from_string(const std::string& s, int line_no = -1);
VarianceKind variance_from_string(const std::string& s, int line_no = -1);

// Uniform surface sampling over the spec's box, proportional to face area.
// Deterministic for a fixed seed.
ObjectProxy sample_proxy(const ObjectSpec& spec, int budget,
                         std::uint64_t seed);

const char* to_string(ConnectionKind kind);
const char* to_string(WallDirection dir);
const char* to_string(WindowKind kind);
const char* to_string(Mount mount);
const char* to_string(VarianceKind kind);

}  // namespace roomforge
