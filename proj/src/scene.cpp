#include "roomforge/scene.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "roomforge/rng.hpp"

namespace roomforge {

namespace {

constexpr double kCoordEpsilon = 1e-9;   // coordinates coming from text files
constexpr double kSizeSlack = 1e-6;      // slack on min/max side checks

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_number(const std::string& s, int line_no, const char* what) {
  const std::string t = trim(s);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw SceneError(SceneErrorCode::MalformedLine,
                     std::string("expected a number for ") + what + ", got '" + t + "'",
                     line_no);
  }
  return value;
}

int parse_int_strict(const std::string& s, int line_no, const char* what) {
  const std::string t = trim(s);
  int value = 0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw SceneError(SceneErrorCode::MalformedLine,
                     std::string("expected an integer for ") + what + ", got '" + t + "'",
                     line_no);
  }
  return value;
}

// Extracts "(a, b)" pairs from a corner list like "[(0, 0), (4, 0), ...]".
std::vector<Vec2> parse_point_list(const std::string& text, int line_no) {
  std::vector<Vec2> points;
  size_t pos = 0;
  while (true) {
    size_t open = text.find('(', pos);
    if (open == std::string::npos) break;
    size_t close = text.find(')', open);
    if (close == std::string::npos) {
      throw SceneError(SceneErrorCode::MalformedLine, "unclosed '(' in corner list",
                       line_no);
    }
    const std::string inner = text.substr(open + 1, close - open - 1);
    auto parts = split_fields(inner, ',');
    if (parts.size() != 2) {
      throw SceneError(SceneErrorCode::MalformedLine,
                       "corner must be a pair '(x, y)', got '(" + inner + ")'", line_no);
    }
    points.push_back({parse_number(parts[0], line_no, "corner x"),
                      parse_number(parts[1], line_no, "corner y")});
    pos = close + 1;
  }
  return points;
}

bool near(double a, double b) { return std::fabs(a - b) <= kCoordEpsilon; }

// Orders four corners of an axis-aligned rectangle CCW from the min corner.
std::array<Vec2, 4> normalize_rectangle(const std::vector<Vec2>& pts,
                                        const std::string& room, int line_no) {
  if (pts.size() != 4) {
    throw SceneError(SceneErrorCode::NonRectangular,
                     "room '" + room + "' needs exactly 4 corners, got " +
                         std::to_string(pts.size()),
                     line_no);
  }
  double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
  for (const Vec2& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const std::array<Vec2, 4> expect = {
      Vec2{x0, y0}, Vec2{x1, y0}, Vec2{x1, y1}, Vec2{x0, y1}};
  std::array<bool, 4> seen = {false, false, false, false};
  for (const Vec2& p : pts) {
    bool matched = false;
    for (int i = 0; i < 4; ++i) {
      if (!seen[i] && near(p.x, expect[i].x) && near(p.y, expect[i].y)) {
        seen[i] = matched = true;
        break;
      }
    }
    if (!matched) {
      throw SceneError(SceneErrorCode::NonRectangular,
                       "room '" + room + "' corners do not form an axis-aligned rectangle",
                       line_no);
    }
  }
  return expect;
}

void check_room_size(const Room& room, int line_no) {
  const Rect r = room.rect();
  const double w = r.width(), h = r.height();
  if (w <= kCoordEpsilon || h <= kCoordEpsilon) {
    throw SceneError(SceneErrorCode::NonRectangular,
                     "room '" + room.name + "' is degenerate", line_no);
  }
  if (w < 3.0 - kSizeSlack || w > 8.0 + kSizeSlack || h < 3.0 - kSizeSlack ||
      h > 8.0 + kSizeSlack) {
    throw SceneError(SceneErrorCode::SizeOutOfRange,
                     "room '" + room.name + "' sides must be between 3 and 8 meters",
                     line_no);
  }
  if (w * h > 48.0 + kSizeSlack) {
    throw SceneError(SceneErrorCode::SizeOutOfRange,
                     "room '" + room.name + "' exceeds 48 square meters", line_no);
  }
}

// Subtracts `covered` intervals from [lo, hi]; returns leftover pieces.
std::vector<std::pair<double, double>> subtract_intervals(
    double lo, double hi, std::vector<std::pair<double, double>> covered) {
  std::sort(covered.begin(), covered.end());
  std::vector<std::pair<double, double>> out;
  double cursor = lo;
  for (const auto& [a, b] : covered) {
    const double ca = std::max(a, lo), cb = std::min(b, hi);
    if (cb <= cursor + kCoordEpsilon) continue;
    if (ca > cursor + kCoordEpsilon) out.push_back({cursor, ca});
    cursor = std::max(cursor, cb);
  }
  if (hi > cursor + kCoordEpsilon) out.push_back({cursor, hi});
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Errors

const char* scene_error_name(SceneErrorCode code) {
  switch (code) {
    case SceneErrorCode::MalformedLine: return "MalformedLine";
    case SceneErrorCode::MalformedDocument: return "MalformedDocument";
    case SceneErrorCode::MissingField: return "MissingField";
    case SceneErrorCode::BadValue: return "BadValue";
    case SceneErrorCode::NonRectangular: return "NonRectangular";
    case SceneErrorCode::SizeOutOfRange: return "SizeOutOfRange";
    case SceneErrorCode::DuplicateName: return "DuplicateName";
    case SceneErrorCode::OverlappingRooms: return "OverlappingRooms";
    case SceneErrorCode::DisconnectedRooms: return "DisconnectedRooms";
    case SceneErrorCode::EmptyScene: return "EmptyScene";
    case SceneErrorCode::UnknownRoom: return "UnknownRoom";
    case SceneErrorCode::BadConnectionKind: return "BadConnectionKind";
    case SceneErrorCode::WallTooShort: return "WallTooShort";
    case SceneErrorCode::NoExteriorConnection: return "NoExteriorConnection";
    case SceneErrorCode::BadWindowKind: return "BadWindowKind";
    case SceneErrorCode::BadWindowSize: return "BadWindowSize";
    case SceneErrorCode::MixedWindowSpecs: return "MixedWindowSpecs";
    case SceneErrorCode::WindowTooTall: return "WindowTooTall";
    case SceneErrorCode::BadWallDirection: return "BadWallDirection";
    case SceneErrorCode::BadMount: return "BadMount";
    case SceneErrorCode::NonPositiveSize: return "NonPositiveSize";
    case SceneErrorCode::ChildOnWallMount: return "ChildOnWallMount";
  }
  return "Unknown";
}

bool is_parse_error(SceneErrorCode code) {
  switch (code) {
    case SceneErrorCode::MalformedLine:
    case SceneErrorCode::MalformedDocument:
    case SceneErrorCode::MissingField:
    case SceneErrorCode::BadValue:
    case SceneErrorCode::BadConnectionKind:
    case SceneErrorCode::BadWindowKind:
    case SceneErrorCode::BadWallDirection:
    case SceneErrorCode::BadMount:
      return true;
    default:
      return false;
  }
}

SceneError::SceneError(SceneErrorCode code, const std::string& message, int line)
    : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + message
                                   : message),
      code_(code),
      line_(line) {}

// ---------------------------------------------------------------------------
// Room helpers

Rect Room::rect() const {
  return {corners[0].x, corners[0].y, corners[2].x, corners[2].y};
}

const Room* SceneDescription::find_room(const std::string& name) const {
  for (const Room& r : rooms) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const ObjectSpec* SceneDescription::find_object(const std::string& name) const {
  for (const ObjectSpec& o : objects) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

const Room& SceneDescription::room_of(const ObjectSpec& spec) const {
  if (!spec.room.empty()) {
    const Room* r = find_room(spec.room);
    if (!r) {
      throw SceneError(SceneErrorCode::UnknownRoom,
                       "object '" + spec.name + "' references unknown room '" +
                           spec.room + "'");
    }
    return *r;
  }
  if (rooms.size() == 1) return rooms.front();
  throw SceneError(SceneErrorCode::MissingField,
                   "object '" + spec.name + "' needs a room in a multi-room scene");
}

// ---------------------------------------------------------------------------
// Wall geometry

std::optional<WallSegment> shared_wall(const Room& a, const Room& b) {
  const Rect ra = a.rect(), rb = b.rect();
  // Vertical contact: right edge of one touches left edge of the other.
  if (near(ra.x1, rb.x0) || near(rb.x1, ra.x0)) {
    const double coord = near(ra.x1, rb.x0) ? ra.x1 : rb.x1;
    const double lo = std::max(ra.y0, rb.y0), hi = std::min(ra.y1, rb.y1);
    if (hi - lo > kCoordEpsilon) return WallSegment{true, coord, lo, hi};
  }
  if (near(ra.y1, rb.y0) || near(rb.y1, ra.y0)) {
    const double coord = near(ra.y1, rb.y0) ? ra.y1 : rb.y1;
    const double lo = std::max(ra.x0, rb.x0), hi = std::min(ra.x1, rb.x1);
    if (hi - lo > kCoordEpsilon) return WallSegment{false, coord, lo, hi};
  }
  return std::nullopt;
}

WallSegment room_wall(const Room& room, WallDirection dir) {
  const Rect r = room.rect();
  switch (dir) {
    case WallDirection::South: return {false, r.y0, r.x0, r.x1};
    case WallDirection::East: return {true, r.x1, r.y0, r.y1};
    case WallDirection::North: return {false, r.y1, r.x0, r.x1};
    case WallDirection::West: return {true, r.x0, r.y0, r.y1};
  }
  return {};
}

std::vector<WallSegment> exterior_segments(const SceneDescription& scene,
                                           const Room& room) {
  std::vector<WallSegment> out;
  // Fixed edge order keeps downstream door placement deterministic.
  const WallDirection order[4] = {WallDirection::South, WallDirection::East,
                                  WallDirection::North, WallDirection::West};
  for (WallDirection dir : order) {
    const WallSegment edge = room_wall(room, dir);
    std::vector<std::pair<double, double>> covered;
    for (const Room& other : scene.rooms) {
      if (&other == &room) continue;
      const auto seg = shared_wall(room, other);
      if (seg && seg->vertical == edge.vertical && near(seg->coord, edge.coord)) {
        covered.push_back({seg->lo, seg->hi});
      }
    }
    for (const auto& [lo, hi] : subtract_intervals(edge.lo, edge.hi, covered)) {
      out.push_back({edge.vertical, edge.coord, lo, hi});
    }
  }
  return out;
}

std::vector<DoorSpan> door_spans(const SceneDescription& scene) {
  std::vector<DoorSpan> out;
  for (const Connection& conn : scene.connections) {
    const bool a_ext = conn.room_a == "exterior";
    const bool b_ext = conn.room_b == "exterior";
    WallSegment wall;
    if (!a_ext && !b_ext) {
      const Room* ra = scene.find_room(conn.room_a);
      const Room* rb = scene.find_room(conn.room_b);
      if (!ra || !rb) continue;  // validate() reports this properly
      const auto seg = shared_wall(*ra, *rb);
      if (!seg) continue;
      wall = *seg;
    } else {
      const Room* r = scene.find_room(a_ext ? conn.room_b : conn.room_a);
      if (!r) continue;
      // Exterior door goes on the longest outside-facing stretch of wall.
      const auto segs = exterior_segments(scene, *r);
      if (segs.empty()) continue;
      wall = segs.front();
      for (const WallSegment& s : segs) {
        if (s.length() > wall.length() + kCoordEpsilon) wall = s;
      }
    }
    DoorSpan span;
    span.room_a = conn.room_a;
    span.room_b = conn.room_b;
    span.kind = conn.kind;
    span.span = wall;
    if (conn.width && conn.kind != ConnectionKind::Open) {
      const double w = std::min(*conn.width, wall.length());
      const double mid = 0.5 * (wall.lo + wall.hi);
      span.span.lo = mid - w / 2.0;
      span.span.hi = mid + w / 2.0;
    }
    out.push_back(span);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

void SceneDescription::validate() const {
  if (rooms.empty()) {
    throw SceneError(SceneErrorCode::EmptyScene, "scene has no rooms");
  }
  std::set<std::string> room_names;
  for (const Room& room : rooms) {
    if (!room_names.insert(room.name).second) {
      throw SceneError(SceneErrorCode::DuplicateName,
                       "duplicate room name '" + room.name + "'");
    }
    check_room_size(room, -1);
    if (room.wall_height <= 0.0) {
      throw SceneError(SceneErrorCode::BadValue,
                       "room '" + room.name + "' has non-positive wall height");
    }
  }
  for (size_t i = 0; i < rooms.size(); ++i) {
    for (size_t j = i + 1; j < rooms.size(); ++j) {
      if (rects_interiors_intersect(rooms[i].rect(), rooms[j].rect())) {
        throw SceneError(SceneErrorCode::OverlappingRooms,
                         "rooms '" + rooms[i].name + "' and '" + rooms[j].name +
                             "' overlap");
      }
    }
  }
  if (rooms.size() > 1) {
    // Rooms must form one connected block through shared walls.
    std::vector<bool> seen(rooms.size(), false);
    std::queue<size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    while (!frontier.empty()) {
      const size_t i = frontier.front();
      frontier.pop();
      for (size_t j = 0; j < rooms.size(); ++j) {
        if (!seen[j] && shared_wall(rooms[i], rooms[j])) {
          seen[j] = true;
          frontier.push(j);
        }
      }
    }
    for (size_t i = 0; i < rooms.size(); ++i) {
      if (!seen[i]) {
        throw SceneError(SceneErrorCode::DisconnectedRooms,
                         "room '" + rooms[i].name + "' shares no wall with the rest");
      }
    }
  }

  bool has_exterior = false;
  for (const Connection& conn : connections) {
    const bool a_ext = conn.room_a == "exterior";
    const bool b_ext = conn.room_b == "exterior";
    if (a_ext && b_ext) {
      throw SceneError(SceneErrorCode::UnknownRoom,
                       "connection joins exterior to exterior");
    }
    if (!a_ext && !find_room(conn.room_a)) {
      throw SceneError(SceneErrorCode::UnknownRoom,
                       "connection references unknown room '" + conn.room_a + "'");
    }
    if (!b_ext && !find_room(conn.room_b)) {
      throw SceneError(SceneErrorCode::UnknownRoom,
                       "connection references unknown room '" + conn.room_b + "'");
    }
    if (!a_ext && !b_ext && conn.room_a == conn.room_b) {
      throw SceneError(SceneErrorCode::BadValue,
                       "connection joins room '" + conn.room_a + "' to itself");
    }
    if (conn.kind == ConnectionKind::Open) {
      if (conn.width) {
        throw SceneError(SceneErrorCode::BadValue,
                         "open connection must not carry a door width");
      }
    } else {
      if (!conn.width || *conn.width <= 0.0) {
        throw SceneError(SceneErrorCode::BadValue,
                         "door connection needs a positive width");
      }
    }
    const double need = conn.width.value_or(0.0);
    if (!a_ext && !b_ext) {
      const auto seg = shared_wall(*find_room(conn.room_a), *find_room(conn.room_b));
      if (!seg) {
        throw SceneError(SceneErrorCode::WallTooShort,
                         "rooms '" + conn.room_a + "' and '" + conn.room_b +
                             "' share no wall");
      }
      if (seg->length() + kSizeSlack < need) {
        throw SceneError(SceneErrorCode::WallTooShort,
                         "shared wall between '" + conn.room_a + "' and '" +
                             conn.room_b + "' is shorter than the door");
      }
    } else {
      has_exterior = true;
      const Room* r = find_room(a_ext ? conn.room_b : conn.room_a);
      double longest = 0.0;
      for (const WallSegment& s : exterior_segments(*this, *r)) {
        longest = std::max(longest, s.length());
      }
      if (longest + kSizeSlack < std::max(need, kCoordEpsilon)) {
        throw SceneError(SceneErrorCode::WallTooShort,
                         "room '" + r->name + "' has no exterior wall long enough");
      }
    }
  }
  if (!connections.empty() && !has_exterior) {
    throw SceneError(SceneErrorCode::NoExteriorConnection,
                     "at least one connection must reach the exterior");
  }

  // Window rules: catalog sizes only, and one style+size per room.
  std::map<std::string, std::pair<WindowKind, std::pair<int, int>>> per_room;
  for (const WindowSpec& win : windows) {
    const Room* r = find_room(win.room);
    if (!r) {
      throw SceneError(SceneErrorCode::UnknownRoom,
                       "window references unknown room '" + win.room + "'");
    }
    const auto& catalog = window_catalog(win.kind);
    const std::pair<int, int> size{win.width_cm, win.height_cm};
    if (std::find(catalog.begin(), catalog.end(), size) == catalog.end()) {
      throw SceneError(SceneErrorCode::BadWindowSize,
                       "window size (" + std::to_string(win.width_cm) + ", " +
                           std::to_string(win.height_cm) + ") is not in the " +
                           to_string(win.kind) + " catalog");
    }
    if (win.quantity < 1) {
      throw SceneError(SceneErrorCode::BadValue, "window quantity must be >= 1");
    }
    auto [it, inserted] = per_room.insert({win.room, {win.kind, size}});
    if (!inserted && (it->second.first != win.kind || it->second.second != size)) {
      throw SceneError(SceneErrorCode::MixedWindowSpecs,
                       "room '" + win.room + "' mixes window styles or sizes");
    }
    if (win.base_height_cm < 0.0 ||
        win.base_height_cm + win.height_cm > r->wall_height * 100.0 + kSizeSlack) {
      throw SceneError(SceneErrorCode::WindowTooTall,
                       "window in room '" + win.room + "' does not fit the wall");
    }
  }

  std::set<std::string> object_names;
  for (const ObjectSpec& obj : objects) {
    if (!object_names.insert(obj.name).second) {
      throw SceneError(SceneErrorCode::DuplicateName,
                       "duplicate object name '" + obj.name + "'");
    }
    if (obj.size_cm.x <= 0.0 || obj.size_cm.y <= 0.0 || obj.size_cm.z <= 0.0) {
      throw SceneError(SceneErrorCode::NonPositiveSize,
                       "object '" + obj.name + "' has a non-positive dimension");
    }
    if (obj.quantity < 1) {
      throw SceneError(SceneErrorCode::NonPositiveSize,
                       "object '" + obj.name + "' has quantity < 1");
    }
    if (!obj.children.empty() && obj.mount == Mount::Wall) {
      throw SceneError(SceneErrorCode::ChildOnWallMount,
                       "wall-mounted object '" + obj.name + "' cannot carry objects");
    }
    for (const ChildSpec& child : obj.children) {
      if (child.quantity < 1) {
        throw SceneError(SceneErrorCode::NonPositiveSize,
                         "child '" + child.name + "' of '" + obj.name +
                             "' has quantity < 1");
      }
    }
    room_of(obj);  // throws UnknownRoom / MissingField when unresolvable
  }
}

// ---------------------------------------------------------------------------
// Parsers

Room make_room(std::string name, std::string floor_material,
               std::string wall_material, const std::vector<Vec2>& corners,
               double wall_height, int line_no) {
  Room room;
  room.name = std::move(name);
  room.floor_material = std::move(floor_material);
  room.wall_material = std::move(wall_material);
  room.corners = normalize_rectangle(corners, room.name, line_no);
  room.wall_height = wall_height;
  check_room_size(room, line_no);
  return room;
}

ConnectionKind connection_kind_from_string(const std::string& s, int line_no) {
  const std::string kind = to_lower(trim(s));
  if (kind == "doorway") return ConnectionKind::Doorway;
  if (kind == "door frame" || kind == "doorframe") return ConnectionKind::Doorframe;
  if (kind == "open") return ConnectionKind::Open;
  throw SceneError(SceneErrorCode::BadConnectionKind,
                   "unknown connection type '" + s + "'", line_no);
}

WallDirection wall_direction_from_string(const std::string& s, int line_no) {
  const std::string dir = to_lower(trim(s));
  if (dir == "north") return WallDirection::North;
  if (dir == "south") return WallDirection::South;
  if (dir == "east") return WallDirection::East;
  if (dir == "west") return WallDirection::West;
  throw SceneError(SceneErrorCode::BadWallDirection,
                   "unknown wall direction '" + s + "'", line_no);
}

WindowKind window_kind_from_string(const std::string& s, int line_no) {
  const std::string kind = to_lower(trim(s));
  if (kind == "fixed") return WindowKind::Fixed;
  if (kind == "hung") return WindowKind::Hung;
  if (kind == "slider") return WindowKind::Slider;
  throw SceneError(SceneErrorCode::BadWindowKind,
                   "unknown window type '" + s + "'", line_no);
}

Mount mount_from_string(const std::string& s, int line_no) {
  const std::string mount = to_lower(trim(s));
  if (mount == "floor") return Mount::Floor;
  if (mount == "wall") return Mount::Wall;
  throw SceneError(SceneErrorCode::BadMount,
                   "object location must be floor or wall, got '" + s + "'", line_no);
}

VarianceKind variance_from_string(const std::string& s, int line_no) {
  const std::string v = to_lower(trim(s));
  if (v == "same") return VarianceKind::Same;
  if (v == "varied") return VarianceKind::Varied;
  throw SceneError(SceneErrorCode::BadValue,
                   "variance type must be same or varied, got '" + s + "'", line_no);
}

std::vector<Room> parse_floor_plan(const std::string& text, double wall_height) {
  std::vector<Room> rooms;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line, '|');
    if (fields.size() != 4) {
      throw SceneError(SceneErrorCode::MalformedLine,
                       "expected 'name | floor | wall | corners', got " +
                           std::to_string(fields.size()) + " fields",
                       line_no);
    }
    if (fields[0].empty()) {
      throw SceneError(SceneErrorCode::MissingField, "room name is empty", line_no);
    }
    rooms.push_back(make_room(fields[0], fields[1], fields[2],
                              parse_point_list(fields[3], line_no), wall_height,
                              line_no));
  }
  return rooms;
}

Connection parse_connection_line(const std::string& line, int line_no) {
  auto fields = split_fields(line, '|');
  if (fields.size() != 5) {
    throw SceneError(SceneErrorCode::MalformedLine,
                     "expected 'room 1 | room 2 | type | size | style', got " +
                         std::to_string(fields.size()) + " fields",
                     line_no);
  }
  if (fields[0].empty() || fields[1].empty()) {
    throw SceneError(SceneErrorCode::MissingField, "connection room name is empty",
                     line_no);
  }
  Connection conn;
  conn.room_a = fields[0];
  conn.room_b = fields[1];
  conn.kind = connection_kind_from_string(fields[2], line_no);
  const std::string size = to_lower(fields[3]);
  if (size == "single") {
    conn.width = 1.0;
  } else if (size == "double") {
    conn.width = 2.0;
  } else if (size == "n/a" || size == "na" || size == "none" || size.empty()) {
    conn.width = std::nullopt;
  } else {
    throw SceneError(SceneErrorCode::BadValue,
                     "connection size must be single, double or N/A, got '" +
                         fields[3] + "'",
                     line_no);
  }
  if (conn.kind == ConnectionKind::Open && conn.width) {
    throw SceneError(SceneErrorCode::BadValue,
                     "open connection must use size N/A", line_no);
  }
  if (conn.kind != ConnectionKind::Open && !conn.width) {
    throw SceneError(SceneErrorCode::BadValue,
                     "door connection needs size single or double", line_no);
  }
  conn.style = fields[4];
  return conn;
}

WindowSpec parse_window_line(const std::string& line, int line_no) {
  auto fields = split_fields(line, '|');
  if (fields.size() != 6) {
    throw SceneError(
        SceneErrorCode::MalformedLine,
        "expected 'room | direction | type | (w, h) | quantity | base height', got " +
            std::to_string(fields.size()) + " fields",
        line_no);
  }
  WindowSpec win;
  win.room = fields[0];
  if (win.room.empty()) {
    throw SceneError(SceneErrorCode::MissingField, "window room name is empty",
                     line_no);
  }
  win.wall_direction = wall_direction_from_string(fields[1], line_no);
  win.kind = window_kind_from_string(fields[2], line_no);
  const auto size = parse_point_list(fields[3], line_no);
  if (size.size() != 1) {
    throw SceneError(SceneErrorCode::MalformedLine,
                     "window size must be a single '(w, h)' pair", line_no);
  }
  win.width_cm = static_cast<int>(std::lround(size[0].x));
  win.height_cm = static_cast<int>(std::lround(size[0].y));
  win.quantity = parse_int_strict(fields[4], line_no, "window quantity");
  win.base_height_cm = parse_number(fields[5], line_no, "window base height");
  return win;
}

const std::vector<std::pair<int, int>>& window_catalog(WindowKind kind) {
  static const std::vector<std::pair<int, int>> fixed = {
      {92, 120}, {150, 92}, {150, 120}, {150, 180}, {240, 120}, {240, 180}};
  static const std::vector<std::pair<int, int>> hung = {
      {87, 160}, {96, 91}, {120, 160}, {130, 67}, {130, 87}, {130, 130}};
  static const std::vector<std::pair<int, int>> slider = {
      {91, 92}, {120, 61}, {120, 91}, {120, 120}, {150, 92}, {150, 120}};
  switch (kind) {
    case WindowKind::Fixed: return fixed;
    case WindowKind::Hung: return hung;
    case WindowKind::Slider: return slider;
  }
  return fixed;
}

// ---------------------------------------------------------------------------
// Proxy sampling

ObjectProxy sample_proxy(const ObjectSpec& spec, int budget, std::uint64_t seed) {
  ObjectProxy proxy;
  proxy.spec = &spec;
  if (budget <= 0) return proxy;
  const double w = spec.width_m(), d = spec.depth_m(), h = spec.height_m();
  // Six box faces; a face's share of points matches its share of surface area.
  const double areas[6] = {w * d, w * d, w * h, w * h, d * h, d * h};
  double cumulative[6];
  double total = 0.0;
  for (int i = 0; i < 6; ++i) {
    total += areas[i];
    cumulative[i] = total;
  }
  if (total <= 0.0) return proxy;
  Rng rng(seed);
  proxy.points.reserve(static_cast<size_t>(budget));
  for (int n = 0; n < budget; ++n) {
    const double pick = rng.uniform(0.0, total);
    int face = 0;
    while (face < 5 && pick > cumulative[face]) ++face;
    const double u = rng.uniform(), v = rng.uniform();
    ProxyPoint p{0.0, 0.0, 0.0, static_cast<double>(face)};
    switch (face) {
      case 0:  // bottom, z = 0
        p.x = (u - 0.5) * w; p.y = (v - 0.5) * d; p.z = 0.0; break;
      case 1:  // top, z = h
        p.x = (u - 0.5) * w; p.y = (v - 0.5) * d; p.z = h; break;
      case 2:  // front, y = -d/2
        p.x = (u - 0.5) * w; p.y = -d / 2.0; p.z = v * h; break;
      case 3:  // back, y = +d/2
        p.x = (u - 0.5) * w; p.y = d / 2.0; p.z = v * h; break;
      case 4:  // left, x = -w/2
        p.x = -w / 2.0; p.y = (u - 0.5) * d; p.z = v * h; break;
      case 5:  // right, x = +w/2
        p.x = w / 2.0; p.y = (u - 0.5) * d; p.z = v * h; break;
    }
    proxy.points.push_back(p);
  }
  return proxy;
}

// ---------------------------------------------------------------------------
// Enum names

const char* to_string(ConnectionKind kind) {
  switch (kind) {
    case ConnectionKind::Doorframe: return "door frame";
    case ConnectionKind::Doorway: return "doorway";
    case ConnectionKind::Open: return "open";
  }
  return "?";
}

const char* to_string(WallDirection dir) {
  switch (dir) {
    case WallDirection::North: return "north";
    case WallDirection::South: return "south";
    case WallDirection::East: return "east";
    case WallDirection::West: return "west";
  }
  return "?";
}

const char* to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::Fixed: return "fixed";
    case WindowKind::Hung: return "hung";
    case WindowKind::Slider: return "slider";
  }
  return "?";
}

const char* to_string(Mount mount) {
  switch (mount) {
    case Mount::Floor: return "floor";
    case Mount::Wall: return "wall";
  }
  return "?";
}

const char* to_string(VarianceKind kind) {
  switch (kind) {
    case VarianceKind::Same: return "same";
    case VarianceKind::Varied: return "varied";
  }
  return "?";
}

}  // namespace roomforge
