#include "roomforge/scene_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace roomforge {

namespace {

const Json* find_any(const Json& obj, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    if (const Json* f = find_field(obj, key)) return f;
  }
  return nullptr;
}

std::string get_string(const Json& obj, std::initializer_list<const char*> keys,
                       bool required, const std::string& fallback = "") {
  const Json* f = find_any(obj, keys);
  if (!f || f->is_null()) {
    if (required) {
      throw SceneError(SceneErrorCode::MissingField,
                       std::string("missing field '") + *keys.begin() + "'");
    }
    return fallback;
  }
  if (!f->is_string()) {
    throw SceneError(SceneErrorCode::BadValue,
                     std::string("field '") + *keys.begin() + "' must be a string");
  }
  return f->get<std::string>();
}

double get_number(const Json& obj, std::initializer_list<const char*> keys,
                  bool required, double fallback = 0.0) {
  const Json* f = find_any(obj, keys);
  if (!f || f->is_null()) {
    if (required) {
      throw SceneError(SceneErrorCode::MissingField,
                       std::string("missing field '") + *keys.begin() + "'");
    }
    return fallback;
  }
  if (!f->is_number()) {
    throw SceneError(SceneErrorCode::BadValue,
                     std::string("field '") + *keys.begin() + "' must be a number");
  }
  return f->get<double>();
}

int get_int(const Json& obj, std::initializer_list<const char*> keys, bool required,
            int fallback = 0) {
  const Json* f = find_any(obj, keys);
  if (!f || f->is_null()) {
    if (required) {
      throw SceneError(SceneErrorCode::MissingField,
                       std::string("missing field '") + *keys.begin() + "'");
    }
    return fallback;
  }
  if (!f->is_number_integer()) {
    throw SceneError(SceneErrorCode::BadValue,
                     std::string("field '") + *keys.begin() + "' must be an integer");
  }
  return f->get<int>();
}

Vec2 point_from_json(const Json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object()) {
    const Json* x = find_field(j, "x");
    const Json* y = find_field(j, "y");
    if (x && y && x->is_number() && y->is_number()) {
      return {x->get<double>(), y->get<double>()};
    }
  }
  throw SceneError(SceneErrorCode::BadValue, "point must be [x, y]");
}

Room room_from_json(const Json& j) {
  const Json* corners = find_field(j, "corners");
  if (!corners || !corners->is_array()) {
    throw SceneError(SceneErrorCode::MissingField, "room needs a 'corners' array");
  }
  std::vector<Vec2> points;
  for (const Json& p : *corners) points.push_back(point_from_json(p));
  return make_room(get_string(j, {"name"}, true),
                   get_string(j, {"floor_material", "floor material"}, false),
                   get_string(j, {"wall_material", "wall material"}, false), points,
                   get_number(j, {"wall_height", "wall height"}, false, 3.0));
}

std::optional<double> width_from_size_token(const std::string& token) {
  std::string t;
  for (char c : token) t.push_back(static_cast<char>(std::tolower(c)));
  if (t == "single") return 1.0;
  if (t == "double") return 2.0;
  if (t == "n/a" || t == "na" || t == "none" || t.empty()) return std::nullopt;
  throw SceneError(SceneErrorCode::BadValue,
                   "connection size must be single, double or N/A, got '" + token +
                       "'");
}

Connection connection_from_json(const Json& j) {
  if (j.is_string()) return parse_connection_line(j.get<std::string>());
  if (!j.is_object()) {
    throw SceneError(SceneErrorCode::MalformedDocument,
                     "connection must be an object or a pipe-delimited string");
  }
  Connection conn;
  conn.room_a = get_string(j, {"room_a", "room 1", "room a"}, true);
  conn.room_b = get_string(j, {"room_b", "room 2", "room b"}, true);
  conn.kind = connection_kind_from_string(get_string(j, {"kind", "type"}, true));
  if (const Json* size = find_any(j, {"size", "width"})) {
    if (size->is_string()) {
      conn.width = width_from_size_token(size->get<std::string>());
    } else if (size->is_number()) {
      conn.width = size->get<double>();
    } else if (!size->is_null()) {
      throw SceneError(SceneErrorCode::BadValue,
                       "connection size must be a string or a number");
    }
  }
  if (conn.kind == ConnectionKind::Open && conn.width) {
    throw SceneError(SceneErrorCode::BadValue,
                     "open connection must not carry a door width");
  }
  if (conn.kind != ConnectionKind::Open && !conn.width) {
    throw SceneError(SceneErrorCode::BadValue,
                     "door connection needs size single or double");
  }
  conn.style = get_string(j, {"style"}, false);
  return conn;
}

WindowSpec window_from_json(const Json& j) {
  if (j.is_string()) return parse_window_line(j.get<std::string>());
  if (!j.is_object()) {
    throw SceneError(SceneErrorCode::MalformedDocument,
                     "window must be an object or a pipe-delimited string");
  }
  WindowSpec win;
  win.room = get_string(j, {"room"}, true);
  win.wall_direction =
      wall_direction_from_string(get_string(j, {"wall", "direction"}, true));
  win.kind = window_kind_from_string(get_string(j, {"kind", "type"}, true));
  const Json* size = find_field(j, "size");
  if (!size || !size->is_array() || size->size() != 2 || !(*size)[0].is_number() ||
      !(*size)[1].is_number()) {
    throw SceneError(SceneErrorCode::MissingField,
                     "window needs a 'size' array [width_cm, height_cm]");
  }
  win.width_cm = static_cast<int>(std::lround((*size)[0].get<double>()));
  win.height_cm = static_cast<int>(std::lround((*size)[1].get<double>()));
  win.quantity = get_int(j, {"quantity"}, false, 1);
  win.base_height_cm =
      get_number(j, {"base_height_cm", "base height", "base_height"}, false, 0.0);
  return win;
}

ChildSpec child_from_json(const Json& j) {
  ChildSpec child;
  if (j.is_string()) {
    child.name = j.get<std::string>();
    return child;
  }
  if (!j.is_object()) {
    throw SceneError(SceneErrorCode::MalformedDocument,
                     "child entry must be an object or a name string");
  }
  child.name = get_string(j, {"object name", "name"}, true);
  child.quantity = get_int(j, {"quantity"}, false, 1);
  if (child.quantity < 1) {
    throw SceneError(SceneErrorCode::NonPositiveSize,
                     "child '" + child.name + "' has quantity < 1");
  }
  if (const Json* v = find_any(j, {"variance type", "variance"})) {
    if (!v->is_string()) {
      throw SceneError(SceneErrorCode::BadValue, "variance type must be a string");
    }
    child.variance = variance_from_string(v->get<std::string>());
  }
  return child;
}

ObjectSpec object_from_manifest_entry(const std::string& name, const Json& entry) {
  if (!entry.is_object()) {
    throw SceneError(SceneErrorCode::MalformedDocument,
                     "entry for '" + name + "' must be an object");
  }
  ObjectSpec spec;
  spec.name = name;
  spec.description = get_string(entry, {"description"}, false);
  spec.mount = mount_from_string(get_string(entry, {"location"}, true));
  const Json* size = find_field(entry, "size");
  if (!size || !size->is_array() || size->size() != 3) {
    throw SceneError(SceneErrorCode::MissingField,
                     "object '" + name +
                         "' needs a 'size' array [width, height, depth] in cm");
  }
  for (const Json& v : *size) {
    if (!v.is_number()) {
      throw SceneError(SceneErrorCode::BadValue,
                       "object '" + name + "' size entries must be numbers");
    }
  }
  spec.size_cm = {(*size)[0].get<double>(), (*size)[1].get<double>(),
                  (*size)[2].get<double>()};
  if (spec.size_cm.x <= 0.0 || spec.size_cm.y <= 0.0 || spec.size_cm.z <= 0.0) {
    throw SceneError(SceneErrorCode::NonPositiveSize,
                     "object '" + name + "' has a non-positive dimension");
  }
  spec.quantity = get_int(entry, {"quantity"}, true);
  if (spec.quantity < 1) {
    throw SceneError(SceneErrorCode::NonPositiveSize,
                     "object '" + name + "' has quantity < 1");
  }
  if (const Json* v = find_any(entry, {"variance type", "variance"})) {
    if (!v->is_string()) {
      throw SceneError(SceneErrorCode::BadValue, "variance type must be a string");
    }
    spec.variance = variance_from_string(v->get<std::string>());
  }
  if (const Json* children = find_any(entry, {"objects on top", "children"})) {
    if (!children->is_array()) {
      throw SceneError(SceneErrorCode::BadValue,
                       "'objects on top' must be an array");
    }
    for (const Json& c : *children) spec.children.push_back(child_from_json(c));
  }
  spec.room = get_string(entry, {"room"}, false);
  return spec;
}

Json child_to_json(const ChildSpec& child) {
  Json j;
  j["object name"] = child.name;
  j["quantity"] = child.quantity;
  j["variance type"] = to_string(child.variance);
  return j;
}

Json object_entry_to_json(const ObjectSpec& spec) {
  Json j;
  j["description"] = spec.description;
  j["location"] = to_string(spec.mount);
  j["size"] = {spec.size_cm.x, spec.size_cm.y, spec.size_cm.z};
  j["quantity"] = spec.quantity;
  j["variance type"] = to_string(spec.variance);
  Json children = Json::array();
  for (const ChildSpec& child : spec.children) children.push_back(child_to_json(child));
  j["objects on top"] = std::move(children);
  if (!spec.room.empty()) j["room"] = spec.room;
  return j;
}

}  // namespace

ObjectSpec object_spec_from_json(const std::string& name, const Json& entry) {
  return object_from_manifest_entry(name, entry);
}

std::vector<ObjectSpec> parse_object_manifest(const Json& j) {
  if (!j.is_object()) {
    throw SceneError(SceneErrorCode::MalformedDocument,
                     "object catalog must be a JSON object keyed by object name");
  }
  std::vector<ObjectSpec> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.push_back(object_from_manifest_entry(it.key(), it.value()));
  }
  return out;
}

Json object_manifest_to_json(const std::vector<ObjectSpec>& objects) {
  Json j = Json::object();
  for (const ObjectSpec& spec : objects) j[spec.name] = object_entry_to_json(spec);
  return j;
}

SceneDescription scene_from_json(const Json& j) {
  if (!j.is_object()) {
    throw SceneError(SceneErrorCode::MalformedDocument,
                     "scene must be a JSON object");
  }
  SceneDescription scene;
  if (const Json* rooms = find_field(j, "rooms")) {
    if (rooms->is_string()) {
      scene.rooms = parse_floor_plan(rooms->get<std::string>());
    } else if (rooms->is_array()) {
      for (const Json& r : *rooms) {
        if (r.is_string()) {
          for (Room& room : parse_floor_plan(r.get<std::string>())) {
            scene.rooms.push_back(std::move(room));
          }
        } else {
          scene.rooms.push_back(room_from_json(r));
        }
      }
    } else {
      throw SceneError(SceneErrorCode::BadValue,
                       "'rooms' must be an array or floor-plan text");
    }
  }
  if (const Json* conns = find_field(j, "connections")) {
    if (!conns->is_array()) {
      throw SceneError(SceneErrorCode::BadValue, "'connections' must be an array");
    }
    for (const Json& c : *conns) scene.connections.push_back(connection_from_json(c));
  }
  if (const Json* wins = find_field(j, "windows")) {
    if (!wins->is_array()) {
      throw SceneError(SceneErrorCode::BadValue, "'windows' must be an array");
    }
    for (const Json& w : *wins) scene.windows.push_back(window_from_json(w));
  }
  if (const Json* objs = find_field(j, "objects")) {
    if (objs->is_object()) {
      scene.objects = parse_object_manifest(*objs);
    } else if (objs->is_array()) {
      for (const Json& o : *objs) {
        scene.objects.push_back(
            object_from_manifest_entry(get_string(o, {"name"}, true), o));
      }
    } else {
      throw SceneError(SceneErrorCode::BadValue,
                       "'objects' must be a catalog object or an array");
    }
  }
  return scene;
}

Json scene_to_json(const SceneDescription& scene) {
  Json j;
  Json rooms = Json::array();
  for (const Room& room : scene.rooms) {
    Json r;
    r["name"] = room.name;
    r["floor_material"] = room.floor_material;
    r["wall_material"] = room.wall_material;
    Json corners = Json::array();
    for (const Vec2& c : room.corners) corners.push_back({c.x, c.y});
    r["corners"] = std::move(corners);
    r["wall_height"] = room.wall_height;
    rooms.push_back(std::move(r));
  }
  j["rooms"] = std::move(rooms);
  Json conns = Json::array();
  for (const Connection& conn : scene.connections) {
    Json c;
    c["room_a"] = conn.room_a;
    c["room_b"] = conn.room_b;
    c["kind"] = to_string(conn.kind);
    if (!conn.width) {
      c["size"] = "N/A";
    } else if (*conn.width == 1.0) {
      c["size"] = "single";
    } else if (*conn.width == 2.0) {
      c["size"] = "double";
    } else {
      c["size"] = *conn.width;
    }
    c["style"] = conn.style;
    conns.push_back(std::move(c));
  }
  j["connections"] = std::move(conns);
  Json wins = Json::array();
  for (const WindowSpec& win : scene.windows) {
    Json w;
    w["room"] = win.room;
    w["wall"] = to_string(win.wall_direction);
    w["kind"] = to_string(win.kind);
    w["size"] = {win.width_cm, win.height_cm};
    w["quantity"] = win.quantity;
    w["base_height_cm"] = win.base_height_cm;
    wins.push_back(std::move(w));
  }
  j["windows"] = std::move(wins);
  j["objects"] = object_manifest_to_json(scene.objects);
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // what() reads "[json.exception.parse_error.101] parse error at line L,
    // column C: ..."; drop the bracketed tag and keep the located message.
    std::string message = e.what();
    if (const std::size_t tag = message.find("] "); tag != std::string::npos) {
      message.erase(0, tag + 2);
    }
    throw SceneError(SceneErrorCode::MalformedDocument, "JSON " + message);
  }
}

SceneDescription load_scene(const std::string& path) {
  return scene_from_json(parse_json_text(read_text_file(path)));
}

void save_scene(const std::string& path, const SceneDescription& scene) {
  write_text_file(path, scene_to_json(scene).dump(2) + "\n");
}

}  // namespace roomforge
