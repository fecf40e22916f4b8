#pragma once

#include <string>
#include <vector>

#include "roomforge/jsonio.hpp"
#include "roomforge/scene.hpp"

namespace roomforge {

// Filesystem trouble (unreadable input, unwritable output).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds a scene from a JSON document with keys rooms / connections /
// windows / objects. Accepts both structured entries and the pipe-delimited
// line formats (a connection may be the string
// "kitchen | living room | doorway | single | oak door").
SceneDescription scene_from_json(const Json& j);

// Canonical serialization; scene_from_json(scene_to_json(s)) == s.
Json scene_to_json(const SceneDescription& scene);

// Object catalog document: a map from object name to its entry.
std::vector<ObjectSpec> parse_object_manifest(const Json& j);
// A single catalog entry, e.g. the payload of an insert edit.
ObjectSpec object_spec_from_json(const std::string& name, const Json& entry);
Json object_manifest_to_json(const std::vector<ObjectSpec>& objects);

// File helpers shared by the CLI tools.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
Json parse_json_text(const std::string& text);  // MalformedDocument on bad JSON

SceneDescription load_scene(const std::string& path);
void save_scene(const std::string& path, const SceneDescription& scene);

}  // namespace roomforge
